#include "hydrec/cli.hpp"

int main(int argc, char** argv) { return hydrec::run_cli(argc, argv); }
