#include "hydrec/diagnostics.hpp"

#include <algorithm>

namespace hydrec {

bool Diagnostics::contains(const std::string& needle) const {
  return std::any_of(warnings_.begin(), warnings_.end(),
                     [&](const std::string& w) { return w.find(needle) != std::string::npos; });
}

}  // namespace hydrec
