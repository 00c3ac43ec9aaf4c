#pragma once

#include <string>
#include <vector>

namespace qsplit {

struct IdentityCheck {
  std::string module;
  std::string name;
  bool passed = false;
  double observed = 0.0;   // worst deviation or measured quantity
  double tolerance = 0.0;
  std::string detail;
};

/// Every library invariant as a runnable check, in module order.
std::vector<IdentityCheck> run_identities(std::size_t threads = 0);

}  // namespace qsplit
