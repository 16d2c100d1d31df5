#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vclose {

/// Deliberate defects for checking that the suite notices them.
enum class Fault {
  None,
  ProjectSign,  // negate every non-trivial projection
};

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelftestResult {
  std::vector<SelftestCheck> checks;
  bool passed() const;
  /// nullptr when everything passed.
  const SelftestCheck* first_failure() const;
};

SelftestResult run_selftest(Fault fault = Fault::None, std::uint64_t seed = 1);

}  // namespace vclose
