#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vclose/analyze.hpp"

namespace vclose {

struct VerifyOptions {
  std::size_t samples = 10'000;  // retraction pairs
  long bound = 100;              // retraction sample coordinates
  std::size_t spot_trials = 1'000;
  long spot_bound = 50;
  std::uint64_t seed = 1;
};

struct VerificationResult {
  std::string name;
  bool passed = false;
  std::size_t samples = 0;  // 0 for exact checks
};

/// verify_retraction, or verify_solution_in_G + certificate validity + spot check.
std::vector<VerificationResult> run_verification(const Verdict& verdict, const VerifyOptions& options);

struct Report {
  const Verdict* verdict = nullptr;
  std::vector<VerificationResult> verification;
  std::optional<double> seconds;  // only when timing was requested
};

std::string render_text(const Report& report);
/// JSON document (keys sorted, two-space indent).
std::string render_structured(const Report& report);

}  // namespace vclose
