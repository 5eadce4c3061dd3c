#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace kbc::verify {

struct OracleCheck {
  std::string name;
  bool passed = false;
  double value = 0;
  double expected = 0;
  double tolerance = 0;
  std::string detail;
};

struct SuiteOptions {
  std::uint64_t seed = 0;
  std::size_t restarts = 50;
  std::size_t random_cases = 20;
};

/// Runs every mathematical oracle: Omega arithmetic, balancing, nuclear norm search,
/// the non-convexity certificate and the hierarchy MRR.
std::vector<OracleCheck> run_oracle_suite(const SuiteOptions& options = {});

}  // namespace kbc::verify
