#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace arrival {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  std::size_t mc_samples = 100000;   ///< score-variance records per n
  std::size_t mle_datasets = 10000;  ///< synthetic datasets for the Cramer-Rao check
  std::uint64_t seed = 20240611;
  /// Called once per finished check (progress reporting).
  std::function<void(const CheckResult&)> on_result;
};

/// The numbered acceptance criteria, in order.
std::vector<CheckResult> run_acceptance(const VerifyOptions& opt = {});

/// Module invariants that are not already part of the acceptance criteria.
std::vector<CheckResult> run_invariants(const VerifyOptions& opt = {});

}  // namespace arrival
