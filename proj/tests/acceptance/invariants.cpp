// Prints one PASS/FAIL line per invariant check; exits nonzero if any fails.
#include <cstdio>

#include "arrival/verify.hpp"

int main() {
  arrival::VerifyOptions opt;
  opt.on_result = [](const arrival::CheckResult& r) {
    std::printf("%s  %-52s %7.2fs  %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.seconds, r.detail.c_str());
    std::fflush(stdout);
  };
  const auto results = arrival::run_invariants(opt);
  int failed = 0;
  for (const auto& r : results) failed += r.pass ? 0 : 1;
  std::printf("%zu invariants, %d failed\n", results.size(), failed);
  return failed == 0 ? 0 : 1;
}
