// Prints one PASS/FAIL line per acceptance criterion; exits nonzero if any fails.
#include <cstdio>

#include "arrival/verify.hpp"

int main() {
  arrival::VerifyOptions opt;
  opt.on_result = [](const arrival::CheckResult& r) {
    std::printf("%s  %-36s %7.2fs  %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.seconds, r.detail.c_str());
    std::fflush(stdout);
  };
  const auto results = arrival::run_acceptance(opt);
  int failed = 0;
  for (const auto& r : results) failed += r.pass ? 0 : 1;
  std::printf("%zu criteria, %d failed\n", results.size(), failed);
  return failed == 0 ? 0 : 1;
}
