// Acceptance gate: runs every criterion and prints one pass/fail line each.
// Exit status 0 only when all pass.

#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "sl2flow/verify.hpp"

int main(int argc, char** argv) {
  sl2flow::VerifyOptions opts;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) {
      opts.seed = std::strtoull(argv[++i], nullptr, 10);
    } else if (std::strcmp(argv[i], "--horizon") == 0 && i + 1 < argc) {
      opts.horizon = std::strtod(argv[++i], nullptr);
    } else if (std::strcmp(argv[i], "--suite") == 0 && i + 1 < argc) {
      opts.suites.push_back(argv[++i]);
    } else {
      std::fprintf(stderr,
                   "usage: %s [--seed N] [--horizon T] [--suite name]...\n",
                   argv[0]);
      return 2;
    }
  }

  const auto results = sl2flow::run_acceptance(opts);
  if (results.empty()) {
    std::fprintf(stderr, "no criteria selected\n");
    return 2;
  }

  bool all_passed = true;
  for (const auto& r : results) {
    all_passed = all_passed && r.passed;
    std::printf("[%s] %2d %-17s measured=%.3e threshold=%.3e  %s\n",
                r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.measured,
                r.threshold, r.details.c_str());
  }
  std::printf("%s: %zu criteria\n", all_passed ? "ACCEPTED" : "REJECTED",
              results.size());
  return all_passed ? 0 : 1;
}
