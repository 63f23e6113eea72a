#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sl2flow {

// One acceptance criterion: a quantitative property of the implementation
// checked at a pinned tolerance.
struct CriterionResult {
  int id = 0;
  std::string name;       // stable machine name (suite filter key)
  std::string checks;     // what property the criterion verifies
  bool passed = false;
  double measured = 0.0;  // worst observed value
  double threshold = 0.0; // pinned bound the measurement must respect
  std::string details;    // deterministic free-form measurements
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  double horizon = 1000.0;            // window for the asymptote criterion
  int parallelism = 0;                // 0 = hardware concurrency
  std::vector<std::string> suites;    // empty = all; names per criterion
};

// Names of all criteria in id order.
std::vector<std::string> acceptance_suite_names();

// Runs the acceptance criteria (optionally a filtered subset) and returns
// the results in id order. Criteria run concurrently; each result is
// deterministic for a fixed seed.
std::vector<CriterionResult> run_acceptance(const VerifyOptions& opts = {});

}  // namespace sl2flow
