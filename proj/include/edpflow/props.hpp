#pragma once

// Randomised property suites for every module, driven by one seed. Each suite draws
// `count` cases from hand-rolled generators and records the first counterexample.
// Suites that integrate trajectories draw max(1, count / 50) of them.

#include <cstdint>
#include <string>
#include <vector>

namespace edpflow::props {

struct SuiteResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  double max_violation = 0.0;  // largest relative violation seen (0 when all hold strictly)
  std::string counterexample;  // first failing case
  double seconds = 0.0;

  bool passed() const noexcept { return failures == 0; }
};

struct Options {
  std::uint64_t seed = 20240917;
  std::size_t count = 1000;
  std::string filter;  // run suites whose name starts with this prefix
};

std::vector<std::string> suite_names();

std::vector<SuiteResult> run(const Options& opts);

}  // namespace edpflow::props
