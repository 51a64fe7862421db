#pragma once

// Random-matrix property campaign: every cross-route invariant of the library
// evaluated on Haar-random splitters.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bellsplit/tolerance.hpp"

namespace bellsplit {

struct VerifyOptions {
  std::size_t count = 100;
  std::uint64_t seed = 1;
  Tolerances tolerances = kDefaultTolerances;
  /// Negative control: build rho from sign-flipped gammas so the suites must fail.
  bool inject_fault = false;
};

struct SuiteResult {
  std::string name;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  std::size_t checks = 0;
  std::size_t skipped = 0;  ///< degenerate instances outside the suite's domain

  bool passed() const { return max_deviation <= tolerance; }
};

struct VerifyReport {
  VerifyOptions options;
  std::vector<SuiteResult> suites;

  bool passed() const;
};

/// Throws InvalidInput when count == 0.
VerifyReport run_campaign(const VerifyOptions& options);

/// Fixed-format summary, one line per suite.
void write_report(std::ostream& out, const VerifyReport& report);

}  // namespace bellsplit
