#pragma once

// Desk-scale oracle suite: every closed form paired with an independent
// computation.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ntcp/propagator.hpp"

namespace ntcp {

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;      // measured error or quantity
  double tolerance = 0.0;  // bound the value was compared against
  std::string detail;
};

using StepOneBuilder =
    std::function<ClosedFormPropagator(const StepOneInputs&, const HilbertSpace&, std::vector<int>)>;

struct VerifyOptions {
  /// Replaces u_step1 in the step-(i) oracle check (mutation testing).
  StepOneBuilder step1 = [](const StepOneInputs& in, const HilbertSpace& s, std::vector<int> q) {
    return u_step1(in, s, std::move(q));
  };
  /// When set, every check uses this tolerance instead of its own.
  std::optional<double> tolerance;
};

std::vector<CheckResult> run_verification(const VerifyOptions& options = {});

bool all_passed(const std::vector<CheckResult>& results);

/// One line per check: "[PASS] name  value <= tolerance  detail".
std::string format_results(const std::vector<CheckResult>& results);

}  // namespace ntcp
