#pragma once

#include <span>

namespace brainrf {

struct TestResult {
  double statistic = 0.0;
  double dof = 0.0;
  /// Two-sided p-value.
  double p_value = 1.0;
  /// Mean difference (first minus second) for t-tests.
  double mean_difference = 0.0;
};

/// Two-sided paired t-test on a - b. Needs at least two pairs. Identical
/// samples give p = 1; a constant non-zero difference gives p = 0.
TestResult paired_t_test(std::span<const double> a, std::span<const double> b);

/// Two-sided Welch t-test between independent samples of size >= 2.
TestResult welch_t_test(std::span<const double> a, std::span<const double> b);

/// Pearson chi-square goodness of fit; `expected` are counts with the same
/// total as `observed`. The p-value is the upper tail.
TestResult chi_square_test(std::span<const double> observed, std::span<const double> expected);

double mean(std::span<const double> x);

}  // namespace brainrf
