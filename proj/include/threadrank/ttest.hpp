#pragma once

#include <cstddef>
#include <span>

namespace threadrank {

struct TTestResult {
    double t = 0.0;
    std::size_t df = 0;      ///< n - 1
    double p = 1.0;          ///< two-tailed
    bool significant = false;  ///< p < alpha
    bool degenerate = false;   ///< zero variance with a nonzero mean difference
};

/// Regularized incomplete beta I_x(a, b), a, b > 0, x in [0, 1].
[[nodiscard]] double regularized_incomplete_beta(double a, double b, double x);

/// Two-tailed p-value of Student's t with `df` degrees of freedom.
[[nodiscard]] double student_t_two_tailed(double t, double df);

/// Paired t-test on per-query values. Requires equal lengths >= 2
/// (std::invalid_argument otherwise).
///
/// Zero variance of the differences: t = 0, p = 1 when the mean difference is 0;
/// otherwise t = +/-inf, p = 0 and `degenerate` is set.
[[nodiscard]] TTestResult paired_ttest(std::span<double const> a, std::span<double const> b, double alpha = 0.05);

}  // namespace threadrank
