#include "threadrank/ttest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace threadrank {

namespace {

// Continued fraction for I_x(a, b) by the modified Lentz method.
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIterations = 1000;
    constexpr double kEpsilon = 1e-16;
    constexpr double kTiny = 1e-300;

    double qab = a + b;
    double qap = a + 1.0;
    double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEpsilon) {
            return h;
        }
    }
    return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::invalid_argument("incomplete beta requires a, b > 0");
    }
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::invalid_argument("incomplete beta requires x in [0, 1]");
    }
    if (x == 0.0 || x == 1.0) {
        return x;
    }
    double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_tailed(double t, double df) {
    if (!(df > 0.0)) {
        throw std::invalid_argument("degrees of freedom must be positive");
    }
    if (std::isinf(t)) {
        return 0.0;
    }
    double x = df / (df + t * t);
    return regularized_incomplete_beta(df / 2.0, 0.5, x);
}

TTestResult paired_ttest(std::span<double const> a, std::span<double const> b, double alpha) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("paired t-test needs samples of equal length");
    }
    if (a.size() < 2) {
        throw std::invalid_argument("paired t-test needs at least two pairs");
    }
    auto n = static_cast<double>(a.size());
    double mean = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        mean += a[i] - b[i];
    }
    mean /= n;
    double ss = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double dev = (a[i] - b[i]) - mean;
        ss += dev * dev;
    }
    double sd = std::sqrt(ss / (n - 1.0));

    TTestResult result;
    result.df = a.size() - 1;
    // Differences that agree to rounding error count as constant.
    if (sd <= 1e-12 * std::max(1.0, std::abs(mean))) {
        if (std::abs(mean) <= 1e-15) {
            result.t = 0.0;
            result.p = 1.0;
        } else {
            result.degenerate = true;
            result.t = std::copysign(std::numeric_limits<double>::infinity(), mean);
            result.p = 0.0;
        }
    } else {
        result.t = mean / (sd / std::sqrt(n));
        result.p = std::clamp(student_t_two_tailed(result.t, static_cast<double>(result.df)), 0.0, 1.0);
    }
    result.significant = result.p < alpha;
    return result;
}

}  // namespace threadrank
