#include "ecometab/error.hpp"
#include "ecometab/stats.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>

namespace ecometab {

namespace {

constexpr double kCfTolerance = 1e-14;
constexpr int kCfMaxIterations = 300;
constexpr double kTiny = 1e-300;

// Continued fraction for I_x(a, b) (modified Lentz). Converges fast for
// x < (a + 1) / (a + b + 2); the caller swaps arguments otherwise.
double beta_continued_fraction(double a, double b, double x) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kCfMaxIterations; ++m) {
        const double m2 = 2.0 * m;
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
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kCfTolerance) return h;
    }
    throw ConvergenceError(
        fmt::format("incomplete beta continued fraction did not converge (a={}, b={}, x={})", a, b, x));
}

// I_x(a, b) with the complement y = 1 - x supplied separately, so callers
// that know y exactly avoid cancellation near x = 1.
double incomplete_beta(double a, double b, double x, double y) {
    if (x <= 0.0) return 0.0;
    if (y <= 0.0) return 1.0;
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log(y);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front * beta_continued_fraction(b, a, y) / b;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("incomplete beta needs a > 0 and b > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError(fmt::format("incomplete beta argument {} outside [0, 1]", x));
    return incomplete_beta(a, b, x, 1.0 - x);
}

double p_value_t(double t, int df) {
    if (df <= 0) throw DomainError(fmt::format("t distribution needs df >= 1, got {}", df));
    if (!std::isfinite(t)) throw DomainError("t statistic must be finite");
    if (t == 0.0) return 1.0;
    const double nu = df;
    const double t2 = t * t;
    const double x = nu / (nu + t2);
    const double y = t2 / (nu + t2);
    return incomplete_beta(0.5 * nu, 0.5, x, y);
}

double p_value_f(double f, int df1, int df2) {
    if (df1 <= 0 || df2 <= 0) {
        throw DomainError(fmt::format("F distribution needs positive df, got ({}, {})", df1, df2));
    }
    if (std::isnan(f) || f < 0.0) throw DomainError(fmt::format("F statistic must be >= 0, got {}", f));
    if (f == 0.0) return 1.0;
    if (std::isinf(f)) return 0.0;
    const double d1f = df1 * f;
    const double denom = df2 + d1f;
    return incomplete_beta(0.5 * df2, 0.5 * df1, df2 / denom, d1f / denom);
}

double t_critical(double alpha, int df) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError(fmt::format("alpha must lie in (0, 1), got {}", alpha));
    if (df <= 0) throw DomainError(fmt::format("t distribution needs df >= 1, got {}", df));
    double lo = 0.0;
    double hi = 1.0;
    while (p_value_t(hi, df) > alpha) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) throw ConvergenceError("t critical value bracket overflow");
    }
    for (int i = 0; i < 400 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (p_value_t(mid, df) > alpha) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::string_view significance_stars(double p) {
    if (p < 0.001) return "***";
    if (p < 0.01) return "**";
    if (p < 0.05) return "*";
    return "";
}

}  // namespace ecometab
