#include "ecometab/stats.hpp"

#include "ecometab/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace ecometab {

namespace {

// Mean with one correction pass; keeps the centred sums accurate when the
// data sit far from zero (calendar years, statement-scale money).
double centred_mean(std::span<const double> v) {
    double sum = 0.0;
    for (double a : v) sum += a;
    const double n = static_cast<double>(v.size());
    double mean = sum / n;
    double correction = 0.0;
    for (double a : v) correction += a - mean;
    return mean + correction / n;
}

void require_finite(std::span<const double> v, const char* what) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) throw DomainError(fmt::format("{} value {} is not finite", what, i));
    }
}

}  // namespace

RegressionFit ols_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw AlignmentError(fmt::format("regressor has {} points but response has {}", x.size(), y.size()));
    }
    if (x.size() < 3) {
        throw InsufficientDataError(fmt::format("regression needs at least 3 points, got {}", x.size()));
    }
    require_finite(x, "regressor");
    require_finite(y, "response");

    const std::size_t n = x.size();
    const int df = static_cast<int>(n) - 2;
    const double x_mean = centred_mean(x);
    const double y_mean = centred_mean(y);

    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - x_mean;
        const double dy = y[i] - y_mean;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0) || std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; })) {
        throw DegenerateRegressorError("regressor has zero variance");
    }

    RegressionFit fit;
    fit.n = static_cast<int>(n);

    if (std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; })) {
        fit.intercept = y[0];
        fit.residuals.assign(n, 0.0);
        fit.degenerate_response = true;
        return fit;
    }

    fit.slope = sxy / sxx;
    fit.intercept = y_mean - fit.slope * x_mean;
    fit.residuals.resize(n);
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = (y[i] - y_mean) - fit.slope * (x[i] - x_mean);
        fit.residuals[i] = e;
        sse += e * e;
    }

    fit.standardized_slope = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);

    if (sse <= kExactFitTolerance * syy) {
        fit.exact_fit = true;
        fit.r_squared = 1.0;
        fit.f_statistic = std::numeric_limits<double>::infinity();
        fit.p_slope = 0.0;
        fit.p_intercept = 0.0;
        fit.p_f = 0.0;
        return fit;
    }

    fit.r_squared = fit.standardized_slope * fit.standardized_slope;
    const double mse = sse / df;
    fit.se_estimate = std::sqrt(mse);
    fit.se_slope = std::sqrt(mse / sxx);
    fit.se_intercept = std::sqrt(mse * (1.0 / static_cast<double>(n) + x_mean * x_mean / sxx));
    fit.f_statistic = fit.slope * sxy / mse;
    fit.p_slope = p_value_t(fit.slope / fit.se_slope, df);
    fit.p_intercept = fit.se_intercept > 0.0 ? p_value_t(fit.intercept / fit.se_intercept, df) : 0.0;
    fit.p_f = p_value_f(fit.f_statistic, 1, df);
    return fit;
}

RegressionFit ols_fit(const Series& x, const Series& y) {
    if (x.size() != y.size()) {
        throw AlignmentError(fmt::format("regressor has {} years but response has {}", x.size(), y.size()));
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i].year != y[i].year) {
            throw AlignmentError(fmt::format("year mismatch at position {}: {} vs {}", i, x[i].year, y[i].year));
        }
    }
    const auto xv = x.values();
    const auto yv = y.values();
    return ols_fit(std::span<const double>(xv), std::span<const double>(yv));
}

Descriptives descriptives(std::span<const double> values) {
    if (values.empty()) throw InsufficientDataError("descriptives need at least one value");
    // Welford's running update.
    Descriptives d;
    double mean = 0.0;
    double m2 = 0.0;
    d.min = values[0];
    d.max = values[0];
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = values[i];
        const double delta = v - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (v - mean);
        d.min = std::min(d.min, v);
        d.max = std::max(d.max, v);
    }
    d.n = static_cast<int>(values.size());
    d.mean = std::clamp(mean, d.min, d.max);
    d.sd = d.n > 1 ? std::sqrt(std::max(m2, 0.0) / (d.n - 1)) : 0.0;
    return d;
}

}  // namespace ecometab
