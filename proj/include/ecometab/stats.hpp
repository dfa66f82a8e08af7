#pragma once

#include "ecometab/ledger.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace ecometab {

/// Simple OLS fit y = intercept + slope * x with classical inference.
struct RegressionFit {
    int n = 0;
    double intercept = 0.0;
    double slope = 0.0;
    double se_intercept = 0.0;
    double se_slope = 0.0;
    /// slope * sd(x) / sd(y); the Pearson correlation of x and y.
    double standardized_slope = 0.0;
    double r_squared = 0.0;
    /// Regression F with (1, n - 2) degrees of freedom.
    double f_statistic = 0.0;
    /// Two-sided t p-values, df n - 2.
    double p_slope = 1.0;
    double p_intercept = 1.0;
    double p_f = 1.0;
    /// Residual standard error sqrt(SSE / (n - 2)).
    double se_estimate = 0.0;
    std::vector<double> residuals;
    /// Response has zero variance: slope 0, R² 0, p-values 1.
    bool degenerate_response = false;
    /// All residuals vanish (relative to the response spread): standard
    /// errors and p-values are 0, R² is 1 and F is +inf.
    bool exact_fit = false;
};

/// Residual sum of squares below this fraction of the total sum of squares
/// counts as an exact fit.
inline constexpr double kExactFitTolerance = 1e-20;

/// Fits y on x. Both series must cover identical years (AlignmentError),
/// hold at least 3 points (InsufficientDataError) and x must vary
/// (DegenerateRegressorError).
RegressionFit ols_fit(const Series& x, const Series& y);
RegressionFit ols_fit(std::span<const double> x, std::span<const double> y);

struct Descriptives {
    int n = 0;
    double mean = 0.0;
    /// Sample standard deviation (n - 1 denominator); 0 for a single value.
    double sd = 0.0;
    double min = 0.0;
    double max = 0.0;
};

Descriptives descriptives(std::span<const double> values);

/// Regularized incomplete beta I_x(a, b) by continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

/// Two-sided P(|T| >= |t|) for Student t with df degrees of freedom.
double p_value_t(double t, int df);

/// Upper tail P(F >= f) for the F distribution with (df1, df2) degrees of freedom.
double p_value_f(double f, int df1, int df2);

/// Two-sided critical value: the t > 0 with p_value_t(t, df) == alpha.
double t_critical(double alpha, int df);

/// "***" below 0.001, "**" below 0.01, "*" below 0.05, empty otherwise.
std::string_view significance_stars(double p);

}  // namespace ecometab
