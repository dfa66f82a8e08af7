#include "ecometab/error.hpp"
#include "ecometab/stats.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace ecometab;
using doctest::Approx;

namespace {

std::vector<double> years_as_values(int first, int n) {
    std::vector<double> x(n);
    std::iota(x.begin(), x.end(), static_cast<double>(first));
    return x;
}

RegressionFit fit(const std::vector<double>& x, const std::vector<double>& y) {
    return ols_fit(std::span<const double>(x), std::span<const double>(y));
}

// Random 19-point trend data on calendar years with a random scale.
std::pair<std::vector<double>, std::vector<double>> random_dataset(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::normal_distribution<double> noise(0.0, 1.0);
    const double scale = std::pow(10.0, 9.0 * (u(rng) + 1.0) / 2.0);
    const double slope = u(rng) * scale * 0.1;
    const double level = scale * (2.0 + u(rng));
    auto x = years_as_values(1997, 19);
    std::vector<double> y;
    for (double xi : x) y.push_back(level + slope * (xi - 2006.0) + noise(rng) * scale * 0.3);
    return {x, y};
}

}  // namespace

TEST_CASE("ols_fit on a perfect line") {
    const auto x = years_as_values(2000, 10);
    std::vector<double> y;
    for (double v : x) y.push_back(2.0 * v + 1.0);
    const auto f = fit(x, y);
    CHECK(f.n == 10);
    CHECK(f.slope == Approx(2.0).epsilon(1e-14));
    CHECK(f.intercept == Approx(1.0).epsilon(1e-9));
    CHECK(f.r_squared == 1.0);
    CHECK(f.exact_fit);
    CHECK(f.se_slope == 0.0);
    CHECK(f.p_slope == 0.0);
    CHECK(f.p_f == 0.0);
    CHECK(std::isinf(f.f_statistic));
    for (double e : f.residuals) CHECK(e == Approx(0.0).epsilon(1e-12));
}

TEST_CASE("ols_fit with a constant response") {
    const auto x = years_as_values(1997, 19);
    const std::vector<double> y(19, 4.2e8);
    const auto f = fit(x, y);
    CHECK(f.degenerate_response);
    CHECK(f.slope == 0.0);
    CHECK(f.intercept == 4.2e8);
    CHECK(f.r_squared == 0.0);
    CHECK(f.f_statistic == 0.0);
    CHECK(f.p_slope == 1.0);
}

TEST_CASE("ols_fit matches 50-digit reference on a fixed dataset") {
    // Expected values computed once with mpmath at 50 significant digits.
    const std::vector<double> y = {412.5, 398.25, 455.0,  470.75, 468.0,  502.5,  519.25, 530.0,  561.75, 548.5,
                                   590.0, 612.25, 601.0,  640.5,  655.75, 671.0,  668.25, 702.5,  725.0};
    const auto x = years_as_values(1997, 19);
    const auto f = fit(x, y);
    CHECK(f.slope == Approx(17.314912280701754386).epsilon(1e-12));
    CHECK(f.intercept == Approx(-34168.832456140350877).epsilon(1e-11));
    CHECK(f.se_slope == Approx(0.51433469186663396608).epsilon(1e-11));
    CHECK(f.se_intercept == Approx(1031.7592378495718211).epsilon(1e-10));
    CHECK(f.standardized_slope == Approx(0.9925831869116030709).epsilon(1e-13));
    CHECK(f.r_squared == Approx(0.9852213829395943578).epsilon(1e-13));
    CHECK(f.f_statistic == Approx(1133.3106096135212717).epsilon(1e-11));
    CHECK(f.p_slope == Approx(5.3101973664103992476e-17).epsilon(1e-8));
}

TEST_CASE("ols_fit agrees with brute-force least squares") {
    std::mt19937_64 rng(1901);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int k = 0; k < 5; ++k) {
        const auto x = years_as_values(1997, 19);
        std::vector<double> y;
        const double slope = 3e6 * (k + 1);
        for (double xi : x) y.push_back(1e9 + slope * (xi - 1997.0) + 4e6 * noise(rng));
        const auto f = fit(x, y);
        const auto ref = oracle::brute_force_least_squares(x, y);
        CHECK(oracle::rel_close(f.slope, ref.slope, 1e-8));
        CHECK(oracle::rel_close(f.intercept, ref.intercept, 1e-8));
    }
}

TEST_CASE("ols_fit errors") {
    const auto x = years_as_values(2000, 5);
    CHECK_THROWS_AS(fit(x, {1, 2, 3}), AlignmentError);
    CHECK_THROWS_AS(fit({1, 2}, {1, 2}), InsufficientDataError);
    CHECK_THROWS_AS(fit({3, 3, 3, 3}, {1, 2, 3, 4}), DegenerateRegressorError);
    CHECK_THROWS_AS(fit({1, 2, 3}, {1, NAN, 3}), DomainError);
    const Series a({{2000, 1}, {2001, 2}, {2002, 3}});
    const Series b({{2000, 1}, {2001, 2}, {2003, 3}});
    CHECK_THROWS_AS(ols_fit(a, b), AlignmentError);
}

TEST_CASE("ols_fit identities hold on random data") {
    std::mt19937_64 rng(77);
    for (int k = 0; k < 200; ++k) {
        const auto [x, y] = random_dataset(rng);
        const auto f = fit(x, y);
        const double ymax = std::abs(*std::max_element(y.begin(), y.end(), [](double a, double b) {
            return std::abs(a) < std::abs(b);
        }));
        const double rsum = std::accumulate(f.residuals.begin(), f.residuals.end(), 0.0);
        CHECK(std::abs(rsum) <= 1e-9 * ymax * f.n);
        CHECK(oracle::rel_close(f.standardized_slope, oracle::pearson(x, y), 1e-10));
        CHECK(oracle::rel_close(f.r_squared, f.standardized_slope * f.standardized_slope, 1e-10));
        CHECK(oracle::rel_close(f.f_statistic, std::pow(f.slope / f.se_slope, 2), 1e-10));
        CHECK(oracle::rel_close(f.p_f, f.p_slope, 1e-8));
        CHECK(f.r_squared >= 0.0);
        CHECK(f.r_squared <= 1.0);
    }
}

TEST_CASE("ols_fit is affine equivariant in the response") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int k = 0; k < 50; ++k) {
        const auto [x, y] = random_dataset(rng);
        double a = u(rng);
        if (std::abs(a) < 0.1) a = 0.5;
        const double b = u(rng) * std::abs(y.front());
        std::vector<double> y2;
        for (double v : y) y2.push_back(a * v + b);
        const auto f1 = fit(x, y);
        const auto f2 = fit(x, y2);
        CHECK(oracle::rel_close(f2.slope, a * f1.slope, 1e-9));
        CHECK(oracle::rel_close(f2.se_slope, std::abs(a) * f1.se_slope, 1e-9));
        CHECK(oracle::rel_close(f2.standardized_slope, std::copysign(1.0, a) * f1.standardized_slope, 1e-9));
        CHECK(oracle::rel_close(f2.r_squared, f1.r_squared, 1e-9));
        CHECK(oracle::rel_close(f2.f_statistic, f1.f_statistic, 1e-9));
        CHECK(oracle::rel_close(f2.p_slope, f1.p_slope, 1e-9));
        CHECK(oracle::rel_close(f2.p_f, f1.p_f, 1e-9));
    }
}

TEST_CASE("shifting the regressor only moves the intercept") {
    std::mt19937_64 rng(6);
    for (int k = 0; k < 50; ++k) {
        const auto [x, y] = random_dataset(rng);
        const double c = -1996.0 + k;
        std::vector<double> xs;
        for (double v : x) xs.push_back(v + c);
        const auto f1 = fit(x, y);
        const auto f2 = fit(xs, y);
        CHECK(oracle::rel_close(f2.slope, f1.slope, 1e-9));
        CHECK(oracle::rel_close(f2.r_squared, f1.r_squared, 1e-9));
        CHECK(oracle::rel_close(f2.f_statistic, f1.f_statistic, 1e-9));
        const double expected = f1.intercept - f1.slope * c;
        CHECK(std::abs(f2.intercept - expected) <= 1e-9 * (std::abs(f1.intercept) + std::abs(expected)));
    }
}

TEST_CASE("descriptives") {
    const std::vector<double> v{1, 2, 3};
    const auto d = descriptives(v);
    CHECK(d.n == 3);
    CHECK(d.mean == 2.0);
    CHECK(d.sd == 1.0);
    CHECK(d.min == 1.0);
    CHECK(d.max == 3.0);

    const std::vector<double> one{5};
    const auto s = descriptives(one);
    CHECK(s.mean == 5.0);
    CHECK(s.sd == 0.0);

    CHECK_THROWS_AS(descriptives(std::vector<double>{}), InsufficientDataError);
}

TEST_CASE("descriptives match a two-pass computation") {
    std::mt19937_64 rng(1000);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(1000);
    for (auto& x : v) x = u(rng);
    const auto d = descriptives(v);
    const auto ref = oracle::two_pass(v);
    CHECK(oracle::rel_close(d.mean, ref.mean, 1e-12));
    CHECK(oracle::rel_close(d.sd, ref.sd, 1e-12));
    CHECK(d.min <= d.mean);
    CHECK(d.mean <= d.max);
}

TEST_CASE("regularized incomplete beta closed forms") {
    for (double x : {0.0, 0.1, 0.37, 0.5, 0.9, 1.0}) {
        CHECK(regularized_incomplete_beta(1.0, 1.0, x) == Approx(x).epsilon(1e-14));
        CHECK(regularized_incomplete_beta(3.0, 1.0, x) == Approx(x * x * x).epsilon(1e-13));
    }
    for (double a : {0.5, 2.0, 8.5, 50.0}) CHECK(regularized_incomplete_beta(a, a, 0.5) == Approx(0.5).epsilon(1e-13));
    CHECK_THROWS_AS(regularized_incomplete_beta(0.0, 1.0, 0.5), DomainError);
    CHECK_THROWS_AS(regularized_incomplete_beta(1.0, 1.0, 1.5), DomainError);
}

TEST_CASE("p_value_t") {
    CHECK(p_value_t(0.0, 1) == 1.0);
    CHECK(p_value_t(0.0, 500) == 1.0);

    const double p = p_value_t(1.96, 10000);
    CHECK(std::abs(p - 0.05) < 5e-4);
    CHECK(std::abs(p - oracle::p_value_t(1.96, 10000)) < 1e-9);
    // Reference tail from an independent statistics package.
    CHECK(p == Approx(0.05002352023183303).epsilon(1e-9));

    const double p17 = p_value_t(6.038, 17);
    CHECK(p17 < 0.001);
    CHECK(p17 == Approx(1.3306392216633767e-05).epsilon(1e-7));
    CHECK(p_value_t(-2.5, 17) == p_value_t(2.5, 17));

    CHECK_THROWS_AS(p_value_t(1.0, 0), DomainError);
    CHECK_THROWS_AS(p_value_t(INFINITY, 5), DomainError);
    CHECK_THROWS_AS(p_value_t(NAN, 5), DomainError);
}

TEST_CASE("p_value_t is strictly decreasing in |t|") {
    for (int df : {1, 2, 5, 17, 100, 10000}) {
        double prev = 2.0;
        for (int i = 0; i <= 1000; ++i) {
            const double p = p_value_t(0.01 * i, df);
            CHECK(p < prev);
            prev = p;
        }
    }
}

TEST_CASE("p_value_f") {
    CHECK(p_value_f(0.0, 1, 17) == 1.0);
    CHECK(p_value_f(0.0, 4, 9) == 1.0);
    CHECK(std::abs(p_value_f(2.5 * 2.5, 1, 17) - p_value_t(2.5, 17)) <= 1e-8);

    const double p = p_value_f(4.0, 1, 30);
    CHECK(std::abs(p - oracle::p_value_f(4.0, 1, 30)) < 1e-6);
    CHECK(p == Approx(0.05462504496298307).epsilon(1e-9));

    CHECK_THROWS_AS(p_value_f(-1.0, 1, 2), DomainError);
    CHECK_THROWS_AS(p_value_f(1.0, 0, 2), DomainError);
    CHECK_THROWS_AS(p_value_f(1.0, 1, -2), DomainError);
}

TEST_CASE("t_critical") {
    // 50-digit reference root of the t tail at alpha = 0.05, df = 17.
    CHECK(t_critical(0.05, 17) == Approx(2.1098155778333170573).epsilon(1e-11));
    for (int df : {1, 5, 17, 100}) {
        for (double alpha : {0.10, 0.05, 0.01, 0.001}) {
            const double t = t_critical(alpha, df);
            CHECK(p_value_t(t, df) == Approx(alpha).epsilon(1e-10));
            CHECK(t == Approx(oracle::t_critical(alpha, df)).epsilon(1e-7));
        }
    }
    CHECK_THROWS_AS(t_critical(0.0, 17), DomainError);
    CHECK_THROWS_AS(t_critical(1.0, 17), DomainError);
}

TEST_CASE("significance stars") {
    CHECK(significance_stars(0.0004) == "***");
    CHECK(significance_stars(0.001) == "**");
    CHECK(significance_stars(0.009) == "**");
    CHECK(significance_stars(0.04) == "*");
    CHECK(significance_stars(0.05) == "");
    CHECK(significance_stars(0.2) == "");
}
