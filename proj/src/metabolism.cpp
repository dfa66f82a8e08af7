#include "ecometab/metabolism.hpp"

#include "ecometab/error.hpp"

#include <fmt/format.h>

#include <cmath>

namespace ecometab {

namespace {

void require_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError(fmt::format("significance level must lie in (0, 1), got {}", alpha));
    }
}

void require_aligned(const Series& a, const Series& b) {
    if (a.size() != b.size()) {
        throw AlignmentError(fmt::format("series cover {} and {} years", a.size(), b.size()));
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].year != b[i].year) {
            throw AlignmentError(fmt::format("year mismatch at position {}: {} vs {}", i, a[i].year, b[i].year));
        }
    }
}

std::vector<double> logs_of(const Series& s, std::string_view label) {
    std::vector<double> out;
    out.reserve(s.size());
    for (const auto& p : s.points()) {
        if (!(p.value > 0.0)) {
            throw DomainError(fmt::format("cannot take the log of {} = {} in {}", label, p.value, p.year));
        }
        out.push_back(std::log(p.value));
    }
    return out;
}

int sign_of(double v) {
    return (v > 0.0) - (v < 0.0);
}

}  // namespace

RegressionFit trend_fit(const LedgerSeries& ledger, Item item, const YearRange& period) {
    const Series y = extract_series(ledger, item, period);
    return ols_fit(y.time_regressor(), y);
}

std::vector<MetabolismPoint> metabolism_index(const LedgerSeries& ledger, const YearRange& period,
                                              Item numerator, Item denominator) {
    const Series num = extract_series(ledger, numerator, period);
    const Series den = extract_series(ledger, denominator, period);
    std::vector<MetabolismPoint> out;
    out.reserve(num.size());
    for (std::size_t i = 0; i < num.size(); ++i) {
        if (!(den[i].value > 0.0)) {
            throw DomainError(fmt::format("{} is not positive in {} ({})", item_name(denominator), den[i].year,
                                          den[i].value));
        }
        // Ratio first: an item over itself is then exactly 100.
        out.push_back({num[i].year, 100.0 * (num[i].value / den[i].value)});
    }
    return out;
}

GrowthRate arithmetic_growth(const Series& series, int start, int end) {
    if (start >= end) throw RangeError(fmt::format("growth window {}-{} is empty", start, end));
    const auto p0 = series.at(start);
    const auto pt = series.at(end);
    if (!p0 || !pt) {
        std::vector<int> missing;
        if (!p0) missing.push_back(start);
        if (!pt) missing.push_back(end);
        auto what = fmt::format("no value for {}", fmt::join(missing, " and "));
        throw MissingDataError(what, std::move(missing));
    }
    if (!(*p0 > 0.0)) throw DomainError(fmt::format("growth base in {} is not positive ({})", start, *p0));

    GrowthRate g;
    g.start_year = start;
    g.end_year = end;
    g.p0 = *p0;
    g.pt = *pt;
    g.t_years = end - start;
    g.cumulative = (g.pt - g.p0) / g.p0;
    g.r_per_year = (g.pt - g.p0) / (g.p0 * g.t_years);
    return g;
}

std::string_view allometry_name(Allometry a) {
    switch (a) {
        case Allometry::NegativeAllometric: return "negative_allometric";
        case Allometry::Isometric: return "isometric";
        case Allometry::PositiveAllometric: return "positive_allometric";
    }
    return "unknown";
}

Allometry classify_allometry(double b, double se_b, int n, double alpha) {
    require_alpha(alpha);
    if (n < 3) throw InsufficientDataError(fmt::format("allometry test needs n >= 3, got {}", n));
    if (!std::isfinite(b) || !std::isfinite(se_b) || se_b < 0.0) {
        throw DomainError(fmt::format("invalid exponent estimate b={} se={}", b, se_b));
    }
    if (se_b == 0.0) {
        if (std::abs(b - 1.0) <= kIsometryTolerance) return Allometry::Isometric;
        return b > 1.0 ? Allometry::PositiveAllometric : Allometry::NegativeAllometric;
    }
    const double t = (b - 1.0) / se_b;
    if (std::abs(t) <= t_critical(alpha, n - 2)) return Allometry::Isometric;
    return t > 0.0 ? Allometry::PositiveAllometric : Allometry::NegativeAllometric;
}

double AllometricFit::a() const {
    return std::exp(ln_a);
}

AllometricFit allometric_fit(const Series& dependent, const Series& explanatory, double alpha) {
    require_alpha(alpha);
    require_aligned(dependent, explanatory);
    const auto ln_dep = logs_of(dependent, "dependent");
    const auto ln_exp = logs_of(explanatory, "explanatory");
    const RegressionFit fit = ols_fit(std::span<const double>(ln_exp), std::span<const double>(ln_dep));

    AllometricFit out;
    out.ln_a = fit.intercept;
    out.se_ln_a = fit.se_intercept;
    out.b = fit.slope;
    out.se_b = fit.se_slope;
    out.standardized_slope = fit.standardized_slope;
    out.r_squared = fit.r_squared;
    out.f_statistic = fit.f_statistic;
    out.p_b = fit.p_slope;
    out.p_ln_a = fit.p_intercept;
    out.p_f = fit.p_f;
    out.se_estimate = fit.se_estimate;
    out.n = fit.n;
    out.exact_fit = fit.exact_fit;
    out.test_alpha = alpha;
    out.t_critical = t_critical(alpha, fit.n - 2);
    out.t_isometry = out.se_b > 0.0 ? (out.b - 1.0) / out.se_b : 0.0;
    out.classification = classify_allometry(out.b, out.se_b, out.n, alpha);
    return out;
}

AllometricFit allometric_fit(const LedgerSeries& ledger, Item dependent, Item explanatory,
                             const YearRange& period, double alpha) {
    const Series dep = extract_series(ledger, dependent, period);
    const Series exp = extract_series(ledger, explanatory, period);
    // Name the item in log-domain errors; the Series overload cannot.
    for (const auto* s : {&dep, &exp}) {
        for (const auto& p : s->points()) {
            if (!(p.value > 0.0)) {
                throw DomainError(fmt::format("cannot take the log of {} = {} in {}",
                                              item_name(s == &dep ? dependent : explanatory), p.value, p.year));
            }
        }
    }
    AllometricFit fit = allometric_fit(dep, exp, alpha);
    fit.dependent = dependent;
    fit.explanatory = explanatory;
    return fit;
}

std::vector<Crossing> crossover_years(const Series& a, const Series& b) {
    require_aligned(a, b);
    if (a.size() < 2) throw InsufficientDataError("crossover detection needs at least 2 years");
    std::vector<Crossing> out;
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
        const double d0 = a[i].value - b[i].value;
        const double d1 = a[i + 1].value - b[i + 1].value;
        const int s0 = sign_of(d0);
        const int s1 = sign_of(d1);
        if (s0 == 0 || s0 == s1) continue;
        const int y0 = a[i].year;
        const int y1 = a[i + 1].year;
        const double at = s1 == 0 ? static_cast<double>(y1) : y0 + (y1 - y0) * d0 / (d0 - d1);
        out.push_back({y0, y1, at, s1});
    }
    return out;
}

CostProfile mean_cost_profile(const LedgerSeries& ledger, const YearRange& period) {
    const LedgerSeries window = ledger.restricted(period);
    if (window.empty()) {
        throw EmptyRangeError(fmt::format("no records in {}-{}", period.first, period.last));
    }
    CostProfile profile;
    for (Item item : kCostItems) {
        std::vector<double> values;
        values.reserve(window.size());
        for (const auto& r : window.records()) {
            if (auto v = r.value(item)) values.push_back(*v);
        }
        if (values.size() != window.size()) {
            profile.omitted.push_back(item);
            continue;
        }
        profile.items.push_back({item, descriptives(values)});
    }
    return profile;
}

}  // namespace ecometab
