#pragma once

#include "ecometab/ledger.hpp"
#include "ecometab/stats.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace ecometab {

/// Linear time trend of one item: item = intercept + slope * year.
RegressionFit trend_fit(const LedgerSeries& ledger, Item item, const YearRange& period);

/// Share of one item in another for a single year, in percent.
struct MetabolismPoint {
    int year;
    double m_percent;
};

/// 100 * numerator / denominator for every year of the period. Throws
/// DomainError naming the first year whose denominator is not positive.
std::vector<MetabolismPoint> metabolism_index(const LedgerSeries& ledger, const YearRange& period,
                                              Item numerator = Item::CostOfPersonnel,
                                              Item denominator = Item::TotalRevenue);

/// Arithmetic (non-compounding) growth between two levels.
struct GrowthRate {
    int start_year = 0;
    int end_year = 0;
    double p0 = 0.0;
    double pt = 0.0;
    /// end_year - start_year.
    int t_years = 0;
    /// (pt - p0) / (p0 * t_years)
    double r_per_year = 0.0;
    /// (pt - p0) / p0
    double cumulative = 0.0;
};

GrowthRate arithmetic_growth(const Series& series, int start, int end);

enum class Allometry { NegativeAllometric, Isometric, PositiveAllometric };

std::string_view allometry_name(Allometry a);

/// Equality tolerance on B when the fit is exact (se_b == 0).
inline constexpr double kIsometryTolerance = 1e-12;

/// Two-sided t-test of B == 1 at level alpha with n - 2 degrees of freedom.
/// With se_b == 0 the estimate is compared to 1 directly.
Allometry classify_allometry(double b, double se_b, int n, double alpha);

/// Log-log fit ln(dependent) = ln_a + b * ln(explanatory).
struct AllometricFit {
    Item dependent = Item::CostOfPersonnel;
    Item explanatory = Item::TotalRevenue;
    double ln_a = 0.0;
    double se_ln_a = 0.0;
    double b = 0.0;
    double se_b = 0.0;
    double standardized_slope = 0.0;
    double r_squared = 0.0;
    double f_statistic = 0.0;
    double p_b = 1.0;
    double p_ln_a = 1.0;
    double p_f = 1.0;
    double se_estimate = 0.0;
    int n = 0;
    /// (b - 1) / se_b; zero when the fit is exact.
    double t_isometry = 0.0;
    double t_critical = 0.0;
    bool exact_fit = false;
    Allometry classification = Allometry::Isometric;
    double test_alpha = 0.05;

    double a() const;
};

AllometricFit allometric_fit(const Series& dependent, const Series& explanatory, double alpha = 0.05);
AllometricFit allometric_fit(const LedgerSeries& ledger, Item dependent, Item explanatory,
                             const YearRange& period, double alpha = 0.05);

/// Change of sign of a - b between two consecutive years.
struct Crossing {
    int year_from;
    int year_to;
    /// Linearly interpolated abscissa where a - b vanishes.
    double at;
    /// Sign of a - b after the crossing (0 when the series meet exactly).
    int sign_after;
};

/// A pair crosses when a - b changes strictly from one sign to the other, or
/// when it moves from a non-zero value onto zero (then `at` is that year).
/// Leaving zero is not a new crossing.
std::vector<Crossing> crossover_years(const Series& a, const Series& b);

struct ItemDescriptives {
    Item item;
    Descriptives stats;
};

struct CostProfile {
    std::vector<ItemDescriptives> items;
    /// Cost items left out because they are missing in some year.
    std::vector<Item> omitted;
};

/// Descriptives of every cost item reported in all years of the period.
CostProfile mean_cost_profile(const LedgerSeries& ledger, const YearRange& period);

}  // namespace ecometab
