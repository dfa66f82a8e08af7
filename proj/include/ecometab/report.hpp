#pragma once

#include "ecometab/ledger.hpp"
#include "ecometab/metabolism.hpp"
#include "ecometab/stats.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ecometab {

enum class OutputFormat { Text, Json, Csv };

std::string_view format_name(OutputFormat f);
std::optional<OutputFormat> parse_format(std::string_view name);

struct ReportConfig {
    std::filesystem::path input_path;
    YearRange period = kDefaultPeriod;
    Item numerator_item = Item::CostOfPersonnel;
    Item denominator_item = Item::TotalRevenue;
    double alpha = 0.05;
    OutputFormat output_format = OutputFormat::Text;
    std::filesystem::path output_dir = ".";
    char delimiter = ',';
};

/// Throws RangeError / DomainError unless period.first < period.last and
/// alpha lies in (0, 1).
void validate_config(const ReportConfig& config);

/// Report sections; each CLI subcommand computes a subset.
enum class Section { Trend, Growth, Allometric, Metabolism, Crossings, MeanCosts, Validation, CrossCheck };

inline constexpr std::array<Section, 8> kAllSections = {
    Section::Trend,     Section::Growth,    Section::Allometric, Section::Metabolism,
    Section::Crossings, Section::MeanCosts, Section::Validation, Section::CrossCheck,
};

std::string_view section_key(Section s);

/// Items regressed on time and grown over the period.
inline constexpr std::array<Item, 3> kTrendItems = {Item::TotalRevenue, Item::CostOfPersonnel, Item::TotalCost};

struct TrendRow {
    Item item;
    RegressionFit fit;
};

struct GrowthRow {
    Item item;
    GrowthRate rate;
};

struct MetabolismRow {
    int year;
    double m_percent;
    /// other_costs as a share of the same denominator, when reported.
    std::optional<double> m_other_costs_percent;
};

/// Reference cumulative growth 1997-2015 of cost of personnel and total
/// revenue for the Italian National Research Council, with the 1997 share.
inline constexpr double kReferenceCumulativeNumerator = 1.6787;
inline constexpr double kReferenceCumulativeDenominator = 1.1872;
inline constexpr double kReferenceStartShare = 47.0;

/// Consistency between the share series and the growth rates:
/// M(end) / M(start) == (1 + cumulative_num) / (1 + cumulative_den).
struct ShareCrossCheck {
    int start_year = 0;
    int end_year = 0;
    double m_start = 0.0;
    double m_end = 0.0;
    double observed_ratio = 0.0;
    double cumulative_numerator = 0.0;
    double cumulative_denominator = 0.0;
    double predicted_ratio = 0.0;
    double reference_ratio = 0.0;
    double reference_implied_end_share = 0.0;
};

ShareCrossCheck share_cross_check(const std::vector<MetabolismPoint>& m, const GrowthRate& numerator,
                                  const GrowthRate& denominator);

struct Report {
    std::string organization;
    /// First and last year actually present inside the configured period.
    YearRange period;
    Item numerator_item = Item::CostOfPersonnel;
    Item denominator_item = Item::TotalRevenue;
    double alpha = 0.05;
    /// Ledger restricted to the period; source of the figure series.
    LedgerSeries ledger;
    std::vector<Section> sections;

    std::vector<TrendRow> trend_table;
    std::vector<GrowthRow> growth_table;
    std::optional<AllometricFit> allometric_table;
    std::vector<MetabolismRow> metabolism_series;
    /// Items compared by crossover detection (numerator vs other_costs).
    Item crossing_a = Item::CostOfPersonnel;
    Item crossing_b = Item::OtherCosts;
    std::vector<Crossing> crossings;
    CostProfile mean_costs;
    std::vector<ValidationFinding> validation_findings;
    std::optional<ShareCrossCheck> cross_check;
    std::vector<std::string> notes;

    bool has(Section s) const;
};

/// Runs the requested analyses over an already-loaded ledger. Errors are
/// rethrown as Error with the failing analysis named in the message.
Report build_report(const LedgerSeries& ledger, const ReportConfig& config,
                    std::span<const Section> sections = kAllSections);

/// Loads config.input_path and builds the full report.
Report run_report(const ReportConfig& config);

/// Trend fits as a table; text uses the usual regression layout (estimate with
/// its standard error beneath, stars, std. coefficient, R², F with p).
std::string render_trend_table(std::span<const TrendRow> rows, OutputFormat format);
std::string render_report(const Report& report, OutputFormat format);

inline constexpr std::array<std::string_view, 7> kFigureIds = {"fig1",  "fig2",  "fig3", "fig4",
                                                               "figA1", "figA2", "figA3"};

/// CSV content of one figure. Throws DomainError for an unknown id and
/// MissingDataError when the report lacks a needed series.
std::string figure_csv(const Report& report, std::string_view figure_id);
bool figure_available(const Report& report, std::string_view figure_id);

/// Writes <output_dir>/<figure_id>.csv atomically and returns its path.
std::filesystem::path emit_figure_data(const Report& report, std::string_view figure_id,
                                       const std::filesystem::path& output_dir);

/// Renders every figure first, then writes them; on a write failure the
/// files already written by this call are removed.
std::vector<std::filesystem::path> emit_figures(const Report& report, std::span<const std::string> figure_ids,
                                                const std::filesystem::path& output_dir);

}  // namespace ecometab
