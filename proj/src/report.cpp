#include "ecometab/report.hpp"

#include "ecometab/error.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace ecometab {

namespace {

template <typename F>
void run_analysis(std::string_view analysis, F&& f) {
    try {
        f();
    } catch (const Error& e) {
        throw Error(fmt::format("{}: {}", analysis, e.what()));
    }
}

bool item_complete(const LedgerSeries& ledger, Item item) {
    const auto recs = ledger.records();
    return std::all_of(recs.begin(), recs.end(), [&](const FiscalRecord& r) { return r.value(item).has_value(); });
}

}  // namespace

std::string_view format_name(OutputFormat f) {
    switch (f) {
        case OutputFormat::Text: return "text";
        case OutputFormat::Json: return "json";
        case OutputFormat::Csv: return "csv";
    }
    return "unknown";
}

std::optional<OutputFormat> parse_format(std::string_view name) {
    if (name == "text") return OutputFormat::Text;
    if (name == "json") return OutputFormat::Json;
    if (name == "csv") return OutputFormat::Csv;
    return std::nullopt;
}

std::string_view section_key(Section s) {
    switch (s) {
        case Section::Trend: return "trend";
        case Section::Growth: return "growth";
        case Section::Allometric: return "allometric";
        case Section::Metabolism: return "metabolism";
        case Section::Crossings: return "crossings";
        case Section::MeanCosts: return "mean_costs";
        case Section::Validation: return "validation";
        case Section::CrossCheck: return "cross_check";
    }
    return "unknown";
}

void validate_config(const ReportConfig& config) {
    if (config.period.first >= config.period.last) {
        throw RangeError(fmt::format("period {}-{} must have start < end", config.period.first, config.period.last));
    }
    if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
        throw DomainError(fmt::format("alpha must lie in (0, 1), got {}", config.alpha));
    }
}

bool Report::has(Section s) const {
    return std::find(sections.begin(), sections.end(), s) != sections.end();
}

ShareCrossCheck share_cross_check(const std::vector<MetabolismPoint>& m, const GrowthRate& numerator,
                                  const GrowthRate& denominator) {
    if (m.empty()) throw InsufficientDataError("share cross-check needs a non-empty share series");
    ShareCrossCheck c;
    c.start_year = m.front().year;
    c.end_year = m.back().year;
    c.m_start = m.front().m_percent;
    c.m_end = m.back().m_percent;
    c.observed_ratio = c.m_end / c.m_start;
    c.cumulative_numerator = numerator.cumulative;
    c.cumulative_denominator = denominator.cumulative;
    c.predicted_ratio = (1.0 + numerator.cumulative) / (1.0 + denominator.cumulative);
    c.reference_ratio = (1.0 + kReferenceCumulativeNumerator) / (1.0 + kReferenceCumulativeDenominator);
    c.reference_implied_end_share = kReferenceStartShare * c.reference_ratio;
    return c;
}

Report build_report(const LedgerSeries& ledger, const ReportConfig& config, std::span<const Section> sections) {
    validate_config(config);

    Report r;
    r.organization = ledger.organization();
    r.numerator_item = config.numerator_item;
    r.denominator_item = config.denominator_item;
    r.alpha = config.alpha;
    r.sections.assign(sections.begin(), sections.end());
    r.ledger = ledger.restricted(config.period);
    if (r.ledger.empty()) {
        throw EmptyRangeError(fmt::format("no records in {}-{}", config.period.first, config.period.last));
    }
    r.period = {r.ledger.records().front().year, r.ledger.records().back().year};
    r.crossing_a = config.numerator_item;
    r.crossing_b = Item::OtherCosts;

    const LedgerSeries& window = r.ledger;
    const YearRange& period = r.period;

    auto growth_of = [&](Item item) {
        return arithmetic_growth(extract_series(window, item, period), period.first, period.last);
    };

    if (r.has(Section::Trend)) {
        for (Item item : kTrendItems) {
            run_analysis(fmt::format("trend ({})", item_name(item)),
                         [&] { r.trend_table.push_back({item, trend_fit(window, item, period)}); });
        }
    }
    if (r.has(Section::Growth)) {
        for (Item item : kTrendItems) {
            run_analysis(fmt::format("growth ({})", item_name(item)),
                         [&] { r.growth_table.push_back({item, growth_of(item)}); });
        }
    }
    if (r.has(Section::Allometric)) {
        run_analysis("allometric", [&] {
            r.allometric_table =
                allometric_fit(window, config.numerator_item, config.denominator_item, period, config.alpha);
        });
    }

    std::vector<MetabolismPoint> shares;
    if (r.has(Section::Metabolism) || r.has(Section::CrossCheck)) {
        run_analysis("metabolism", [&] {
            shares = metabolism_index(window, period, config.numerator_item, config.denominator_item);
        });
    }
    if (r.has(Section::Metabolism)) {
        const bool companion = item_complete(window, Item::OtherCosts);
        if (!companion) r.notes.push_back("other_costs not reported in every year; companion share omitted");
        for (std::size_t i = 0; i < shares.size(); ++i) {
            MetabolismRow row{shares[i].year, shares[i].m_percent, std::nullopt};
            if (companion) {
                const auto& rec = window.records()[i];
                row.m_other_costs_percent = 100.0 * (*rec.other_costs / *rec.value(config.denominator_item));
            }
            r.metabolism_series.push_back(row);
        }
    }
    if (r.has(Section::Crossings)) {
        if (item_complete(window, r.crossing_b) && window.size() >= 2) {
            run_analysis("crossover", [&] {
                r.crossings = crossover_years(extract_series(window, r.crossing_a, period),
                                              extract_series(window, r.crossing_b, period));
            });
        } else {
            r.notes.push_back(fmt::format("crossover of {} and {} not computed: {}", item_name(r.crossing_a),
                                          item_name(r.crossing_b),
                                          window.size() < 2 ? "fewer than 2 years"
                                                            : "other_costs not reported in every year"));
        }
    }
    if (r.has(Section::MeanCosts)) {
        run_analysis("mean costs", [&] { r.mean_costs = mean_cost_profile(window, period); });
        for (Item item : r.mean_costs.omitted) {
            r.notes.push_back(fmt::format("{} omitted from mean costs: not reported in every year", item_name(item)));
        }
    }
    if (r.has(Section::Validation)) {
        r.validation_findings = validate_ledger(ledger);
    }
    if (r.has(Section::CrossCheck)) {
        run_analysis("cross-check", [&] {
            r.cross_check = share_cross_check(shares, growth_of(config.numerator_item),
                                              growth_of(config.denominator_item));
        });
    }
    return r;
}

Report run_report(const ReportConfig& config) {
    validate_config(config);
    ParseOptions options;
    options.delimiter = config.delimiter;
    const LedgerSeries ledger = parse_ledger_file(config.input_path, options);
    return build_report(ledger, config);
}

}  // namespace ecometab
