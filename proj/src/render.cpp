#include "ecometab/report.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace ecometab {

namespace {

using Json = nlohmann::ordered_json;

std::string fixed(double v, int decimals) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{:.{}f}", v, decimals);
}

// Shortest decimal that reads back to the same double.
std::string full(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{}", v);
}

std::string csv_cell(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

// Fixed-width text table: columns padded to the widest cell, two spaces
// apart, trailing blanks trimmed.
class TextTable {
public:
    enum class Align { Left, Right };

    explicit TextTable(std::vector<Align> aligns) : aligns_(std::move(aligns)) {}

    void add_row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }

    std::string render() const {
        std::vector<std::size_t> widths(aligns_.size(), 0);
        for (const auto& row : rows_) {
            for (std::size_t c = 0; c < row.size() && c < widths.size(); ++c) {
                widths[c] = std::max(widths[c], row[c].size());
            }
        }
        std::string out;
        for (const auto& row : rows_) {
            std::string line;
            for (std::size_t c = 0; c < widths.size(); ++c) {
                const std::string cell = c < row.size() ? row[c] : std::string();
                if (c > 0) line += "  ";
                const std::string pad(widths[c] - cell.size(), ' ');
                line += aligns_[c] == Align::Left ? cell + pad : pad + cell;
            }
            line.erase(line.find_last_not_of(' ') + 1);
            out += line;
            out += '\n';
        }
        return out;
    }

private:
    std::vector<Align> aligns_;
    std::vector<std::vector<std::string>> rows_;
};

using A = TextTable::Align;

constexpr std::string_view kStarsNote = "Note: *** p < 0.001, ** p < 0.01, * p < 0.05";

std::string fit_flags(const RegressionFit& f) {
    if (f.degenerate_response) return "constant response";
    if (f.exact_fit) return "exact fit";
    return "";
}

std::string trend_text(std::span<const TrendRow> rows) {
    std::string out = "Trend regressions: item = constant + coefficient * year\n\n";
    TextTable t({A::Left, A::Right, A::Right, A::Right, A::Right, A::Right, A::Left});
    t.add_row({"Dependent", "Constant (SE)", "Coefficient (SE)", "Std. coef.", "R2", "F (p)", "Flags"});
    for (const auto& row : rows) {
        const auto& f = row.fit;
        t.add_row({std::string(item_name(row.item)),
                   fixed(f.intercept, 3) + std::string(significance_stars(f.p_intercept)),
                   fixed(f.slope, 3) + std::string(significance_stars(f.p_slope)), fixed(f.standardized_slope, 2),
                   fixed(f.r_squared, 2), fmt::format("{} ({})", fixed(f.f_statistic, 2), fixed(f.p_f, 3)),
                   fit_flags(f)});
        t.add_row({"", "(" + fixed(f.se_intercept, 3) + ")", "(" + fixed(f.se_slope, 3) + ")"});
    }
    out += t.render();
    if (!rows.empty()) out += fmt::format("n = {}\n", rows.front().fit.n);
    out += kStarsNote;
    out += '\n';
    return out;
}

std::string growth_text(const Report& r) {
    std::string out = fmt::format("Arithmetic growth {}-{}\n\n", r.period.first, r.period.last);
    TextTable t({A::Left, A::Right, A::Right, A::Right, A::Right, A::Right});
    t.add_row({"Item", "P0", "Pt", "t_years", "r_per_year", "cumulative_pct"});
    for (const auto& row : r.growth_table) {
        const auto& g = row.rate;
        t.add_row({std::string(item_name(row.item)), fixed(g.p0, 2), fixed(g.pt, 2), std::to_string(g.t_years),
                   fixed(g.r_per_year, 6), fixed(100.0 * g.cumulative, 2)});
    }
    return out + t.render();
}

std::string allometric_text(const AllometricFit& a, const YearRange& period) {
    std::string out = fmt::format("Allometric model: ln {} = ln a + B ln {} ({}-{})\n\n", item_name(a.dependent),
                                  item_name(a.explanatory), period.first, period.last);
    TextTable t({A::Right, A::Right, A::Right, A::Right, A::Right, A::Right, A::Right, A::Left});
    t.add_row({"Constant ln a (SE)", "B (SE)", "Std. coef.", "R2 (SE est.)", "F (p)", "t(B=1)", "t crit",
               "Classification"});
    t.add_row({fixed(a.ln_a, 3) + std::string(significance_stars(a.p_ln_a)),
               fixed(a.b, 3) + std::string(significance_stars(a.p_b)), fixed(a.standardized_slope, 2),
               fmt::format("{} ({})", fixed(a.r_squared, 2), fixed(a.se_estimate, 3)),
               fmt::format("{} ({})", fixed(a.f_statistic, 2), fixed(a.p_f, 3)),
               a.exact_fit ? std::string("exact") : fixed(a.t_isometry, 2), fixed(a.t_critical, 2),
               std::string(allometry_name(a.classification))});
    t.add_row({"(" + fixed(a.se_ln_a, 3) + ")", "(" + fixed(a.se_b, 3) + ")"});
    out += t.render();
    out += fmt::format("n = {}, alpha = {}\n", a.n, a.test_alpha);
    out += kStarsNote;
    out += '\n';
    return out;
}

std::string metabolism_text(const Report& r) {
    std::string out = fmt::format("Metabolism index M = 100 * {} / {}\n\n", item_name(r.numerator_item),
                                  item_name(r.denominator_item));
    const bool companion = !r.metabolism_series.empty() && r.metabolism_series.front().m_other_costs_percent;
    TextTable t({A::Left, A::Right, A::Right});
    if (companion) {
        t.add_row({"Year", "M (%)", "other_costs (%)"});
    } else {
        t.add_row({"Year", "M (%)"});
    }
    for (const auto& p : r.metabolism_series) {
        std::vector<std::string> row{std::to_string(p.year), fixed(p.m_percent, 2)};
        if (p.m_other_costs_percent) row.push_back(fixed(*p.m_other_costs_percent, 2));
        t.add_row(std::move(row));
    }
    return out + t.render();
}

std::string crossings_text(const Report& r) {
    std::string out = fmt::format("Crossings of {} and {}\n\n", item_name(r.crossing_a), item_name(r.crossing_b));
    if (r.crossings.empty()) return out + "none\n";
    TextTable t({A::Left, A::Right, A::Left});
    t.add_row({"Between", "At", "Above after"});
    for (const auto& c : r.crossings) {
        const std::string above = c.sign_after > 0   ? std::string(item_name(r.crossing_a))
                                  : c.sign_after < 0 ? std::string(item_name(r.crossing_b))
                                                     : std::string("equal");
        t.add_row({fmt::format("{}-{}", c.year_from, c.year_to), fixed(c.at, 2), above});
    }
    return out + t.render();
}

std::string mean_costs_text(const Report& r) {
    std::string out = fmt::format("Mean costs {}-{}\n\n", r.period.first, r.period.last);
    TextTable t({A::Left, A::Right, A::Right, A::Right, A::Right, A::Right});
    t.add_row({"Item", "n", "Mean", "SD", "Min", "Max"});
    for (const auto& d : r.mean_costs.items) {
        t.add_row({std::string(item_name(d.item)), std::to_string(d.stats.n), fixed(d.stats.mean, 2),
                   fixed(d.stats.sd, 2), fixed(d.stats.min, 2), fixed(d.stats.max, 2)});
    }
    return out + t.render();
}

std::string validation_text(const Report& r) {
    std::string out = "Validation\n\n";
    if (r.validation_findings.empty()) return out + "no findings\n";
    TextTable t({A::Left, A::Right, A::Left});
    t.add_row({"Kind", "Year", "Message"});
    for (const auto& f : r.validation_findings) {
        t.add_row({std::string(finding_kind_name(f.kind)), std::to_string(f.year), f.message});
    }
    return out + t.render();
}

std::string cross_check_text(const Report& r, const ShareCrossCheck& c) {
    std::string out = fmt::format("Share cross-check ({} / {})\n\n", item_name(r.numerator_item),
                                  item_name(r.denominator_item));
    TextTable t({A::Left, A::Right});
    t.add_row({fmt::format("M({})", c.start_year), fixed(c.m_start, 2)});
    t.add_row({fmt::format("M({})", c.end_year), fixed(c.m_end, 2)});
    t.add_row({"observed M(end) / M(start)", fixed(c.observed_ratio, 4)});
    t.add_row({"(1 + cumulative_num) / (1 + cumulative_den)", fixed(c.predicted_ratio, 4)});
    t.add_row({fmt::format("reference rates {:.2f}% / {:.2f}% imply", 100.0 * kReferenceCumulativeNumerator,
                           100.0 * kReferenceCumulativeDenominator),
               fixed(c.reference_ratio, 4)});
    t.add_row({fmt::format("reference start share {:.0f}% implies end share", kReferenceStartShare),
               fixed(c.reference_implied_end_share, 2)});
    return out + t.render();
}

// JSON ---------------------------------------------------------------------

Json to_json(const RegressionFit& f) {
    return Json{{"n", f.n},
                {"intercept", f.intercept},
                {"slope", f.slope},
                {"se_intercept", f.se_intercept},
                {"se_slope", f.se_slope},
                {"standardized_slope", f.standardized_slope},
                {"r_squared", f.r_squared},
                {"f_statistic", f.f_statistic},
                {"p_slope", f.p_slope},
                {"p_intercept", f.p_intercept},
                {"p_f", f.p_f},
                {"se_estimate", f.se_estimate},
                {"residuals", f.residuals},
                {"degenerate_response", f.degenerate_response},
                {"exact_fit", f.exact_fit}};
}

Json to_json(const GrowthRate& g) {
    return Json{{"start_year", g.start_year}, {"end_year", g.end_year},       {"p0", g.p0},
                {"pt", g.pt},                 {"t_years", g.t_years},         {"r_per_year", g.r_per_year},
                {"cumulative", g.cumulative}};
}

Json to_json(const AllometricFit& a) {
    return Json{{"dependent", item_name(a.dependent)},
                {"explanatory", item_name(a.explanatory)},
                {"ln_a", a.ln_a},
                {"se_ln_a", a.se_ln_a},
                {"b", a.b},
                {"se_b", a.se_b},
                {"standardized_slope", a.standardized_slope},
                {"r_squared", a.r_squared},
                {"f_statistic", a.f_statistic},
                {"p_b", a.p_b},
                {"p_ln_a", a.p_ln_a},
                {"p_f", a.p_f},
                {"se_estimate", a.se_estimate},
                {"n", a.n},
                {"t_isometry", a.t_isometry},
                {"t_critical", a.t_critical},
                {"exact_fit", a.exact_fit},
                {"classification", allometry_name(a.classification)},
                {"test_alpha", a.test_alpha}};
}

Json to_json(const ShareCrossCheck& c) {
    return Json{{"start_year", c.start_year},
                {"end_year", c.end_year},
                {"m_start", c.m_start},
                {"m_end", c.m_end},
                {"observed_ratio", c.observed_ratio},
                {"cumulative_numerator", c.cumulative_numerator},
                {"cumulative_denominator", c.cumulative_denominator},
                {"predicted_ratio", c.predicted_ratio},
                {"reference_ratio", c.reference_ratio},
                {"reference_implied_end_share", c.reference_implied_end_share}};
}

Json section_json(const Report& r, Section s) {
    switch (s) {
        case Section::Trend: {
            Json arr = Json::array();
            for (const auto& row : r.trend_table) {
                Json j{{"item", item_name(row.item)}};
                j.update(to_json(row.fit));
                arr.push_back(std::move(j));
            }
            return arr;
        }
        case Section::Growth: {
            Json arr = Json::array();
            for (const auto& row : r.growth_table) {
                Json j{{"item", item_name(row.item)}};
                j.update(to_json(row.rate));
                arr.push_back(std::move(j));
            }
            return arr;
        }
        case Section::Allometric:
            return r.allometric_table ? to_json(*r.allometric_table) : Json(nullptr);
        case Section::Metabolism: {
            Json arr = Json::array();
            for (const auto& p : r.metabolism_series) {
                Json j{{"year", p.year}, {"m_percent", p.m_percent}};
                j["m_other_costs_percent"] = p.m_other_costs_percent ? Json(*p.m_other_costs_percent) : Json(nullptr);
                arr.push_back(std::move(j));
            }
            return arr;
        }
        case Section::Crossings: {
            Json arr = Json::array();
            for (const auto& c : r.crossings) {
                arr.push_back(Json{{"year_from", c.year_from},
                                   {"year_to", c.year_to},
                                   {"at", c.at},
                                   {"sign_after", c.sign_after}});
            }
            return arr;
        }
        case Section::MeanCosts: {
            Json items = Json::array();
            for (const auto& d : r.mean_costs.items) {
                items.push_back(Json{{"item", item_name(d.item)},
                                     {"n", d.stats.n},
                                     {"mean", d.stats.mean},
                                     {"sd", d.stats.sd},
                                     {"min", d.stats.min},
                                     {"max", d.stats.max}});
            }
            Json omitted = Json::array();
            for (Item i : r.mean_costs.omitted) omitted.push_back(item_name(i));
            return Json{{"items", std::move(items)}, {"omitted", std::move(omitted)}};
        }
        case Section::Validation: {
            Json arr = Json::array();
            for (const auto& f : r.validation_findings) {
                arr.push_back(Json{{"kind", finding_kind_name(f.kind)},
                                   {"year", f.year},
                                   {"item", f.item ? Json(item_name(*f.item)) : Json(nullptr)},
                                   {"message", f.message}});
            }
            return arr;
        }
        case Section::CrossCheck:
            return r.cross_check ? to_json(*r.cross_check) : Json(nullptr);
    }
    return Json(nullptr);
}

std::string report_json(const Report& r) {
    Json root;
    root["organization"] = r.organization;
    root["period"] = Json{{"first", r.period.first}, {"last", r.period.last}};
    root["config"] = Json{{"numerator", item_name(r.numerator_item)},
                          {"denominator", item_name(r.denominator_item)},
                          {"alpha", r.alpha},
                          {"crossing_a", item_name(r.crossing_a)},
                          {"crossing_b", item_name(r.crossing_b)}};
    for (Section s : r.sections) root[std::string(section_key(s))] = section_json(r, s);
    root["notes"] = r.notes;
    return root.dump(2) + "\n";
}

// CSV (long form: section,key,field,value) ---------------------------------

void csv_row(std::string& out, std::string_view section, std::string_view key, std::string_view field,
             const std::string& value) {
    out += fmt::format("{},{},{},{}\n", section, csv_cell(key), field, csv_cell(value));
}

void csv_fit(std::string& out, std::string_view section, std::string_view key, const RegressionFit& f,
             const std::vector<int>& years) {
    csv_row(out, section, key, "n", std::to_string(f.n));
    csv_row(out, section, key, "intercept", full(f.intercept));
    csv_row(out, section, key, "slope", full(f.slope));
    csv_row(out, section, key, "se_intercept", full(f.se_intercept));
    csv_row(out, section, key, "se_slope", full(f.se_slope));
    csv_row(out, section, key, "standardized_slope", full(f.standardized_slope));
    csv_row(out, section, key, "r_squared", full(f.r_squared));
    csv_row(out, section, key, "f_statistic", full(f.f_statistic));
    csv_row(out, section, key, "p_slope", full(f.p_slope));
    csv_row(out, section, key, "p_intercept", full(f.p_intercept));
    csv_row(out, section, key, "p_f", full(f.p_f));
    csv_row(out, section, key, "se_estimate", full(f.se_estimate));
    csv_row(out, section, key, "degenerate_response", f.degenerate_response ? "true" : "false");
    csv_row(out, section, key, "exact_fit", f.exact_fit ? "true" : "false");
    for (std::size_t i = 0; i < f.residuals.size() && i < years.size(); ++i) {
        csv_row(out, section, key, fmt::format("residual_{}", years[i]), full(f.residuals[i]));
    }
}

std::string report_csv(const Report& r) {
    std::string out = "section,key,field,value\n";
    std::vector<int> years;
    for (const auto& rec : r.ledger.records()) years.push_back(rec.year);
    for (Section s : r.sections) {
        const auto sec = section_key(s);
        switch (s) {
            case Section::Trend:
                for (const auto& row : r.trend_table) csv_fit(out, sec, item_name(row.item), row.fit, years);
                break;
            case Section::Growth:
                for (const auto& row : r.growth_table) {
                    const auto key = item_name(row.item);
                    const auto& g = row.rate;
                    csv_row(out, sec, key, "start_year", std::to_string(g.start_year));
                    csv_row(out, sec, key, "end_year", std::to_string(g.end_year));
                    csv_row(out, sec, key, "p0", full(g.p0));
                    csv_row(out, sec, key, "pt", full(g.pt));
                    csv_row(out, sec, key, "t_years", std::to_string(g.t_years));
                    csv_row(out, sec, key, "r_per_year", full(g.r_per_year));
                    csv_row(out, sec, key, "cumulative", full(g.cumulative));
                }
                break;
            case Section::Allometric:
                if (r.allometric_table) {
                    const auto& a = *r.allometric_table;
                    const std::string key =
                        fmt::format("{}~{}", item_name(a.dependent), item_name(a.explanatory));
                    csv_row(out, sec, key, "ln_a", full(a.ln_a));
                    csv_row(out, sec, key, "se_ln_a", full(a.se_ln_a));
                    csv_row(out, sec, key, "b", full(a.b));
                    csv_row(out, sec, key, "se_b", full(a.se_b));
                    csv_row(out, sec, key, "standardized_slope", full(a.standardized_slope));
                    csv_row(out, sec, key, "r_squared", full(a.r_squared));
                    csv_row(out, sec, key, "f_statistic", full(a.f_statistic));
                    csv_row(out, sec, key, "p_b", full(a.p_b));
                    csv_row(out, sec, key, "p_ln_a", full(a.p_ln_a));
                    csv_row(out, sec, key, "p_f", full(a.p_f));
                    csv_row(out, sec, key, "se_estimate", full(a.se_estimate));
                    csv_row(out, sec, key, "n", std::to_string(a.n));
                    csv_row(out, sec, key, "t_isometry", full(a.t_isometry));
                    csv_row(out, sec, key, "t_critical", full(a.t_critical));
                    csv_row(out, sec, key, "exact_fit", a.exact_fit ? "true" : "false");
                    csv_row(out, sec, key, "classification", std::string(allometry_name(a.classification)));
                    csv_row(out, sec, key, "test_alpha", full(a.test_alpha));
                }
                break;
            case Section::Metabolism:
                for (const auto& p : r.metabolism_series) {
                    const auto key = std::to_string(p.year);
                    csv_row(out, sec, key, "m_percent", full(p.m_percent));
                    if (p.m_other_costs_percent) {
                        csv_row(out, sec, key, "m_other_costs_percent", full(*p.m_other_costs_percent));
                    }
                }
                break;
            case Section::Crossings:
                for (const auto& c : r.crossings) {
                    const auto key = fmt::format("{}-{}", c.year_from, c.year_to);
                    csv_row(out, sec, key, "at", full(c.at));
                    csv_row(out, sec, key, "sign_after", std::to_string(c.sign_after));
                }
                break;
            case Section::MeanCosts:
                for (const auto& d : r.mean_costs.items) {
                    const auto key = item_name(d.item);
                    csv_row(out, sec, key, "n", std::to_string(d.stats.n));
                    csv_row(out, sec, key, "mean", full(d.stats.mean));
                    csv_row(out, sec, key, "sd", full(d.stats.sd));
                    csv_row(out, sec, key, "min", full(d.stats.min));
                    csv_row(out, sec, key, "max", full(d.stats.max));
                }
                break;
            case Section::Validation:
                for (const auto& f : r.validation_findings) {
                    csv_row(out, sec, std::to_string(f.year), finding_kind_name(f.kind), f.message);
                }
                break;
            case Section::CrossCheck:
                if (r.cross_check) {
                    const Json fields = to_json(*r.cross_check);
                    for (const auto& [field, value] : fields.items()) {
                        csv_row(out, sec, "share", field,
                                value.is_number_integer() ? std::to_string(value.get<long long>())
                                                          : full(value.get<double>()));
                    }
                }
                break;
        }
    }
    return out;
}

std::string report_text(const Report& r) {
    std::string out = fmt::format("Economic metabolism report: {} ({}-{})\n", r.organization.empty() ? "-" : r.organization,
                                  r.period.first, r.period.last);
    for (Section s : r.sections) {
        out += '\n';
        switch (s) {
            case Section::Trend: out += trend_text(r.trend_table); break;
            case Section::Growth: out += growth_text(r); break;
            case Section::Allometric:
                if (r.allometric_table) out += allometric_text(*r.allometric_table, r.period);
                break;
            case Section::Metabolism: out += metabolism_text(r); break;
            case Section::Crossings: out += crossings_text(r); break;
            case Section::MeanCosts: out += mean_costs_text(r); break;
            case Section::Validation: out += validation_text(r); break;
            case Section::CrossCheck:
                if (r.cross_check) out += cross_check_text(r, *r.cross_check);
                break;
        }
    }
    if (!r.notes.empty()) {
        out += "\nNotes\n";
        for (const auto& n : r.notes) out += "- " + n + "\n";
    }
    return out;
}

}  // namespace

std::string render_trend_table(std::span<const TrendRow> rows, OutputFormat format) {
    switch (format) {
        case OutputFormat::Text: return trend_text(rows);
        case OutputFormat::Json: {
            Json arr = Json::array();
            for (const auto& row : rows) {
                Json j{{"item", item_name(row.item)}};
                j.update(to_json(row.fit));
                arr.push_back(std::move(j));
            }
            return arr.dump(2) + "\n";
        }
        case OutputFormat::Csv: {
            std::string out = "section,key,field,value\n";
            for (const auto& row : rows) csv_fit(out, "trend", item_name(row.item), row.fit, {});
            return out;
        }
    }
    return {};
}

std::string render_report(const Report& report, OutputFormat format) {
    switch (format) {
        case OutputFormat::Text: return report_text(report);
        case OutputFormat::Json: return report_json(report);
        case OutputFormat::Csv: return report_csv(report);
    }
    return {};
}

}  // namespace ecometab
