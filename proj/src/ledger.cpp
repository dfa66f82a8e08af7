#include "ecometab/ledger.hpp"

#include "ecometab/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

namespace ecometab {

namespace {

constexpr std::string_view kYearColumn = "year";
constexpr std::string_view kCurrencyColumn = "currency";

std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

// Splits one line on the delimiter; double-quoted fields may contain the
// delimiter and use "" for a literal quote.
std::vector<std::string> split_fields(std::string_view line, char delimiter, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == delimiter) {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (quoted) throw ParseError(line_no, "", "unterminated quoted field");
    fields.push_back(std::move(current));
    return fields;
}

std::optional<double> parse_money(std::string_view cell, std::size_t line, std::string_view column) {
    cell = trim(cell);
    if (cell.empty()) return std::nullopt;
    double v = 0.0;
    const auto* end = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(cell.data(), end, v, std::chars_format::general);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
        throw ParseError(line, std::string(column), fmt::format("malformed number '{}'", cell));
    }
    return v;
}

int parse_year(std::string_view cell, std::size_t line) {
    cell = trim(cell);
    if (cell.empty()) throw ParseError(line, std::string(kYearColumn), "missing required value");
    int year = 0;
    const auto* end = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(cell.data(), end, year);
    if (ec != std::errc{} || ptr != end) {
        throw ParseError(line, std::string(kYearColumn), fmt::format("malformed year '{}'", cell));
    }
    return year;
}

struct ColumnMap {
    std::optional<std::size_t> year;
    std::optional<std::size_t> currency;
    std::array<std::optional<std::size_t>, kAllItems.size()> items{};
    std::size_t width = 0;
};

ColumnMap read_header(const std::vector<std::string>& header, std::size_t line) {
    ColumnMap map;
    map.width = header.size();
    std::map<std::string, std::size_t, std::less<>> seen;
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string name(trim(header[i]));
        if (!seen.emplace(name, i).second) throw ParseError(line, name, "duplicate column");
        if (name == kYearColumn) {
            map.year = i;
        } else if (name == kCurrencyColumn) {
            map.currency = i;
        } else if (auto item = parse_item(name)) {
            map.items[static_cast<std::size_t>(*item)] = i;
        } else {
            throw ParseError(line, name, "unknown column");
        }
    }
    if (!map.year) throw ParseError(line, std::string(kYearColumn), "missing required column");
    if (!map.currency) throw ParseError(line, std::string(kCurrencyColumn), "missing required column");
    for (Item item : kAllItems) {
        if (is_required(item) && !map.items[static_cast<std::size_t>(item)]) {
            throw ParseError(line, std::string(item_name(item)), "missing required column");
        }
    }
    return map;
}

}  // namespace

std::string_view currency_code(Currency c) {
    return c == Currency::EUR ? "EUR" : "ITL";
}

std::optional<Currency> parse_currency(std::string_view code) {
    if (code == "EUR") return Currency::EUR;
    if (code == "ITL") return Currency::ITL;
    return std::nullopt;
}

std::string_view item_name(Item item) {
    switch (item) {
        case Item::TotalRevenue: return "total_revenue";
        case Item::CostOfPersonnel: return "cost_of_personnel";
        case Item::Salary: return "salary";
        case Item::SocialSecurityTaxes: return "social_security_taxes";
        case Item::SeverancePay: return "severance_pay";
        case Item::PersonnelOtherCosts: return "personnel_other_costs";
        case Item::MaterialsAndProducts: return "materials_and_products";
        case Item::Services: return "services";
        case Item::LeasedAssetsThirdParties: return "leased_assets_third_parties";
        case Item::OtherCosts: return "other_costs";
        case Item::TotalCost: return "total_cost";
        case Item::SurplusOrLoss: return "surplus_or_loss";
    }
    return "unknown";
}

std::optional<Item> parse_item(std::string_view name) {
    for (Item item : kAllItems) {
        if (item_name(item) == name) return item;
    }
    return std::nullopt;
}

Item item_from_name(std::string_view name) {
    if (auto item = parse_item(name)) return *item;
    throw DomainError(fmt::format("unknown item '{}'", name));
}

bool is_required(Item item) {
    return item == Item::TotalRevenue || item == Item::CostOfPersonnel || item == Item::TotalCost;
}

std::optional<double> FiscalRecord::value(Item item) const {
    switch (item) {
        case Item::TotalRevenue: return total_revenue;
        case Item::CostOfPersonnel: return cost_of_personnel;
        case Item::Salary: return salary;
        case Item::SocialSecurityTaxes: return social_security_taxes;
        case Item::SeverancePay: return severance_pay;
        case Item::PersonnelOtherCosts: return personnel_other_costs;
        case Item::MaterialsAndProducts: return materials_and_products;
        case Item::Services: return services;
        case Item::LeasedAssetsThirdParties: return leased_assets_third_parties;
        case Item::OtherCosts: return other_costs;
        case Item::TotalCost: return total_cost;
        case Item::SurplusOrLoss: return surplus_or_loss;
    }
    return std::nullopt;
}

void FiscalRecord::set(Item item, std::optional<double> v) {
    auto required = [&](double& field) {
        if (!v) throw DomainError(fmt::format("item '{}' is required", item_name(item)));
        field = *v;
    };
    switch (item) {
        case Item::TotalRevenue: required(total_revenue); break;
        case Item::CostOfPersonnel: required(cost_of_personnel); break;
        case Item::Salary: salary = v; break;
        case Item::SocialSecurityTaxes: social_security_taxes = v; break;
        case Item::SeverancePay: severance_pay = v; break;
        case Item::PersonnelOtherCosts: personnel_other_costs = v; break;
        case Item::MaterialsAndProducts: materials_and_products = v; break;
        case Item::Services: services = v; break;
        case Item::LeasedAssetsThirdParties: leased_assets_third_parties = v; break;
        case Item::OtherCosts: other_costs = v; break;
        case Item::TotalCost: required(total_cost); break;
        case Item::SurplusOrLoss: surplus_or_loss = v; break;
    }
}

FiscalRecord normalize_currency(const FiscalRecord& record) {
    if (record.currency == Currency::EUR) return record;
    FiscalRecord out = record;
    for (Item item : kAllItems) {
        if (auto v = record.value(item)) out.set(item, *v / kLirePerEuro);
    }
    out.currency = Currency::EUR;
    return out;
}

LedgerSeries::LedgerSeries(std::string organization, std::vector<FiscalRecord> records)
    : organization_(std::move(organization)), records_(std::move(records)) {
    std::stable_sort(records_.begin(), records_.end(),
                     [](const FiscalRecord& a, const FiscalRecord& b) { return a.year < b.year; });
    for (std::size_t i = 1; i < records_.size(); ++i) {
        if (records_[i].year == records_[i - 1].year) {
            throw RangeError(fmt::format("duplicate year {}", records_[i].year));
        }
        if (records_[i].currency != records_[0].currency) {
            throw DomainError(fmt::format("mixed currencies: {} is {} but {} is {}", records_[0].year,
                                          currency_code(records_[0].currency), records_[i].year,
                                          currency_code(records_[i].currency)));
        }
    }
}

Currency LedgerSeries::currency() const noexcept {
    return records_.empty() ? Currency::EUR : records_.front().currency;
}

const FiscalRecord* LedgerSeries::find(int year) const {
    auto it = std::lower_bound(records_.begin(), records_.end(), year,
                               [](const FiscalRecord& r, int y) { return r.year < y; });
    return it != records_.end() && it->year == year ? &*it : nullptr;
}

LedgerSeries LedgerSeries::restricted(const YearRange& period) const {
    std::vector<FiscalRecord> kept;
    std::copy_if(records_.begin(), records_.end(), std::back_inserter(kept),
                 [&](const FiscalRecord& r) { return period.contains(r.year); });
    return LedgerSeries(organization_, std::move(kept));
}

LedgerSeries normalize_currency(const LedgerSeries& ledger) {
    std::vector<FiscalRecord> out;
    out.reserve(ledger.size());
    for (const auto& r : ledger.records()) out.push_back(normalize_currency(r));
    return LedgerSeries(ledger.organization(), std::move(out));
}

Series::Series(std::vector<SeriesPoint> points) : points_(std::move(points)) {
    for (std::size_t i = 1; i < points_.size(); ++i) {
        if (points_[i].year <= points_[i - 1].year) {
            throw RangeError(fmt::format("series years must be strictly increasing ({} after {})",
                                         points_[i].year, points_[i - 1].year));
        }
    }
}

Series::Series(std::span<const int> years, std::span<const double> values)
    : Series([&] {
          if (years.size() != values.size()) {
              throw AlignmentError(fmt::format("{} years but {} values", years.size(), values.size()));
          }
          std::vector<SeriesPoint> pts;
          pts.reserve(years.size());
          for (std::size_t i = 0; i < years.size(); ++i) pts.push_back({years[i], values[i]});
          return pts;
      }()) {}

std::vector<int> Series::years() const {
    std::vector<int> out;
    out.reserve(points_.size());
    for (const auto& p : points_) out.push_back(p.year);
    return out;
}

std::vector<double> Series::values() const {
    std::vector<double> out;
    out.reserve(points_.size());
    for (const auto& p : points_) out.push_back(p.value);
    return out;
}

std::optional<double> Series::at(int year) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), year,
                               [](const SeriesPoint& p, int y) { return p.year < y; });
    if (it != points_.end() && it->year == year) return it->value;
    return std::nullopt;
}

Series Series::scaled(double factor) const {
    std::vector<SeriesPoint> out = points_;
    for (auto& p : out) p.value *= factor;
    return Series(std::move(out));
}

Series Series::time_regressor() const {
    std::vector<SeriesPoint> out = points_;
    for (auto& p : out) p.value = static_cast<double>(p.year);
    return Series(std::move(out));
}

Series extract_series(const LedgerSeries& ledger, Item item, const std::optional<YearRange>& period) {
    std::vector<SeriesPoint> points;
    std::vector<int> missing;
    for (const auto& r : ledger.records()) {
        if (period && !period->contains(r.year)) continue;
        if (auto v = r.value(item)) {
            points.push_back({r.year, *v});
        } else {
            missing.push_back(r.year);
        }
    }
    if (points.empty() && missing.empty()) {
        if (period) {
            throw EmptyRangeError(fmt::format("no records in {}-{}", period->first, period->last));
        }
        throw EmptyRangeError("ledger has no records");
    }
    if (!missing.empty()) {
        auto what = fmt::format("item '{}' missing in years {}", item_name(item), fmt::join(missing, ", "));
        throw MissingDataError(what, std::move(missing));
    }
    return Series(std::move(points));
}

LedgerSeries parse_ledger(std::istream& in, const ParseOptions& options) {
    std::string line;
    std::size_t line_no = 0;
    std::optional<ColumnMap> columns;
    std::vector<FiscalRecord> records;
    std::map<int, std::size_t> year_lines;

    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
        if (trim(line).empty()) continue;
        auto fields = split_fields(line, options.delimiter, line_no);
        if (!columns) {
            columns = read_header(fields, line_no);
            continue;
        }
        if (fields.size() != columns->width) {
            throw ParseError(line_no, "",
                             fmt::format("expected {} fields, found {}", columns->width, fields.size()));
        }

        FiscalRecord rec;
        rec.year = parse_year(fields[*columns->year], line_no);
        const auto code = trim(fields[*columns->currency]);
        const auto currency = parse_currency(code);
        if (!currency) {
            throw ParseError(line_no, std::string(kCurrencyColumn),
                             fmt::format("unknown currency code '{}'", code));
        }
        rec.currency = *currency;
        for (Item item : kAllItems) {
            const auto idx = columns->items[static_cast<std::size_t>(item)];
            if (!idx) continue;
            auto v = parse_money(fields[*idx], line_no, item_name(item));
            if (!v && is_required(item)) {
                throw ParseError(line_no, std::string(item_name(item)), "missing required value");
            }
            rec.set(item, v);
        }
        if (auto [it, inserted] = year_lines.emplace(rec.year, line_no); !inserted) {
            throw ParseError(line_no, std::string(kYearColumn),
                             fmt::format("duplicate year {} (first on row {})", rec.year, it->second));
        }
        records.push_back(normalize_currency(rec));
    }
    if (!columns) throw ParseError(line_no == 0 ? 1 : line_no, "", "missing header row");
    if (records.empty()) throw ParseError(line_no, "", "no data rows");
    return LedgerSeries(options.organization, std::move(records));
}

LedgerSeries parse_ledger(std::string_view text, const ParseOptions& options) {
    std::istringstream in{std::string(text)};
    return parse_ledger(in, options);
}

LedgerSeries parse_ledger_file(const std::filesystem::path& path, const ParseOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
    ParseOptions opts = options;
    if (opts.organization.empty()) opts.organization = path.stem().string();
    return parse_ledger(in, opts);
}

void serialize_ledger(const LedgerSeries& ledger, std::ostream& out, char delimiter) {
    out << kYearColumn << delimiter << kCurrencyColumn;
    for (Item item : kAllItems) out << delimiter << item_name(item);
    out << '\n';
    for (const auto& r : ledger.records()) {
        out << r.year << delimiter << currency_code(r.currency);
        for (Item item : kAllItems) {
            out << delimiter;
            if (auto v = r.value(item)) out << fmt::format("{}", *v);
        }
        out << '\n';
    }
}

std::string serialize_ledger(const LedgerSeries& ledger, char delimiter) {
    std::ostringstream out;
    serialize_ledger(ledger, out, delimiter);
    return out.str();
}

std::string_view finding_kind_name(FindingKind kind) {
    switch (kind) {
        case FindingKind::DecompositionMismatch: return "decomposition_mismatch";
        case FindingKind::NegativeValue: return "negative_value";
        case FindingKind::YearGap: return "year_gap";
    }
    return "unknown";
}

std::vector<ValidationFinding> validate_ledger(const LedgerSeries& ledger) {
    std::vector<ValidationFinding> findings;
    const auto records = ledger.records();
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (i > 0 && r.year - records[i - 1].year > 1) {
            const int from = records[i - 1].year + 1;
            const int to = r.year - 1;
            findings.push_back({FindingKind::YearGap, from, std::nullopt,
                                from == to ? fmt::format("no record for {}", from)
                                           : fmt::format("no records for {}-{}", from, to)});
        }
        for (Item item : kAllItems) {
            if (item == Item::SurplusOrLoss) continue;
            if (auto v = r.value(item); v && *v < 0.0) {
                findings.push_back({FindingKind::NegativeValue, r.year, item,
                                    fmt::format("{} is negative ({})", item_name(item), *v)});
            }
        }
        double sum = 0.0;
        bool complete = true;
        for (Item item : kPersonnelComponents) {
            auto v = r.value(item);
            if (!v) {
                complete = false;
                break;
            }
            sum += *v;
        }
        if (complete) {
            const double scale = std::abs(r.cost_of_personnel);
            const double diff = std::abs(sum - r.cost_of_personnel);
            if (diff > kDecompositionTolerance * scale || (scale == 0.0 && diff > 0.0)) {
                findings.push_back(
                    {FindingKind::DecompositionMismatch, r.year, Item::CostOfPersonnel,
                     fmt::format("personnel components sum to {} but cost_of_personnel is {}", sum,
                                 r.cost_of_personnel)});
            }
        }
    }
    return findings;
}

}  // namespace ecometab
