#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ecometab {

/// Lire per euro, the irrevocable conversion rate fixed at monetary union.
inline constexpr double kLirePerEuro = 1936.27;

enum class Currency { EUR, ITL };

std::string_view currency_code(Currency c);
std::optional<Currency> parse_currency(std::string_view code);

/// Income-statement items. Enumerator order is the canonical column order.
enum class Item {
    TotalRevenue,
    CostOfPersonnel,
    Salary,
    SocialSecurityTaxes,
    SeverancePay,
    PersonnelOtherCosts,
    MaterialsAndProducts,
    Services,
    LeasedAssetsThirdParties,
    OtherCosts,
    TotalCost,
    SurplusOrLoss,
};

inline constexpr std::array<Item, 12> kAllItems = {
    Item::TotalRevenue,         Item::CostOfPersonnel,      Item::Salary,
    Item::SocialSecurityTaxes,  Item::SeverancePay,         Item::PersonnelOtherCosts,
    Item::MaterialsAndProducts, Item::Services,             Item::LeasedAssetsThirdParties,
    Item::OtherCosts,           Item::TotalCost,            Item::SurplusOrLoss,
};

/// Items that are costs; the ones averaged for the mean-cost profile.
inline constexpr std::array<Item, 10> kCostItems = {
    Item::CostOfPersonnel,      Item::Salary,   Item::SocialSecurityTaxes,
    Item::SeverancePay,         Item::PersonnelOtherCosts,
    Item::MaterialsAndProducts, Item::Services, Item::LeasedAssetsThirdParties,
    Item::OtherCosts,           Item::TotalCost,
};

/// Components whose sum should reproduce cost_of_personnel.
inline constexpr std::array<Item, 4> kPersonnelComponents = {
    Item::Salary, Item::SocialSecurityTaxes, Item::SeverancePay, Item::PersonnelOtherCosts};

std::string_view item_name(Item item);
std::optional<Item> parse_item(std::string_view name);
/// Like parse_item but throws DomainError naming the unknown item.
Item item_from_name(std::string_view name);
bool is_required(Item item);

/// One fiscal year of the income statement. Optional items are absent when
/// not reported; absence is never encoded as zero.
struct FiscalRecord {
    int year = 0;
    Currency currency = Currency::EUR;
    double total_revenue = 0.0;
    double cost_of_personnel = 0.0;
    std::optional<double> salary;
    std::optional<double> social_security_taxes;
    std::optional<double> severance_pay;
    std::optional<double> personnel_other_costs;
    std::optional<double> materials_and_products;
    std::optional<double> services;
    std::optional<double> leased_assets_third_parties;
    std::optional<double> other_costs;
    double total_cost = 0.0;
    std::optional<double> surplus_or_loss;

    std::optional<double> value(Item item) const;
    void set(Item item, std::optional<double> v);

    bool operator==(const FiscalRecord&) const = default;
};

/// ITL records have every money field divided by kLirePerEuro; EUR records
/// pass through unchanged.
FiscalRecord normalize_currency(const FiscalRecord& record);

/// Inclusive range of calendar years.
struct YearRange {
    int first = 1997;
    int last = 2015;

    bool contains(int year) const { return year >= first && year <= last; }
    bool operator==(const YearRange&) const = default;
};

inline constexpr YearRange kDefaultPeriod{1997, 2015};

/// Year-ordered records of one organization. Years are unique and the
/// currency is homogeneous across records.
class LedgerSeries {
public:
    LedgerSeries() = default;
    /// Sorts by year; throws RangeError on a duplicate year and DomainError on
    /// mixed currencies.
    LedgerSeries(std::string organization, std::vector<FiscalRecord> records);

    const std::string& organization() const noexcept { return organization_; }
    std::span<const FiscalRecord> records() const noexcept { return records_; }
    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }
    /// Currency of the records; EUR for an empty ledger.
    Currency currency() const noexcept;

    const FiscalRecord* find(int year) const;
    /// Records whose year falls in the range, as a new ledger.
    LedgerSeries restricted(const YearRange& period) const;

    bool operator==(const LedgerSeries&) const = default;

private:
    std::string organization_;
    std::vector<FiscalRecord> records_;
};

/// Applies normalize_currency to every record.
LedgerSeries normalize_currency(const LedgerSeries& ledger);

struct SeriesPoint {
    int year;
    double value;
    bool operator==(const SeriesPoint&) const = default;
};

/// (year, value) pairs with strictly increasing years.
class Series {
public:
    Series() = default;
    /// Throws RangeError unless years are strictly increasing.
    explicit Series(std::vector<SeriesPoint> points);
    Series(std::span<const int> years, std::span<const double> values);

    std::span<const SeriesPoint> points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }
    const SeriesPoint& operator[](std::size_t i) const { return points_[i]; }

    std::vector<int> years() const;
    std::vector<double> values() const;
    std::optional<double> at(int year) const;

    /// New series with every value multiplied by factor.
    Series scaled(double factor) const;
    /// Years of the series as values (the time regressor).
    Series time_regressor() const;

    bool operator==(const Series&) const = default;

private:
    std::vector<SeriesPoint> points_;
};

/// Values of one item over the period (whole ledger when period is empty).
/// Throws EmptyRangeError when no record falls in the period, and
/// MissingDataError listing the years where the item is absent.
Series extract_series(const LedgerSeries& ledger, Item item,
                      const std::optional<YearRange>& period = std::nullopt);

struct ParseOptions {
    char delimiter = ',';
    std::string organization;
};

/// Reads the canonical delimited table and returns a ledger normalized to EUR.
/// Throws ParseError naming the offending row and column.
LedgerSeries parse_ledger(std::istream& in, const ParseOptions& options = {});
LedgerSeries parse_ledger(std::string_view text, const ParseOptions& options = {});
LedgerSeries parse_ledger_file(const std::filesystem::path& path, const ParseOptions& options = {});

/// Writes the ledger in the canonical column layout. Values use the shortest
/// decimal form that reads back to the same double.
void serialize_ledger(const LedgerSeries& ledger, std::ostream& out, char delimiter = ',');
std::string serialize_ledger(const LedgerSeries& ledger, char delimiter = ',');

enum class FindingKind { DecompositionMismatch, NegativeValue, YearGap };

std::string_view finding_kind_name(FindingKind kind);

struct ValidationFinding {
    FindingKind kind;
    int year;
    std::optional<Item> item;
    std::string message;
};

/// Relative tolerance for salary + taxes + severance + other vs cost_of_personnel.
inline constexpr double kDecompositionTolerance = 1e-6;

std::vector<ValidationFinding> validate_ledger(const LedgerSeries& ledger);

}  // namespace ecometab
