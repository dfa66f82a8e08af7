#include "ecometab/error.hpp"
#include "ecometab/ledger.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace ecometab;

namespace {

std::string table(std::initializer_list<std::string> rows) {
    std::string out = fixtures::canonical_header() + "\n";
    for (const auto& r : rows) out += r + "\n";
    return out;
}

template <typename F>
ParseError expect_parse_error(F&& f) {
    try {
        f();
    } catch (const ParseError& e) {
        return e;
    }
    FAIL("expected ParseError");
    return ParseError(0, "", "");
}

}  // namespace

TEST_CASE("parse_ledger converts lire rows to euro") {
    const auto ledger = parse_ledger(table({
        "1997,ITL,1936.27,968.135,,,,,,,,,1936.27,0",
        "1998,EUR,1.0,0.5,,,,,,,,,1.0,0",
    }));
    REQUIRE(ledger.size() == 2);
    const auto& r97 = ledger.records()[0];
    CHECK(r97.year == 1997);
    CHECK(r97.currency == Currency::EUR);
    CHECK(r97.total_revenue == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r97.cost_of_personnel == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(*r97.surplus_or_loss == 0.0);
    CHECK(ledger.records()[1].total_revenue == 1.0);
    CHECK(ledger.currency() == Currency::EUR);
}

TEST_CASE("blank optional cells stay absent") {
    const auto ledger = parse_ledger(table({"2005,EUR,100,40,,,,,,,,,90,"}));
    REQUIRE(ledger.size() == 1);
    const auto& r = ledger.records()[0];
    for (Item item : kAllItems) {
        if (is_required(item)) {
            CHECK(r.value(item).has_value());
        } else {
            CHECK_FALSE(r.value(item).has_value());
        }
    }
}

TEST_CASE("zero is a value, not an absence") {
    const auto ledger = parse_ledger(table({"2005,EUR,100,40,0,,,,,,,,90,"}));
    REQUIRE(ledger.records()[0].salary.has_value());
    CHECK(*ledger.records()[0].salary == 0.0);
}

TEST_CASE("parse errors name row and column") {
    SUBCASE("duplicate year") {
        auto e = expect_parse_error([] {
            parse_ledger(table({"1997,EUR,1,1,,,,,,,,,1,0", "1997,EUR,2,2,,,,,,,,,2,0"}));
        });
        CHECK(e.line() == 3);
        CHECK(e.column() == "year");
        CHECK(std::string(e.what()).find("duplicate year 1997") != std::string::npos);
    }
    SUBCASE("malformed number") {
        auto e = expect_parse_error([] { parse_ledger(table({"1997,EUR,1,1,,,,,,,,,1,0", "1998,EUR,1x,1,,,,,,,,,1,0"})); });
        CHECK(e.line() == 3);
        CHECK(e.column() == "total_revenue");
        CHECK(std::string(e.what()) == "row 3, column 'total_revenue': malformed number '1x'");
    }
    SUBCASE("thousands separators are rejected") {
        auto e = expect_parse_error([] { parse_ledger(table({"1997,EUR,\"1,000\",1,,,,,,,,,1,0"})); });
        CHECK(e.column() == "total_revenue");
    }
    SUBCASE("unknown currency") {
        auto e = expect_parse_error([] { parse_ledger(table({"1997,USD,1,1,,,,,,,,,1,0"})); });
        CHECK(e.column() == "currency");
    }
    SUBCASE("missing required column") {
        auto e = expect_parse_error([] { parse_ledger("year,currency,total_revenue,total_cost\n1997,EUR,1,1\n"); });
        CHECK(e.line() == 1);
        CHECK(e.column() == "cost_of_personnel");
    }
    SUBCASE("missing required value") {
        auto e = expect_parse_error([] { parse_ledger(table({"1997,EUR,1,,,,,,,,,,1,0"})); });
        CHECK(e.column() == "cost_of_personnel");
    }
    SUBCASE("unknown column") {
        auto e = expect_parse_error(
            [] { parse_ledger("year,currency,total_revenue,cost_of_personnel,total_cost,bonus\n1997,EUR,1,1,1,1\n"); });
        CHECK(e.column() == "bonus");
    }
    SUBCASE("ragged row") {
        auto e = expect_parse_error([] { parse_ledger(table({"1997,EUR,1,1"})); });
        CHECK(e.line() == 2);
    }
    SUBCASE("no data rows") {
        expect_parse_error([] { parse_ledger(table({})); });
    }
    SUBCASE("non-finite number") {
        auto e = expect_parse_error([] { parse_ledger(table({"1997,EUR,inf,1,,,,,,,,,1,0"})); });
        CHECK(e.column() == "total_revenue");
    }
}

TEST_CASE("header order, subsets and delimiter are configurable") {
    const auto ledger = parse_ledger("total_cost;year;cost_of_personnel;currency;total_revenue\r\n"
                                     "9;2001;4;EUR;10\r\n"
                                     "8;2000;3;EUR;9\r\n",
                                     ParseOptions{';', "org"});
    REQUIRE(ledger.size() == 2);
    CHECK(ledger.organization() == "org");
    CHECK(ledger.records()[0].year == 2000);
    CHECK(ledger.records()[1].total_cost == 9.0);
    CHECK_FALSE(ledger.records()[0].surplus_or_loss.has_value());
}

TEST_CASE("normalize_currency") {
    auto itl = fixtures::record(1999, kLirePerEuro, 0.0, 2 * kLirePerEuro, Currency::ITL);
    itl.salary = 0.0;
    const auto eur = normalize_currency(itl);
    CHECK(eur.currency == Currency::EUR);
    CHECK(eur.total_revenue == 1.0);
    CHECK(eur.cost_of_personnel == 0.0);
    CHECK(*eur.salary == 0.0);
    CHECK(eur.total_cost == 2.0);
    CHECK_FALSE(eur.services.has_value());

    const auto same = fixtures::record(2003, 10.0, 4.0, 9.0);
    CHECK(normalize_currency(same) == same);
}

TEST_CASE("normalize_currency properties") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1e12);
    for (int k = 0; k < 200; ++k) {
        auto r = fixtures::record(1998, u(rng), u(rng), u(rng), Currency::ITL);
        r.services = u(rng);
        r.surplus_or_loss = u(rng) - 5e11;
        const auto once = normalize_currency(r);
        CHECK(normalize_currency(once) == once);
        for (Item item : kAllItems) {
            const auto orig = r.value(item);
            const auto norm = once.value(item);
            REQUIRE(orig.has_value() == norm.has_value());
            if (orig) CHECK(oracle::rel_close(*norm * kLirePerEuro, *orig, 1e-12));
        }
    }
}

TEST_CASE("LedgerSeries invariants") {
    const auto ledger = LedgerSeries("x", {fixtures::record(2001, 1, 1, 1), fixtures::record(1999, 2, 2, 2)});
    CHECK(ledger.records()[0].year == 1999);
    CHECK(ledger.find(2001) != nullptr);
    CHECK(ledger.find(2000) == nullptr);
    CHECK_THROWS_AS(LedgerSeries("x", {fixtures::record(2001, 1, 1, 1), fixtures::record(2001, 2, 2, 2)}),
                    RangeError);
    CHECK_THROWS_AS(LedgerSeries("x", {fixtures::record(2001, 1, 1, 1),
                                       fixtures::record(2002, 2, 2, 2, Currency::ITL)}),
                    DomainError);
    CHECK_THROWS_AS(Series({{2000, 1.0}, {2000, 2.0}}), RangeError);
}

TEST_CASE("extract_series") {
    const auto ledger = fixtures::random_ledger(5);
    SUBCASE("full period gives one point per record") {
        const auto s = extract_series(ledger, Item::TotalRevenue, kDefaultPeriod);
        CHECK(s.size() == 19);
        CHECK(s.size() == ledger.size());
        CHECK(s[0].year == 1997);
        CHECK(s[18].year == 2015);
        CHECK(extract_series(ledger, Item::TotalRevenue).size() == ledger.size());
    }
    SUBCASE("singleton range") {
        const auto s = extract_series(ledger, Item::CostOfPersonnel, YearRange{2003, 2003});
        REQUIRE(s.size() == 1);
        CHECK(s[0].year == 2003);
        CHECK(s[0].value == ledger.find(2003)->cost_of_personnel);
    }
    SUBCASE("missing values are listed") {
        std::vector<FiscalRecord> recs(ledger.records().begin(), ledger.records().end());
        recs[2].salary.reset();  // 1999
        const LedgerSeries holed("x", recs);
        try {
            extract_series(holed, Item::Salary, YearRange{1997, 2001});
            FAIL("expected MissingDataError");
        } catch (const MissingDataError& e) {
            CHECK(e.years() == std::vector<int>{1999});
            CHECK(std::string(e.what()).find("1999") != std::string::npos);
        }
        CHECK(extract_series(holed, Item::Salary, YearRange{2000, 2005}).size() == 6);
    }
    SUBCASE("empty period") {
        CHECK_THROWS_AS(extract_series(ledger, Item::TotalRevenue, YearRange{1980, 1990}), EmptyRangeError);
    }
}

TEST_CASE("validate_ledger") {
    auto r = fixtures::record(1999, 100, 50, 90);
    r.salary = 30;
    r.social_security_taxes = 10;
    r.severance_pay = 6;
    r.personnel_other_costs = 4;

    SUBCASE("exact decomposition passes") {
        CHECK(validate_ledger(LedgerSeries("x", {r})).empty());
    }
    SUBCASE("components at 90% of personnel") {
        r.salary = 25;
        const auto f = validate_ledger(LedgerSeries("x", {r}));
        REQUIRE(f.size() == 1);
        CHECK(f[0].kind == FindingKind::DecompositionMismatch);
        CHECK(f[0].year == 1999);
    }
    SUBCASE("incomplete decomposition is not checked") {
        r.salary.reset();
        CHECK(validate_ledger(LedgerSeries("x", {r})).empty());
    }
    SUBCASE("year gap") {
        auto r1 = r;
        r1.year = 2001;
        const auto f = validate_ledger(LedgerSeries("x", {r, r1}));
        REQUIRE(f.size() == 1);
        CHECK(f[0].kind == FindingKind::YearGap);
        CHECK(f[0].year == 2000);
    }
    SUBCASE("negative money except surplus") {
        r.services = -1.0;
        r.surplus_or_loss = -20.0;
        const auto f = validate_ledger(LedgerSeries("x", {r}));
        REQUIRE(f.size() == 1);
        CHECK(f[0].kind == FindingKind::NegativeValue);
        CHECK(f[0].item == Item::Services);
    }
}

TEST_CASE("parse / serialize / parse round trip") {
    std::mt19937_64 rng(99);
    std::bernoulli_distribution drop(0.2);
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        auto base = fixtures::random_ledger(seed, 5 + static_cast<int>(seed % 15));
        std::vector<FiscalRecord> recs(base.records().begin(), base.records().end());
        for (auto& r : recs) {
            for (Item item : kAllItems) {
                if (!is_required(item) && drop(rng)) r.set(item, std::nullopt);
            }
        }
        const LedgerSeries ledger("", recs);
        const auto text = serialize_ledger(ledger);
        const auto again = parse_ledger(text);
        CHECK(again == ledger);
        CHECK(serialize_ledger(again) == text);
    }
}
