// Synthetic ledgers shared by the unit, integration and acceptance suites.
#pragma once

#include "ecometab/ledger.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <random>
#include <vector>

namespace fixtures {

using ecometab::Currency;
using ecometab::FiscalRecord;
using ecometab::LedgerSeries;

inline FiscalRecord record(int year, double revenue, double personnel, double total_cost,
                           Currency currency = Currency::EUR) {
    FiscalRecord r;
    r.year = year;
    r.currency = currency;
    r.total_revenue = revenue;
    r.cost_of_personnel = personnel;
    r.total_cost = total_cost;
    return r;
}

/// Fully populated ledger over [first, first + n) with randomised but
/// plausible statement magnitudes (~1e9). Personnel components sum exactly
/// to cost_of_personnel up to rounding.
inline LedgerSeries random_ledger(std::uint64_t seed, int n = 19, int first = 1997,
                                  Currency currency = Currency::EUR) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<FiscalRecord> recs;
    const double scale = currency == Currency::ITL ? ecometab::kLirePerEuro : 1.0;
    double revenue = 5e8 + 1e9 * u(rng);
    double share = 0.35 + 0.2 * u(rng);
    for (int i = 0; i < n; ++i) {
        revenue *= 1.0 + 0.08 * (u(rng) - 0.3);
        share = std::clamp(share + 0.02 * (u(rng) - 0.4), 0.2, 0.9);
        const double personnel = revenue * share;
        FiscalRecord r = record(first + i, revenue * scale, personnel * scale, 0.0, currency);
        r.salary = personnel * 0.7 * scale;
        r.social_security_taxes = personnel * 0.2 * scale;
        r.severance_pay = personnel * 0.06 * scale;
        r.personnel_other_costs = (personnel - personnel * 0.7 - personnel * 0.2 - personnel * 0.06) * scale;
        r.materials_and_products = (4e7 + 4e7 * u(rng)) * scale;
        r.services = (1e8 + 1e8 * u(rng)) * scale;
        r.leased_assets_third_parties = (1e7 + 1e7 * u(rng)) * scale;
        r.other_costs = revenue * (0.25 + 0.3 * u(rng)) * scale;
        r.total_cost = r.cost_of_personnel + *r.materials_and_products + *r.services +
                       *r.leased_assets_third_parties + *r.other_costs;
        r.surplus_or_loss = r.total_revenue - r.total_cost;
        recs.push_back(r);
    }
    return LedgerSeries("synthetic", std::move(recs));
}

/// 19-year EUR ledger (1997-2015) whose personnel cost is exactly
/// a * revenue^b, with irregular revenue growth.
inline LedgerSeries power_law_ledger(double a, double b, std::uint64_t seed = 11) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<FiscalRecord> recs;
    for (int i = 0; i < 19; ++i) {
        const double revenue = 8e8 * (1.0 + 0.05 * i) * (0.9 + 0.2 * u(rng));
        const double personnel = a * std::pow(revenue, b);
        auto r = record(1997 + i, revenue, personnel, personnel * 1.5);
        r.other_costs = personnel * 0.5;
        recs.push_back(r);
    }
    return LedgerSeries("power-law", std::move(recs));
}

inline std::string canonical_header() {
    return "year,currency,total_revenue,cost_of_personnel,salary,social_security_taxes,severance_pay,"
           "personnel_other_costs,materials_and_products,services,leased_assets_third_parties,other_costs,"
           "total_cost,surplus_or_loss";
}

}  // namespace fixtures
