#include "ecometab/error.hpp"
#include "ecometab/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <system_error>

namespace ecometab {

namespace {

namespace fs = std::filesystem;

constexpr std::array<Item, 5> kMainCostItems = {Item::CostOfPersonnel, Item::MaterialsAndProducts, Item::Services,
                                                Item::LeasedAssetsThirdParties, Item::OtherCosts};

std::string cell(std::optional<double> v) {
    return v ? fmt::format("{}", *v) : std::string();
}

std::vector<int> years_missing(const LedgerSeries& ledger, Item item) {
    std::vector<int> out;
    for (const auto& r : ledger.records()) {
        if (!r.value(item)) out.push_back(r.year);
    }
    return out;
}

// year column followed by one column per item; every item must be reported
// in every year.
std::string item_table(const Report& report, std::string_view figure_id, std::span<const Item> items) {
    for (Item item : items) {
        if (auto missing = years_missing(report.ledger, item); !missing.empty()) {
            auto what = fmt::format("{} needs {}, missing in {}", figure_id, item_name(item), fmt::join(missing, ", "));
            throw MissingDataError(what, std::move(missing));
        }
    }
    std::string out = "year";
    for (Item item : items) out += fmt::format(",{}", item_name(item));
    out += '\n';
    for (const auto& r : report.ledger.records()) {
        out += std::to_string(r.year);
        for (Item item : items) out += "," + cell(r.value(item));
        out += '\n';
    }
    return out;
}

void write_atomically(const fs::path& target, const std::string& content) {
    fs::path tmp = target;
    tmp.replace_filename("." + target.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(fmt::format("cannot write '{}'", tmp.string()));
        out << content;
        out.close();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw Error(fmt::format("cannot write '{}'", tmp.string()));
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(fmt::format("cannot write '{}': {}", target.string(), ec.message()));
    }
}

void prepare_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw Error(fmt::format("output directory '{}' is not usable{}", dir.string(),
                                ec ? ": " + ec.message() : std::string()));
    }
}

}  // namespace

std::string figure_csv(const Report& report, std::string_view figure_id) {
    if (figure_id == "fig1") {
        if (!report.has(Section::MeanCosts)) throw MissingDataError("fig1 needs the mean-cost profile", {});
        std::string out = "item,mean\n";
        for (const auto& d : report.mean_costs.items) {
            out += fmt::format("{},{}\n", item_name(d.item), d.stats.mean);
        }
        return out;
    }
    if (figure_id == "fig2") {
        constexpr std::array items{Item::TotalRevenue, Item::CostOfPersonnel};
        return item_table(report, figure_id, items);
    }
    if (figure_id == "fig3") {
        constexpr std::array items{Item::TotalRevenue, Item::TotalCost};
        return item_table(report, figure_id, items);
    }
    if (figure_id == "fig4") {
        if (!report.has(Section::Metabolism)) throw MissingDataError("fig4 needs the metabolism series", {});
        std::string out = "year,m_personnel_percent,m_other_costs_percent\n";
        for (const auto& p : report.metabolism_series) {
            out += fmt::format("{},{},{}\n", p.year, p.m_percent, cell(p.m_other_costs_percent));
        }
        return out;
    }
    if (figure_id == "figA1") {
        std::vector<Item> items;
        for (Item item : kMainCostItems) {
            if (years_missing(report.ledger, item).empty()) items.push_back(item);
        }
        return item_table(report, figure_id, items);
    }
    if (figure_id == "figA2") return item_table(report, figure_id, kPersonnelComponents);
    if (figure_id == "figA3") {
        constexpr std::array items{Item::CostOfPersonnel, Item::OtherCosts};
        return item_table(report, figure_id, items);
    }
    throw DomainError(fmt::format("unknown figure id '{}' (expected one of {})", figure_id,
                                  fmt::join(kFigureIds, ", ")));
}

bool figure_available(const Report& report, std::string_view figure_id) {
    try {
        figure_csv(report, figure_id);
        return true;
    } catch (const MissingDataError&) {
        return false;
    }
}

fs::path emit_figure_data(const Report& report, std::string_view figure_id, const fs::path& output_dir) {
    const std::string content = figure_csv(report, figure_id);
    prepare_dir(output_dir);
    const fs::path target = output_dir / fmt::format("{}.csv", figure_id);
    write_atomically(target, content);
    return target;
}

std::vector<fs::path> emit_figures(const Report& report, std::span<const std::string> figure_ids,
                                   const fs::path& output_dir) {
    std::vector<std::pair<fs::path, std::string>> rendered;
    for (const auto& id : figure_ids) {
        rendered.emplace_back(output_dir / fmt::format("{}.csv", id), figure_csv(report, id));
    }
    prepare_dir(output_dir);
    std::vector<fs::path> written;
    try {
        for (const auto& [path, content] : rendered) {
            write_atomically(path, content);
            written.push_back(path);
        }
    } catch (...) {
        std::error_code ec;
        for (const auto& p : written) fs::remove(p, ec);
        throw;
    }
    return written;
}

}  // namespace ecometab
