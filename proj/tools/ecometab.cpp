// ecometab: economic-metabolism analyses over an annual income-statement table.

#include "ecometab/error.hpp"
#include "ecometab/ledger.hpp"
#include "ecometab/report.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace ecometab;

struct Options {
    std::string input;
    int from = kDefaultPeriod.first;
    int to = kDefaultPeriod.last;
    double alpha = 0.05;
    std::string format = "text";
    std::string out_dir;
    std::string numerator{item_name(Item::CostOfPersonnel)};
    std::string denominator{item_name(Item::TotalRevenue)};
    std::string delimiter = ",";
    std::vector<std::string> figures;
};

void add_common_options(CLI::App* sub, Options& o) {
    sub->add_option("-i,--input", o.input, "Income-statement table (delimited text)")->required();
    sub->add_option("--from", o.from, "First year of the analysis window")->capture_default_str();
    sub->add_option("--to", o.to, "Last year of the analysis window")->capture_default_str();
    sub->add_option("--alpha", o.alpha, "Significance level of the isometry test")->capture_default_str();
    sub->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"text", "json", "csv"}))
        ->capture_default_str();
    sub->add_option("--out-dir", o.out_dir, "Directory for figure-data files");
    sub->add_option("--numerator", o.numerator, "Share numerator / allometric dependent item")
        ->capture_default_str();
    sub->add_option("--denominator", o.denominator, "Share denominator / allometric explanatory item")
        ->capture_default_str();
    sub->add_option("--delimiter", o.delimiter, "Field delimiter of the input (single character or 'tab')")
        ->capture_default_str();
}

char delimiter_char(const std::string& d) {
    if (d == "tab" || d == "\\t") return '\t';
    if (d.size() != 1) throw DomainError(fmt::format("delimiter must be a single character, got '{}'", d));
    return d[0];
}

ReportConfig make_config(const Options& o) {
    ReportConfig c;
    c.input_path = o.input;
    c.period = {o.from, o.to};
    c.alpha = o.alpha;
    c.output_format = *parse_format(o.format);
    c.output_dir = o.out_dir.empty() ? std::filesystem::path(".") : std::filesystem::path(o.out_dir);
    c.numerator_item = item_from_name(o.numerator);
    c.denominator_item = item_from_name(o.denominator);
    c.delimiter = delimiter_char(o.delimiter);
    validate_config(c);
    return c;
}

std::vector<std::string> available_figures(const Report& report) {
    std::vector<std::string> ids;
    for (auto id : kFigureIds) {
        if (figure_available(report, id)) {
            ids.emplace_back(id);
        } else {
            std::cerr << "ecometab: skipping " << id << ": required series not reported\n";
        }
    }
    return ids;
}

int run(const std::string& command, const Options& o) {
    const ReportConfig config = make_config(o);
    ParseOptions parse;
    parse.delimiter = config.delimiter;
    const LedgerSeries ledger = parse_ledger_file(config.input_path, parse);

    std::vector<Section> sections;
    if (command == "report") {
        sections.assign(kAllSections.begin(), kAllSections.end());
    } else if (command == "trend") {
        sections = {Section::Trend};
    } else if (command == "metabolism") {
        sections = {Section::Metabolism};
    } else if (command == "growth") {
        sections = {Section::Growth, Section::CrossCheck};
    } else if (command == "allometric") {
        sections = {Section::Allometric};
    } else if (command == "crossover") {
        sections = {Section::Crossings};
    } else if (command == "validate") {
        sections = {Section::Validation};
    } else if (command == "figures") {
        sections = {Section::Metabolism, Section::MeanCosts};
    }

    const Report report = build_report(ledger, config, sections);

    if (command == "figures") {
        const auto ids = o.figures.empty() ? available_figures(report) : o.figures;
        for (const auto& path : emit_figures(report, ids, config.output_dir)) std::cout << path.string() << '\n';
        return 0;
    }

    const std::string rendered = render_report(report, config.output_format);
    if (command == "report" && !o.out_dir.empty()) {
        const auto ids = available_figures(report);
        emit_figures(report, ids, config.output_dir);
    }
    std::cout << rendered;
    std::cout.flush();
    return std::cout ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Economic metabolism of research organizations: trend, share, growth and allometric analyses "
                 "of annual income statements"};
    app.require_subcommand(1);

    Options options;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"report", "Run every analysis (tables, share series, crossings, mean costs, validation)"},
        {"trend", "Linear time trends of total revenue, cost of personnel and total cost"},
        {"metabolism", "Share of the numerator item in the denominator item, per year"},
        {"growth", "Arithmetic growth rates over the window, with the share cross-check"},
        {"allometric", "Log-log allometric fit and isometry classification"},
        {"crossover", "Years where the numerator item and other costs swap order"},
        {"figures", "Write figure-data CSV files to --out-dir"},
        {"validate", "Check the ledger for decomposition mismatches, negative values and gaps"},
    };
    for (const auto& [name, description] : commands) {
        auto* sub = app.add_subcommand(name, description);
        add_common_options(sub, options);
        if (name == "figures") {
            sub->add_option("--figure", options.figures, "Figure ids to write (default: all available)")
                ->check(CLI::IsMember(std::vector<std::string>(kFigureIds.begin(), kFigureIds.end())));
        }
    }

    CLI11_PARSE(app, argc, argv);

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return run(command, options);
    } catch (const std::exception& e) {
        std::cerr << "ecometab: error: " << e.what() << '\n';
        return 1;
    }
}
