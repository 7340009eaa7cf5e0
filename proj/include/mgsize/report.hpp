#pragma once

#include "mgsize/economics.hpp"
#include "mgsize/pso.hpp"
#include "mgsize/text.hpp"

#include <array>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

// CSV and plain-text reports. Numbers use the shortest decimal form that
// parses back to the same double, so every file re-ingests exactly.
namespace mgsize::report
{

inline std::string ledger_csv(const std::vector<HourlyFlows>& ledger)
{
    std::string out = "hour";
    for (const char* f : kFlowFields) {
        out += ',';
        out += f;
    }
    out += '\n';
    for (std::size_t t = 0; t < ledger.size(); ++t) {
        out += std::to_string(t + 1);
        for (double v : flow_values(ledger[t])) {
            out += ',';
            out += text::format_double(v);
        }
        out += '\n';
    }
    return out;
}

inline std::vector<HourlyFlows> ledger_from_csv(std::string_view content, const std::string& source = "ledger.csv")
{
    const auto table = text::parse_numeric_table(content, source);
    std::vector<std::size_t> cols;
    for (const char* f : kFlowFields) {
        cols.push_back(table.column(f));
    }
    std::vector<HourlyFlows> out;
    for (const auto& row : table.rows) {
        HourlyFlows f;
        std::size_t i = 0;
        for_each_flow_field(f, [&](const char*, double& v) { v = row[cols[i++]]; });
        out.push_back(f);
    }
    return out;
}

inline std::string costs_csv(const CostBreakdown& c)
{
    std::string out = "term,value\n";
    const auto v = c.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += std::string(CostBreakdown::labels[i]) + ',' + text::format_double(v[i]) + '\n';
    }
    return out;
}

/// Label/value rows keyed by name; each label in `labels` must occur once.
template <std::size_t N>
std::array<double, N> labeled_values(std::string_view content, const std::string& source,
                                     const std::array<std::string_view, N>& labels, std::string_view header)
{
    const auto ls = text::lines(content);
    if (ls.empty() || text::trim(ls[0]) != header) {
        throw text::ParseError(source, 1, "expected header '" + std::string(header) + "'");
    }
    std::array<double, N> out{};
    std::array<bool, N> seen{};
    for (std::size_t n = 1; n < ls.size(); ++n) {
        if (text::trim(ls[n]).empty()) {
            continue;
        }
        const auto cells = text::split(ls[n], ',');
        if (cells.size() != 2) {
            throw text::ParseError(source, n + 1, "expected 2 fields");
        }
        const auto label = text::trim(cells[0]);
        std::size_t i = 0;
        while (i < N && labels[i] != label) {
            ++i;
        }
        if (i == N) {
            throw text::ParseError(source, n + 1, "unknown label '" + std::string(label) + "'");
        }
        if (seen[i]) {
            throw text::ParseError(source, n + 1, "repeated label '" + std::string(label) + "'");
        }
        const auto v = text::parse_double(cells[1]);
        if (!v) {
            throw text::ParseError(source, n + 1, "not a number: '" + std::string(text::trim(cells[1])) + "'");
        }
        out[i] = *v;
        seen[i] = true;
    }
    for (std::size_t i = 0; i < N; ++i) {
        if (!seen[i]) {
            throw text::ParseError(source, ls.size(), "missing label '" + std::string(labels[i]) + "'");
        }
    }
    return out;
}

inline CostBreakdown costs_from_csv(std::string_view content, const std::string& source = "costs.csv")
{
    return CostBreakdown::from_values(labeled_values(content, source, CostBreakdown::labels, "term,value"));
}

inline std::string sizes_csv(const SizingVector& s)
{
    std::string out = "component,value\n";
    const auto v = s.to_vector();
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += std::string(SizingVector::names[i]) + ',' + text::format_double(v[i]) + '\n';
    }
    return out;
}

/// Counts must be whole numbers and every size non-negative.
inline SizingVector sizes_from_csv(std::string_view content, const std::string& source = "sizes.csv")
{
    std::array<std::string_view, SizingVector::kDimensions> labels{};
    for (std::size_t i = 0; i < labels.size(); ++i) {
        labels[i] = SizingVector::names[i];
    }
    const auto v = labeled_values(content, source, labels, "component,value");
    if (v[0] != std::floor(v[0]) || v[1] != std::floor(v[1])) {
        throw text::ParseError(source, 1, "unit counts n_pv and n_wt must be whole numbers");
    }
    const auto s = SizingVector::from_vector({v.begin(), v.end()});
    if (!s.valid()) {
        throw text::ParseError(source, 1, "sizes must be finite and non-negative");
    }
    return s;
}

inline std::string convergence_csv(const std::vector<pso::HistoryEntry>& history)
{
    std::string out = "iteration,best_fitness,feasible_flag\n";
    for (const auto& h : history) {
        out += std::to_string(h.iteration) + ',' + text::format_double(h.best) + ',' + (h.feasible ? "1" : "0") + '\n';
    }
    return out;
}

inline std::vector<pso::HistoryEntry> convergence_from_csv(std::string_view content,
                                                           const std::string& source = "convergence.csv")
{
    const auto table = text::parse_numeric_table(content, source);
    const auto ci = table.column("iteration");
    const auto cb = table.column("best_fitness");
    const auto cf = table.column("feasible_flag");
    std::vector<pso::HistoryEntry> out;
    for (const auto& row : table.rows) {
        out.push_back({static_cast<std::size_t>(row[ci]), row[cb], row[cf] != 0.0});
    }
    return out;
}

/// Plain-text run summary, one `key = value` per line.
struct Summary
{
    double elf_el = 0.0;
    double elf_th = 0.0;
    double tank_initial = 0.0;
    double tank_end = 0.0;
    bool elf_el_ok = false;
    bool elf_th_ok = false;
    bool tank_ok = false;
    bool feasible = false;
    double total_npc = 0.0;
    double unserved_electric = 0.0; // kWh, uninterruptible + interruptible
    double unserved_thermal = 0.0;
    double unserved_hydrogen = 0.0;

    friend bool operator==(const Summary&, const Summary&) = default;
};

inline Summary summarize(const Evaluation& e)
{
    const auto& f = e.feasibility;
    const auto& t = e.simulation.totals;
    return {f.elf_el,
            f.elf_th,
            f.tank_initial,
            f.tank_end,
            f.elf_el_ok,
            f.elf_th_ok,
            f.tank_ok,
            f.feasible(),
            e.costs.total,
            t.shed_uninterruptible + t.shed_interruptible,
            t.unserved_thermal,
            t.unserved_hydrogen};
}

inline std::string summary_text(const Summary& s)
{
    auto flag = [](bool b) { return std::string(b ? "yes" : "no"); };
    std::string out;
    out += "elf_el = " + text::format_double(s.elf_el) + '\n';
    out += "elf_th = " + text::format_double(s.elf_th) + '\n';
    out += "tank_initial_kwh = " + text::format_double(s.tank_initial) + '\n';
    out += "tank_end_kwh = " + text::format_double(s.tank_end) + '\n';
    out += "elf_el_ok = " + flag(s.elf_el_ok) + '\n';
    out += "elf_th_ok = " + flag(s.elf_th_ok) + '\n';
    out += "tank_ok = " + flag(s.tank_ok) + '\n';
    out += "feasible = " + flag(s.feasible) + '\n';
    out += "total_npc = " + text::format_double(s.total_npc) + '\n';
    out += "unserved_electric_kwh = " + text::format_double(s.unserved_electric) + '\n';
    out += "unserved_thermal_kwh = " + text::format_double(s.unserved_thermal) + '\n';
    out += "unserved_hydrogen_kwh = " + text::format_double(s.unserved_hydrogen) + '\n';
    return out;
}

inline Summary summary_from_text(std::string_view content, const std::string& source = "summary.txt")
{
    Summary s;
    const auto ls = text::lines(content);
    std::size_t found = 0;
    for (std::size_t n = 0; n < ls.size(); ++n) {
        if (text::trim(ls[n]).empty()) {
            continue;
        }
        const auto eq = ls[n].find('=');
        if (eq == std::string_view::npos) {
            throw text::ParseError(source, n + 1, "expected 'key = value'");
        }
        const auto key = text::trim(ls[n].substr(0, eq));
        const auto value = text::trim(ls[n].substr(eq + 1));
        auto number = [&](double& out) {
            const auto v = text::parse_double(value);
            if (!v) {
                throw text::ParseError(source, n + 1, "not a number: '" + std::string(value) + "'");
            }
            out = *v;
        };
        auto flag = [&](bool& out) {
            if (value != "yes" && value != "no") {
                throw text::ParseError(source, n + 1, "expected yes or no");
            }
            out = value == "yes";
        };
        ++found;
        if (key == "elf_el") number(s.elf_el);
        else if (key == "elf_th") number(s.elf_th);
        else if (key == "tank_initial_kwh") number(s.tank_initial);
        else if (key == "tank_end_kwh") number(s.tank_end);
        else if (key == "elf_el_ok") flag(s.elf_el_ok);
        else if (key == "elf_th_ok") flag(s.elf_th_ok);
        else if (key == "tank_ok") flag(s.tank_ok);
        else if (key == "feasible") flag(s.feasible);
        else if (key == "total_npc") number(s.total_npc);
        else if (key == "unserved_electric_kwh") number(s.unserved_electric);
        else if (key == "unserved_thermal_kwh") number(s.unserved_thermal);
        else if (key == "unserved_hydrogen_kwh") number(s.unserved_hydrogen);
        else throw text::ParseError(source, n + 1, "unknown key '" + std::string(key) + "'");
    }
    if (found != 12) {
        throw text::ParseError(source, ls.size(), "summary needs 12 keys, found " + std::to_string(found));
    }
    return s;
}

} // namespace mgsize::report
