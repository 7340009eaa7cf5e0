// mgsize: simulate, optimize and synthesize inputs for the islanded
// hydrogen microgrid.
//
// Exit codes: 0 success, 2 usage or config error, 3 optimization finished
// without a feasible point (the best penalized point is still written).

#include "mgsize/agents.hpp"
#include "mgsize/config.hpp"
#include "mgsize/parallel.hpp"
#include "mgsize/report.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;

struct Options
{
    std::string config;
    std::optional<int> scenario;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string sizes;
    bool trace = false;
};

mgsize::RunConfig load(const Options& o)
{
    auto c = o.config.empty() ? mgsize::RunConfig{} : mgsize::load_config(o.config);
    if (o.scenario) {
        if (*o.scenario == 1) {
            c.policy.mode = mgsize::ScenarioMode::Fixed;
            c.policy.interruptible_fraction = 0.0;
        } else {
            c.policy.mode = mgsize::ScenarioMode::Managed;
            c.policy.interruptible_fraction = 0.15;
        }
    }
    if (!o.out.empty()) {
        c.output_dir = o.out;
    }
    c.validate();
    return c;
}

std::string in_dir(const std::string& dir, const char* file)
{
    return (std::filesystem::path(dir) / file).string();
}

void write_evaluation(const std::string& dir, const mgsize::Evaluation& e)
{
    using namespace mgsize;
    std::filesystem::create_directories(dir);
    text::write_file(in_dir(dir, "ledger.csv"), report::ledger_csv(e.simulation.ledger));
    text::write_file(in_dir(dir, "costs.csv"), report::costs_csv(e.costs));
    text::write_file(in_dir(dir, "summary.txt"), report::summary_text(report::summarize(e)));
}

void print_outcome(const mgsize::Evaluation& e)
{
    const auto& f = e.feasibility;
    std::cout << "total NPC        " << mgsize::text::format_double(e.costs.total) << " $\n"
              << "ELF electric     " << mgsize::text::format_double(f.elf_el) << (f.elf_el_ok ? "" : "  (over limit)")
              << "\nELF thermal      " << mgsize::text::format_double(f.elf_th) << (f.elf_th_ok ? "" : "  (over limit)")
              << "\ntank end/initial " << mgsize::text::format_double(f.tank_end) << " / "
              << mgsize::text::format_double(f.tank_initial) << " kWh" << (f.tank_ok ? "" : "  (depleted)") << '\n';
}

int cmd_simulate(Options o)
{
    using namespace mgsize;
    auto c = load(o);
    if (o.seed) {
        c.synthesis.seed = *o.seed;
    }
    const auto sizes = report::sizes_from_csv(text::read_file(o.sizes), o.sizes);
    const auto profiles = resolve_profiles(c);

    Evaluation e;
    e.simulation = simulate_year(c.catalog, profiles, sizes, c.policy, {c.initial_tank_fraction, true});
    e.costs = cost_breakdown(c.catalog, c.finance, sizes, e.simulation.totals);
    e.feasibility = feasibility(e.simulation);
    write_evaluation(c.output_dir, e);
    if (o.trace) {
        const auto mas =
            agents::run_mas_year(c.catalog, profiles, sizes, c.policy, {c.initial_tank_fraction, false}, true);
        text::write_file(in_dir(c.output_dir, "messages.csv"), agents::trace_to_text(mas.trace));
    }
    print_outcome(e);
    return kExitOk;
}

int cmd_optimize(Options o)
{
    using namespace mgsize;
    auto c = load(o);
    if (o.seed) {
        c.pso.settings.seed = *o.seed;
    }
    c.pso.settings.threads = thread_budget();
    const auto profiles = resolve_profiles(c);

    const auto r = optimize(profiles, c.policy, c.catalog, c.finance, c.pso, c.initial_tank_fraction);
    write_evaluation(c.output_dir, r.evaluation);
    text::write_file(in_dir(c.output_dir, "best_sizes.csv"), report::sizes_csv(r.best));
    text::write_file(in_dir(c.output_dir, "convergence.csv"), report::convergence_csv(r.history));

    std::cout << report::sizes_csv(r.best);
    print_outcome(r.evaluation);
    if (!r.evaluation.feasibility.feasible()) {
        std::cerr << "mgsize: no feasible design found; best penalized point written to " << c.output_dir << '\n';
        return kExitInfeasible;
    }
    return kExitOk;
}

int cmd_synth(Options o)
{
    using namespace mgsize;
    auto c = load(o);
    if (o.seed) {
        c.synthesis.seed = *o.seed;
    }
    const auto p = synthesize(c.synthesis);
    std::filesystem::create_directories(c.output_dir);
    const HourlySeries* series[] = {&p.irradiance, &p.wind_speed, &p.electric_load, &p.thermal_load,
                                    &p.hydrogen_demand};
    for (std::size_t i = 0; i < kProfileFileNames.size(); ++i) {
        text::write_file(in_dir(c.output_dir, kProfileFileNames[i]), series_to_csv(*series[i]));
    }
    std::cout << "wrote " << kProfileFileNames.size() << " profiles to " << c.output_dir << '\n';
    return kExitOk;
}

int cmd_defaults(Options o)
{
    std::cout << mgsize::to_ini(load(o));
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Sizing and dispatch of an islanded hydrogen microgrid"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "run configuration (INI)");
        sub->add_option("--scenario", o.scenario, "1 = fixed demand, 2 = managed demand")
            ->check(CLI::IsMember({1, 2}));
        sub->add_option("--out", o.out, "output directory (overrides [output] dir)");
    };

    auto* simulate = app.add_subcommand("simulate", "run one year for given sizes");
    common(simulate);
    simulate->add_option("--sizes", o.sizes, "sizes CSV (component,value)")->required();
    simulate->add_option("--seed", o.seed, "seed of the synthetic profiles");
    simulate->add_flag("--trace", o.trace, "also run the agent protocol and write messages.csv");

    auto* optimize = app.add_subcommand("optimize", "search for the least-cost feasible sizes");
    common(optimize);
    optimize->add_option("--seed", o.seed, "PSO seed");

    auto* synth = app.add_subcommand("synth", "write synthetic profile CSVs");
    common(synth);
    synth->add_option("--seed", o.seed, "seed of the synthetic profiles");

    auto* defaults = app.add_subcommand("defaults", "print the effective configuration");
    common(defaults);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (simulate->parsed()) {
            return cmd_simulate(o);
        }
        if (optimize->parsed()) {
            return cmd_optimize(o);
        }
        if (synth->parsed()) {
            return cmd_synth(o);
        }
        return cmd_defaults(o);
    } catch (const mgsize::Error& e) {
        std::cerr << "mgsize: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "mgsize: " << e.what() << '\n';
        return kExitUsage;
    }
}
