// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "mgsize/agents.hpp"
#include "mgsize/config.hpp"
#include "mgsize/optimizer.hpp"
#include "mgsize/parallel.hpp"
#include "mgsize/report.hpp"

#include "oracle/reference_dispatch.hpp"
#include "support/fixtures.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

using namespace mgsize;

namespace
{

using Clock = std::chrono::steady_clock;

struct Verdict
{
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string num(double v)
{
    return text::format_double(v);
}

bool close(double got, double want, double rel)
{
    return std::fabs(got - want) <= rel * std::max(1.0, std::fabs(want));
}

double pwa_by_summation(double ir, int years)
{
    double s = 0.0;
    for (int n = 1; n <= years; ++n) {
        s += 1.0 / std::pow(1.0 + ir, n);
    }
    return s;
}

double replacements_by_summation(int lifetime, int years, double ir)
{
    double s = 0.0;
    for (int n = lifetime; n < years; n += lifetime) {
        s += 1.0 / std::pow(1.0 + ir, n);
    }
    return s;
}

double max_abs(const BalanceResiduals& r)
{
    return std::max({std::fabs(r.electric_dc), std::fabs(r.electric_ac), std::fabs(r.thermal),
                     std::fabs(r.hydrogen_queue), std::fabs(r.hydrogen_tank), std::fabs(r.station)});
}

ScenarioPolicy scenario(int n)
{
    return n == 1 ? ScenarioPolicy::fixed() : ScenarioPolicy::managed();
}

const DeviceCatalog cat;
const FinanceParams fin;

Verdict worked_examples()
{
    using namespace components;
    const auto start = Clock::now();
    struct Example
    {
        const char* name;
        double got;
        double want;
    };
    const double pwa20 = pwa_by_summation(0.06, 20);
    const double k5 = replacements_by_summation(5, 20, 0.06);
    const double per_mwh = 4.2 * 5.06 + 0.99 * 11.9 + 0.014 * 1965.0;
    SimulationTotals uni;
    uni.shed_uninterruptible = 100.0;
    SimulationTotals h2;
    h2.unserved_hydrogen = 100.0;
    DeviceCatalog furl;
    furl.wind_furl_power = 0.2;
    const TankState tank{100.0, 10.0, 0.05};
    const Example examples[] = {
        {"pv 1 module", pv_power(cat, 1000.0, 1), 0.154 * 1.9},
        {"pv 37 modules", pv_power(cat, 730.0, 37), 37 * 0.73 * 0.154 * 1.9},
        {"wind below cut-in", wind_power_per_unit(cat, 2.0), 0.0},
        {"wind cubic", wind_power_per_unit(cat, 6.75), 0.125},
        {"wind rated", wind_power_per_unit(cat, 11.0), 1.0},
        {"wind above cut-off", wind_power_per_unit(cat, 26.0), 0.0},
        {"wind furl taper", wind_power_per_unit(furl, 18.0), 0.6},
        {"wind farm", wind_farm_power(cat, 6.75, 4), 0.5},
        {"fuel cell power", fuel_cell_outputs(cat, 100.0).electric, 40.0},
        {"fuel cell heat", fuel_cell_outputs(cat, 100.0).heat, 50.0},
        {"electrolyzer", electrolyzer_output(cat, 1498.0), 1123.5},
        {"heater", heater_output(cat, 31.87), 28.683},
        {"boiler fuel", boiler_fuel_for_heat(cat, 94.0).fuel_in, 100.0},
        {"boiler cost", boiler_fuel_for_heat(cat, 94.0).cost, 3.0},
        {"station draw", station_tank_draw(cat, 198.5), 198.5 / 0.49},
        {"tank mass", tank_mass(cat, 62063.9), 62063.9 / 39.7},
        {"tank charge", tank_step(cat, tank, 10.0, 0.0, 0.0).energy, 110.0},
        {"tank discharge", tank_step(cat, tank, 0.0, 4.0, 6.0).energy, 100.0 - 10.0 * 0.95},
        {"pwa 20 y", pwa(0.06, 20), pwa20},
        {"pwa 1 y", pwa(0.06, 1), 1.0 / 1.06},
        {"K 5 y", replacement_present_worth(5, 20, 0.06), k5},
        {"K 15 y", replacement_present_worth(15, 20, 0.06), replacements_by_summation(15, 20, 0.06)},
        {"NPC pv", device_npc(1, cat.pv, fin), 2000.0},
        {"NPC fuel cell", device_npc(1, cat.fuel_cell, fin), 2000.0 + 1500.0 * k5 + 100.0 * pwa20},
        {"emission rate", emission_cost_per_mwh(fin), per_mwh},
        {"emission NPC", emission_npc(cat, fin, 1000.0), pwa20 * per_mwh},
        {"fuel NPC", fuel_npc(cat, fin, 94.0), pwa20 * 3.0},
        {"penalty uninterruptible", penalty_npcs(uni, fin).uninterruptible, pwa20 * 5.6 * 100.0},
        {"penalty hydrogen", penalty_npcs(h2, fin).hydrogen, pwa20 * 0.56 * 100.0},
    };
    std::size_t failed = 0;
    std::string first;
    for (const auto& e : examples) {
        if (!close(e.got, e.want, 1e-9)) {
            if (failed++ == 0) {
                first = std::string(", first: ") + e.name + " got " + num(e.got) + " want " + num(e.want);
            }
        }
    }
    const double t = seconds_since(start);
    const std::size_t n = std::size(examples);
    return {failed == 0 && t < 1.0,
            std::to_string(n - failed) + "/" + std::to_string(n) + " examples within 1e-9" + first + ", " + num(t) +
                " s"};
}

Verdict energy_balance()
{
    const auto start = Clock::now();
    constexpr int instances = 1000;
    std::size_t bad_residual = 0;
    std::size_t bad_tank = 0;
    double worst = 0.0;
    for (int i = 0; i < instances; ++i) {
        std::mt19937_64 rng(static_cast<std::uint64_t>(1000 + i));
        const auto p = fixtures::random_profiles(rng, kHoursPerYear);
        const auto s = fixtures::random_sizes(rng);
        for (int sc : {1, 2}) {
            const auto r = simulate_year(cat, p, s, scenario(sc));
            const double cap = s.m_tank * cat.hydrogen_hhv;
            double tank = r.totals.tank_initial;
            double pending = 0.0;
            for (const auto& f : r.ledger) {
                const double res = max_abs(balance_residuals(cat, f, tank, pending));
                worst = std::max(worst, res);
                bad_residual += !(res < 1e-6);
                bad_tank += f.tank_energy_end < cat.tank_min_fraction * cap || f.tank_energy_end > cap;
                tank = f.tank_energy_end;
                pending = f.deferred_hydrogen;
            }
        }
    }
    const double t = seconds_since(start);
    return {bad_residual == 0 && bad_tank == 0 && t < 120.0,
            std::to_string(instances) + " years x 2 scenarios, worst residual " + num(worst) + ", " +
                std::to_string(bad_residual) + " residual and " + std::to_string(bad_tank) + " tank violations, " +
                num(t) + " s"};
}

Verdict dispatch_oracle()
{
    const auto p = fixtures::toy_profiles();
    std::size_t diffs = 0;
    std::size_t hours = 0;
    for (int sc : {1, 2}) {
        const auto r = simulate(cat, p, fixtures::toy_sizes(), scenario(sc), fixtures::toy_options());
        const auto ref = oracle::reference_simulate(cat, p, fixtures::toy_sizes(), scenario(sc), 0.9);
        if (r.ledger.size() != ref.ledger.size()) {
            return {false, "ledger lengths differ"};
        }
        for (std::size_t t = 0; t < r.ledger.size(); ++t) {
            ++hours;
            diffs += !(flow_values(r.ledger[t]) == flow_values(ref.ledger[t]));
        }
    }
    return {diffs == 0, std::to_string(hours) + " toy hours (both scenarios), " + std::to_string(diffs) +
                            " hours differ from the reference"};
}

Verdict mas_equivalence()
{
    const auto start = Clock::now();
    constexpr int instances = 100;
    std::size_t mismatches = 0;
    std::size_t peer_messages = 0;
    std::size_t messages = 0;
    for (int i = 0; i < instances; ++i) {
        std::mt19937_64 rng(static_cast<std::uint64_t>(5000 + i));
        const auto p = fixtures::random_profiles(rng, kHoursPerYear);
        const auto s = fixtures::random_sizes(rng);
        const auto policy = fixtures::random_policy(rng);
        const auto run = agents::run_mas_year(cat, p, s, policy, {}, true);
        mismatches += !(run.result == simulate_year(cat, p, s, policy));
        for (const auto& m : run.trace) {
            ++messages;
            const bool via_control = m.sender == agents::AgentId::Control || m.recipient == agents::AgentId::Control;
            const bool field_pair = agents::level(m.sender) == agents::Level::Field &&
                                    agents::level(m.recipient) == agents::Level::Field;
            peer_messages += !via_control || field_pair;
        }
    }
    return {mismatches == 0 && peer_messages == 0,
            std::to_string(instances) + " years, " + std::to_string(mismatches) + " mismatches, " +
                std::to_string(peer_messages) + " of " + std::to_string(messages) + " messages bypass control, " +
                num(seconds_since(start)) + " s"};
}

Verdict elf_oracle()
{
    const auto p = fixtures::toy_profiles();
    double worst = 0.0;
    bool ok = true;
    for (int sc : {1, 2}) {
        const auto r = simulate(cat, p, fixtures::toy_sizes(), scenario(sc), fixtures::toy_options());
        const auto ref = oracle::reference_simulate(cat, p, fixtures::toy_sizes(), scenario(sc), 0.9);
        const auto e = elf_indices(r);
        for (auto [got, want] : {std::pair{e.electric, ref.elf_el}, std::pair{e.thermal, ref.elf_th}}) {
            worst = std::max(worst, std::fabs(got - want));
            ok = ok && close(got, want, 1e-12) && want > 0.0;
        }
    }
    return {ok, "toy fixture, both scenarios, largest difference " + num(worst)};
}

Verdict pso_sanity()
{
    auto sphere = [](const std::vector<double>& x) {
        double s = 0.0;
        for (double v : x) {
            s += v * v;
        }
        return pso::Score{s, true};
    };
    const std::vector<pso::Bound> bounds(8, pso::Bound{-5.12, 5.12});
    std::size_t solved = 0;
    std::size_t monotone = 0;
    std::size_t repeatable = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        pso::Settings s;
        s.seed = seed;
        s.iterations = 200;
        s.threads = thread_budget();
        const auto a = pso::minimize(sphere, bounds, s);
        const auto b = pso::minimize(sphere, bounds, s);
        worst = std::max(worst, a.best_score.value);
        solved += a.best_score.value <= 1e-3;
        bool mono = true;
        for (std::size_t i = 1; i < a.history.size(); ++i) {
            mono = mono && a.history[i].best <= a.history[i - 1].best;
        }
        monotone += mono;
        repeatable += a.history == b.history;
    }
    return {solved == 10 && monotone == 10 && repeatable == 10,
            std::to_string(solved) + "/10 seeds reach 1e-3 (worst " + num(worst) + "), " + std::to_string(monotone) +
                "/10 monotone, " + std::to_string(repeatable) + "/10 repeatable"};
}

struct Optimized
{
    OptimizationResult result;
    double seconds = 0.0;
};

// Reference preset with the default search settings; only the seed varies.
Optimized run_optimize(const ProfileSet& profiles, int sc, std::uint64_t seed)
{
    const RunConfig defaults;
    auto config = defaults.pso;
    config.settings.seed = seed;
    config.settings.threads = thread_budget();
    const auto start = Clock::now();
    auto r = optimize(profiles, scenario(sc), defaults.catalog, defaults.finance, config,
                      defaults.initial_tank_fraction);
    return {std::move(r), seconds_since(start)};
}

double penalty_dollars(const CostBreakdown& c)
{
    return c.npc_pi + c.npc_puni + c.npc_q + c.npc_h;
}

Verdict end_to_end(const Optimized& sc1)
{
    const auto& f = sc1.result.evaluation.feasibility;
    return {f.feasible() && sc1.result.found_feasible,
            "scenario 1 total NPC " + num(sc1.result.evaluation.costs.total) + ", elf_el " + num(f.elf_el) +
                ", elf_th " + num(f.elf_th) + ", tank end " + num(f.tank_end) + " vs initial " + num(f.tank_initial) +
                ", " + num(sc1.seconds) + " s"};
}

Verdict directional(const ProfileSet& profiles, const std::vector<Optimized>& sc1_runs,
                    const std::vector<std::uint64_t>& seeds)
{
    std::size_t ordered = 0;
    std::size_t fewer_penalties = 0;
    std::string detail;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        const auto& one = sc1_runs[i].result;
        const auto two = run_optimize(profiles, 2, seeds[i]).result;
        ordered += two.evaluation.costs.total <= one.evaluation.costs.total;
        const RunConfig d;
        const auto fixed = evaluate(one.best, profiles, scenario(1), d.catalog, d.finance, {d.initial_tank_fraction, false});
        const auto managed =
            evaluate(one.best, profiles, scenario(2), d.catalog, d.finance, {d.initial_tank_fraction, false});
        const double pen1 = penalty_dollars(fixed.costs);
        const double pen2 = penalty_dollars(managed.costs);
        fewer_penalties += pen2 < pen1;
        detail += "; seed " + std::to_string(seeds[i]) + ": " + num(two.evaluation.costs.total) + " vs " +
                  num(one.evaluation.costs.total) + ", penalties " + num(pen2) + " vs " + num(pen1);
    }
    return {ordered == seeds.size() && fewer_penalties == seeds.size(),
            std::to_string(ordered) + "/" + std::to_string(seeds.size()) + " seeds scenario 2 <= scenario 1, " +
                std::to_string(fewer_penalties) + "/" + std::to_string(seeds.size()) +
                " with fewer managed penalties at equal sizes" + detail};
}

double unserved_energy(const SimulationTotals& t)
{
    return t.shed_interruptible + t.shed_uninterruptible + t.unserved_thermal;
}

void enlarge(SizingVector& s, std::size_t dim, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.05, 1.0);
    auto grow = [&](double v) { return v == 0.0 ? 50.0 * u(rng) : v * (1.0 + u(rng)); };
    switch (dim) {
    case 0: s.n_pv += 1 + static_cast<long>(std::floor(200.0 * u(rng))); break;
    case 1: s.n_wt += 1 + static_cast<long>(std::floor(40.0 * u(rng))); break;
    case 2: s.p_electrolyzer = grow(s.p_electrolyzer); break;
    case 3: s.m_tank = grow(s.m_tank); break;
    case 4: s.p_fuelcell = grow(s.p_fuelcell); break;
    case 5: s.p_converter = grow(s.p_converter); break;
    case 6: s.p_boiler = grow(s.p_boiler); break;
    default: s.p_heater = grow(s.p_heater); break;
    }
}

Verdict monotonicity(const ProfileSet& profiles)
{
    constexpr int pairs = 200;
    constexpr std::array<const char*, 8> names = {"n_pv",       "n_wt",        "p_electrolyzer", "m_tank",
                                                  "p_fuelcell", "p_converter", "p_boiler",       "p_heater"};
    std::array<int, 8> violations{};
    double worst = 0.0;
    std::string worst_case;
    std::mt19937_64 rng(20240917);
    for (int i = 0; i < pairs; ++i) {
        const auto dim = static_cast<std::size_t>(i % 8);
        const int sc = 1 + (i / 8) % 2;
        const auto base = fixtures::random_sizes(rng);
        auto bigger = base;
        enlarge(bigger, dim, rng);
        const SimulationOptions opt{0.5, false};
        const double before = unserved_energy(simulate_year(cat, profiles, base, scenario(sc), opt).totals);
        const double after = unserved_energy(simulate_year(cat, profiles, bigger, scenario(sc), opt).totals);
        // Summation-order noise is not an increase.
        if (after > before + 1e-9 * std::max(1.0, before)) {
            ++violations[dim];
            if (after - before > worst) {
                worst = after - before;
                worst_case = std::string(names[dim]) + " in scenario " + std::to_string(sc) + ", " + num(before) +
                             " -> " + num(after) + " kWh";
            }
        }
    }
    int total = 0;
    std::string per_dim;
    for (std::size_t d = 0; d < names.size(); ++d) {
        total += violations[d];
        per_dim += std::string(d ? " " : "") + names[d] + "=" + std::to_string(violations[d]);
    }
    return {total == 0, std::to_string(pairs) + " pairs, " + std::to_string(total) + " increases (" + per_dim + ")" +
                            (total ? "; largest: " + worst_case : std::string())};
}

// Runs the whole output path twice and re-reads every file it produces.
Verdict determinism_and_round_trip()
{
    std::vector<std::string> failures;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok) {
            failures.push_back(what);
        }
    };

    struct Outputs
    {
        std::vector<std::string> profiles;
        std::string ledger, costs, summary, sizes, convergence, messages;
    };
    SynthesisSpec spec;
    spec.seed = 77;
    spec.annual_electric = 2.0e5;
    spec.annual_thermal = 1.0e5;
    spec.fleet_size = 20;
    const SizingVector sizes{400, 60, 40.0, 300.0, 40.0, 60.0, 40.0, 10.0};
    const auto produce = [&] {
        Outputs o;
        const auto p = synthesize(spec);
        for (const HourlySeries* s :
             {&p.irradiance, &p.wind_speed, &p.electric_load, &p.thermal_load, &p.hydrogen_demand}) {
            o.profiles.push_back(series_to_csv(*s));
        }
        const auto e = evaluate(sizes, p, scenario(2), cat, fin, {0.5, true});
        o.ledger = report::ledger_csv(e.simulation.ledger);
        o.costs = report::costs_csv(e.costs);
        o.summary = report::summary_text(report::summarize(e));
        PsoConfig config;
        config.settings.swarm_size = 6;
        config.settings.iterations = 4;
        config.settings.seed = 3;
        config.settings.threads = thread_budget();
        const auto r = optimize(p, scenario(1), cat, fin, config);
        o.sizes = report::sizes_csv(r.best);
        o.convergence = report::convergence_csv(r.history);
        o.messages = agents::trace_to_text(agents::run_mas_year(cat, p, sizes, scenario(2), {0.5, false}, true).trace);
        return o;
    };
    const auto a = produce();
    const auto b = produce();
    expect(a.profiles == b.profiles, "profile CSVs differ between runs");
    expect(a.ledger == b.ledger, "ledger differs");
    expect(a.costs == b.costs, "costs differ");
    expect(a.summary == b.summary, "summary differs");
    expect(a.sizes == b.sizes, "best sizes differ");
    expect(a.convergence == b.convergence, "convergence differs");
    expect(a.messages == b.messages, "message log differs");

    const auto p = synthesize(spec);
    const HourlySeries* series[] = {&p.irradiance, &p.wind_speed, &p.electric_load, &p.thermal_load,
                                    &p.hydrogen_demand};
    for (std::size_t i = 0; i < a.profiles.size(); ++i) {
        const auto back = series_from_csv(a.profiles[i], series[i]->unit, kProfileFileNames[i]);
        expect(back == *series[i] && series_to_csv(back) == a.profiles[i], "profile round trip");
    }
    const auto e = evaluate(sizes, p, scenario(2), cat, fin, {0.5, true});
    const auto ledger = report::ledger_from_csv(a.ledger);
    bool same = ledger.size() == e.simulation.ledger.size();
    for (std::size_t t = 0; same && t < ledger.size(); ++t) {
        same = flow_values(ledger[t]) == flow_values(e.simulation.ledger[t]);
    }
    expect(same && report::ledger_csv(ledger) == a.ledger, "ledger round trip");
    expect(report::costs_from_csv(a.costs) == e.costs, "costs round trip");
    expect(report::summary_from_text(a.summary) == report::summarize(e), "summary round trip");
    expect(report::sizes_csv(report::sizes_from_csv(a.sizes)) == a.sizes, "sizes round trip");
    expect(report::convergence_csv(report::convergence_from_csv(a.convergence)) == a.convergence,
           "convergence round trip");
    const auto trace = agents::trace_from_text(a.messages);
    expect(agents::trace_to_text(trace) == a.messages, "message log round trip");
    expect(agents::replay(trace, cat, scenario(2)) == simulate_year(cat, p, sizes, scenario(2), {0.5, true}),
           "message log replay");

    std::string detail = "7 outputs x 2 runs byte-identical, 7 re-ingested";
    if (!failures.empty()) {
        detail = failures.front() + " (" + std::to_string(failures.size()) + " problems)";
    }
    return {failures.empty(), detail};
}

} // namespace

int main()
{
    int failed = 0;
    auto report_line = [&](int n, const char* title, const Verdict& v) {
        std::cout << (v.pass ? "PASS" : "FAIL") << "  " << n << ". " << title << ": " << v.detail << std::endl;
        failed += !v.pass;
    };
    auto guarded = [](const std::function<Verdict()>& f) {
        try {
            return f();
        } catch (const std::exception& e) {
            return Verdict{false, std::string("exception: ") + e.what()};
        }
    };

    report_line(1, "device and cost examples", guarded(worked_examples));
    report_line(2, "energy balance", guarded(energy_balance));
    report_line(3, "dispatch oracle", guarded(dispatch_oracle));
    report_line(4, "MAS equivalence", guarded(mas_equivalence));
    report_line(5, "ELF oracle", guarded(elf_oracle));
    report_line(6, "PSO sanity", guarded(pso_sanity));

    const auto preset = synthesize(SynthesisSpec{});
    const std::vector<std::uint64_t> seeds = {RunConfig{}.pso.settings.seed, 2, 3, 4, 5};
    std::vector<Optimized> sc1_runs;
    const auto sc1 = guarded([&] {
        for (auto seed : seeds) {
            sc1_runs.push_back(run_optimize(preset, 1, seed));
        }
        return end_to_end(sc1_runs.front());
    });
    report_line(7, "end-to-end feasibility", sc1);
    report_line(8, "directional reproduction",
                sc1_runs.size() == seeds.size() ? guarded([&] { return directional(preset, sc1_runs, seeds); })
                                                : Verdict{false, "scenario 1 runs did not complete"});
    report_line(9, "monotonicity", guarded([&] { return monotonicity(preset); }));
    report_line(10, "determinism and round trip", guarded(determinism_and_round_trip));

    std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed"))
              << std::endl;
    return failed ? 1 : 0;
}
