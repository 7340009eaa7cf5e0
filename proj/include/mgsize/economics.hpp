#pragma once

#include "mgsize/core.hpp"
#include "mgsize/dispatch.hpp"

#include <array>
#include <cmath>
#include <span>
#include <string_view>

namespace mgsize
{

struct EmissionFactor
{
    std::string_view pollutant;
    double externality_cost = 0.0; // $/lb
    double boiler_factor = 0.0;    // lb/MWh
};

enum class EmissionBasis
{
    HeatOutput,
    FuelInput,
};

struct FinanceParams
{
    double interest_rate = 0.06;
    double project_years = 20.0;
    double penalty_uninterruptible = 5.6; // $/kWh
    double penalty_interruptible = 0.56;
    double penalty_thermal = 5.6;
    double penalty_hydrogen = 0.56;
    std::array<EmissionFactor, 3> emissions{{
        {"NOx", 4.2, 5.06},
        {"SO2", 0.99, 11.9},
        {"CO2", 0.014, 1965.0},
    }};
    EmissionBasis emission_basis = EmissionBasis::HeatOutput;

    void validate() const
    {
        if (!(interest_rate > 0.0 && project_years >= 1.0)) {
            throw Error("finance requires interest_rate > 0 and project_years >= 1");
        }
        for (double p : {penalty_uninterruptible, penalty_interruptible, penalty_thermal, penalty_hydrogen}) {
            if (!(p >= 0.0)) {
                throw Error("penalty rates must be non-negative");
            }
        }
        for (const auto& e : emissions) {
            if (!(e.externality_cost >= 0.0 && e.boiler_factor >= 0.0)) {
                throw Error("emission costs and factors must be non-negative");
            }
        }
    }

    friend bool operator==(const FinanceParams& a, const FinanceParams& b)
    {
        for (std::size_t i = 0; i < a.emissions.size(); ++i) {
            if (a.emissions[i].externality_cost != b.emissions[i].externality_cost ||
                a.emissions[i].boiler_factor != b.emissions[i].boiler_factor) {
                return false;
            }
        }
        return a.interest_rate == b.interest_rate && a.project_years == b.project_years &&
               a.penalty_uninterruptible == b.penalty_uninterruptible &&
               a.penalty_interruptible == b.penalty_interruptible && a.penalty_thermal == b.penalty_thermal &&
               a.penalty_hydrogen == b.penalty_hydrogen && a.emission_basis == b.emission_basis;
    }
};

/// Present value of 1 $/yr over `years` at rate `ir`.
inline double pwa(double ir, double years)
{
    const double g = std::pow(1.0 + ir, years);
    return (g - 1.0) / (ir * g);
}

/// Present value of one unit replacement at each lifetime multiple strictly
/// inside the horizon.
inline double replacement_present_worth(double lifetime, double years, double ir)
{
    double k = 0.0;
    for (int n = 1; n * lifetime < years; ++n) {
        k += 1.0 / std::pow(1.0 + ir, n * lifetime);
    }
    return k;
}

inline double device_npc(double units, const DeviceEconomics& econ, const FinanceParams& fin)
{
    const double k = replacement_present_worth(econ.lifetime, fin.project_years, fin.interest_rate);
    return units * (econ.capital_cost + econ.replacement_cost * k +
                    econ.maintenance_cost * pwa(fin.interest_rate, fin.project_years));
}

/// Externality cost per MWh of boiler basis energy, summed over pollutants.
inline double emission_cost_per_mwh(const FinanceParams& fin)
{
    double s = 0.0;
    for (const auto& e : fin.emissions) {
        s += e.externality_cost * e.boiler_factor;
    }
    return s;
}

inline double emission_basis_energy(const DeviceCatalog& cat, const FinanceParams& fin, double boiler_heat)
{
    return fin.emission_basis == EmissionBasis::HeatOutput ? boiler_heat : boiler_heat / cat.boiler_efficiency();
}

/// Emission NPC from annual boiler heat (kWh).
inline double emission_npc(const DeviceCatalog& cat, const FinanceParams& fin, double annual_boiler_heat)
{
    const double mwh = emission_basis_energy(cat, fin, annual_boiler_heat) / 1000.0;
    return pwa(fin.interest_rate, fin.project_years) * emission_cost_per_mwh(fin) * mwh;
}

inline double emission_npc(const DeviceCatalog& cat, const FinanceParams& fin, std::span<const double> boiler_heat)
{
    double annual = 0.0;
    for (double q : boiler_heat) {
        annual += q;
    }
    return emission_npc(cat, fin, annual);
}

inline double fuel_npc(const DeviceCatalog& cat, const FinanceParams& fin, double annual_boiler_heat)
{
    return pwa(fin.interest_rate, fin.project_years) * (annual_boiler_heat / cat.boiler_efficiency()) *
           cat.boiler_fuel_cost;
}

inline double fuel_npc(const DeviceCatalog& cat, const FinanceParams& fin, std::span<const double> boiler_heat)
{
    double annual = 0.0;
    for (double q : boiler_heat) {
        annual += q;
    }
    return fuel_npc(cat, fin, annual);
}

struct PenaltyNpcs
{
    double interruptible = 0.0;
    double uninterruptible = 0.0;
    double thermal = 0.0;
    double hydrogen = 0.0;

    double sum() const { return interruptible + uninterruptible + thermal + hydrogen; }
};

/// Unserved energy priced at its penalty rate each year, then present-worthed.
inline PenaltyNpcs penalty_npcs(const SimulationTotals& t, const FinanceParams& fin)
{
    const double f = pwa(fin.interest_rate, fin.project_years);
    return {f * fin.penalty_interruptible * t.shed_interruptible,
            f * fin.penalty_uninterruptible * t.shed_uninterruptible, f * fin.penalty_thermal * t.unserved_thermal,
            f * fin.penalty_hydrogen * t.unserved_hydrogen};
}

struct ElfIndices
{
    double electric = 0.0;
    double thermal = 0.0;
};

/// Mean hourly unserved/demand ratio over the year, uninterruptible electric
/// load and thermal load. Hours without demand contribute zero.
inline ElfIndices elf_indices(const SimulationResult& r)
{
    const double n = static_cast<double>(kHoursPerYear);
    if (r.ledger.empty()) {
        return {r.totals.elf_el_sum / n, r.totals.elf_th_sum / n};
    }
    double el = 0.0;
    double th = 0.0;
    for (const auto& f : r.ledger) {
        if (f.p_uninterruptible > 0.0) {
            el += f.shed_uninterruptible / f.p_uninterruptible;
        }
        if (f.q_load > 0.0) {
            th += f.unserved_thermal / f.q_load;
        }
    }
    return {el / n, th / n};
}

struct CostBreakdown
{
    double npc_pv = 0.0;
    double npc_wt = 0.0;
    double npc_el = 0.0;
    double npc_tank = 0.0;
    double npc_fc = 0.0;
    double npc_boiler = 0.0;
    double npc_heater = 0.0;
    double npc_conv = 0.0;
    double npc_sta = 0.0;
    double npc_em = 0.0;
    double npc_fuel = 0.0;
    double npc_pi = 0.0;
    double npc_puni = 0.0;
    double npc_q = 0.0;
    double npc_h = 0.0;
    double total = 0.0;

    static constexpr std::array<std::string_view, 16> labels = {
        "NPC_PV",     "NPC_WT",     "NPC_el",  "NPC_tank", "NPC_FC", "NPC_boiler", "NPC_heater", "NPC_conv",
        "NPC_sta",    "NPC_em",     "NPC_fuel", "NPC_Pi",  "NPC_Puni", "NPC_Q",    "NPC_h",      "NPC",
    };

    /// Term values in `labels` order, total last.
    std::array<double, 16> values() const
    {
        return {npc_pv,   npc_wt,   npc_el, npc_tank, npc_fc,   npc_boiler, npc_heater, npc_conv,
                npc_sta,  npc_em,   npc_fuel, npc_pi, npc_puni, npc_q,      npc_h,      total};
    }

    static CostBreakdown from_values(const std::array<double, 16>& v)
    {
        return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10], v[11], v[12], v[13], v[14], v[15]};
    }

    double sum_of_terms() const
    {
        const auto v = values();
        double s = 0.0;
        for (std::size_t i = 0; i + 1 < v.size(); ++i) {
            s += v[i];
        }
        return s;
    }

    friend bool operator==(const CostBreakdown&, const CostBreakdown&) = default;
};

inline CostBreakdown cost_breakdown(const DeviceCatalog& cat, const FinanceParams& fin, const SizingVector& sizes,
                                    const SimulationTotals& totals)
{
    CostBreakdown c;
    c.npc_pv = device_npc(static_cast<double>(sizes.n_pv), cat.pv, fin);
    c.npc_wt = device_npc(static_cast<double>(sizes.n_wt), cat.wind_turbine, fin);
    c.npc_el = device_npc(sizes.p_electrolyzer, cat.electrolyzer, fin);
    c.npc_tank = device_npc(sizes.m_tank, cat.hydrogen_tank, fin);
    c.npc_fc = device_npc(sizes.p_fuelcell, cat.fuel_cell, fin);
    c.npc_boiler = device_npc(sizes.p_boiler, cat.boiler, fin);
    c.npc_heater = device_npc(sizes.p_heater, cat.heater, fin);
    c.npc_conv = device_npc(sizes.p_converter, cat.converter, fin);
    c.npc_sta = device_npc(1.0, cat.station_compressor, fin);
    c.npc_em = emission_npc(cat, fin, totals.boiler_heat);
    c.npc_fuel = fuel_npc(cat, fin, totals.boiler_heat);
    const auto pen = penalty_npcs(totals, fin);
    c.npc_pi = pen.interruptible;
    c.npc_puni = pen.uninterruptible;
    c.npc_q = pen.thermal;
    c.npc_h = pen.hydrogen;
    c.total = c.sum_of_terms();
    return c;
}

struct Feasibility
{
    double elf_el = 0.0;
    double elf_th = 0.0;
    double tank_initial = 0.0;
    double tank_end = 0.0;
    bool elf_el_ok = false;
    bool elf_th_ok = false;
    bool tank_ok = false;

    bool feasible() const { return elf_el_ok && elf_th_ok && tank_ok; }
};

inline constexpr double kElfLimit = 0.01;

inline Feasibility feasibility(const SimulationResult& r)
{
    const auto elf = elf_indices(r);
    Feasibility f;
    f.elf_el = elf.electric;
    f.elf_th = elf.thermal;
    f.tank_initial = r.totals.tank_initial;
    f.tank_end = r.totals.tank_end;
    f.elf_el_ok = elf.electric <= kElfLimit;
    f.elf_th_ok = elf.thermal <= kElfLimit;
    f.tank_ok = r.totals.tank_end >= r.totals.tank_initial;
    return f;
}

struct Evaluation
{
    CostBreakdown costs;
    Feasibility feasibility;
    SimulationResult simulation;
};

/// Simulates a year with the given sizes and prices the outcome.
inline Evaluation evaluate(const SizingVector& sizes, const ProfileSet& profiles, const ScenarioPolicy& policy,
                           const DeviceCatalog& cat, const FinanceParams& fin, const SimulationOptions& opt = {})
{
    fin.validate();
    Evaluation e;
    e.simulation = simulate_year(cat, profiles, sizes, policy, opt);
    e.costs = cost_breakdown(cat, fin, sizes, e.simulation.totals);
    e.feasibility = feasibility(e.simulation);
    return e;
}

} // namespace mgsize
