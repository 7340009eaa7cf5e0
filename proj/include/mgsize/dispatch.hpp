#pragma once

#include "mgsize/components.hpp"
#include "mgsize/core.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace mgsize
{

enum class ScenarioMode
{
    Fixed,   // every load is firm, refills are served on arrival or lost
    Managed, // interruptible share and deferrable refills
};

struct ScenarioPolicy
{
    ScenarioMode mode = ScenarioMode::Fixed;
    double interruptible_fraction = 0.0;
    std::array<bool, 24> defer_window{};
    int max_defer_hours = 12;
    /// Tank hydrogen below this fraction of capacity is held back for the
    /// fuel cell and never allocated to refills.
    double station_reserve_fraction = 0.75;

    /// 21:00 through 05:59.
    static std::array<bool, 24> default_window()
    {
        std::array<bool, 24> w{};
        for (int h : {21, 22, 23, 0, 1, 2, 3, 4, 5}) {
            w[static_cast<std::size_t>(h)] = true;
        }
        return w;
    }

    static ScenarioPolicy fixed() { return {ScenarioMode::Fixed, 0.0, default_window(), 12, 0.75}; }
    static ScenarioPolicy managed() { return {ScenarioMode::Managed, 0.15, default_window(), 12, 0.75}; }

    bool managed_mode() const { return mode == ScenarioMode::Managed; }
    bool in_window(int hour_of_day) const { return defer_window[static_cast<std::size_t>(hour_of_day % 24)]; }

    void validate() const
    {
        if (!(interruptible_fraction >= 0.0 && interruptible_fraction <= 1.0)) {
            throw Error("interruptible_fraction must lie in [0, 1]");
        }
        if (max_defer_hours < 0) {
            throw Error("max_defer_hours must be >= 0");
        }
        if (!(station_reserve_fraction >= 0.0 && station_reserve_fraction <= 1.0)) {
            throw Error("station_reserve_fraction must lie in [0, 1]");
        }
    }

    friend bool operator==(const ScenarioPolicy&, const ScenarioPolicy&) = default;
};

/// Everything that happened on the buses in one hour. Electrical terms are
/// DC-bus kW except p_load, served_load and the shed terms, which are AC.
struct HourlyFlows
{
    double p_pv = 0.0;
    double p_wg = 0.0;
    double p_load = 0.0;
    double p_uninterruptible = 0.0;
    double served_load = 0.0;
    double p_ren_el = 0.0;     // surplus into the electrolyzer
    double p_ren_h = 0.0;      // surplus into the heater
    double p_el_tank = 0.0;    // hydrogen into the tank
    double p_tank_fc = 0.0;    // hydrogen drawn by the fuel cell
    double p_tank_sta = 0.0;   // hydrogen drawn by the station
    double p_fc_conv = 0.0;    // fuel cell electric output
    double q_load = 0.0;
    double q_fc_tl = 0.0;      // fuel cell heat, before venting
    double q_fc_vented = 0.0;
    double q_h_tl = 0.0;
    double q_b_tl = 0.0;
    double boiler_fuel = 0.0;
    double shed_interruptible = 0.0;
    double shed_uninterruptible = 0.0;
    double unserved_thermal = 0.0;
    double h_demand = 0.0;
    double h_delivered = 0.0;
    double unserved_hydrogen = 0.0;
    double deferred_hydrogen = 0.0; // carried into the next hour
    double curtailed = 0.0;
    double tank_energy_end = 0.0;

    friend bool operator==(const HourlyFlows&, const HourlyFlows&) = default;
};

/// Column names for HourlyFlows, in declaration order.
inline constexpr std::array<const char*, 26> kFlowFields = {
    "p_pv",          "p_wg",          "p_load",         "p_uninterruptible",  "served_load",
    "p_ren_el",      "p_ren_h",       "p_el_tank",      "p_tank_fc",          "p_tank_sta",
    "p_fc_conv",     "q_load",        "q_fc_tl",        "q_fc_vented",        "q_h_tl",
    "q_b_tl",        "boiler_fuel",   "shed_interruptible", "shed_uninterruptible", "unserved_thermal",
    "h_demand",      "h_delivered",   "unserved_hydrogen",  "deferred_hydrogen",    "curtailed",
    "tank_energy_end",
};

template <class Flows, class F>
void for_each_flow_field(Flows& f, F&& fn)
{
    double* fields[] = {
        &f.p_pv,          &f.p_wg,          &f.p_load,         &f.p_uninterruptible,  &f.served_load,
        &f.p_ren_el,      &f.p_ren_h,       &f.p_el_tank,      &f.p_tank_fc,          &f.p_tank_sta,
        &f.p_fc_conv,     &f.q_load,        &f.q_fc_tl,        &f.q_fc_vented,        &f.q_h_tl,
        &f.q_b_tl,        &f.boiler_fuel,   &f.shed_interruptible, &f.shed_uninterruptible, &f.unserved_thermal,
        &f.h_demand,      &f.h_delivered,   &f.unserved_hydrogen,  &f.deferred_hydrogen,    &f.curtailed,
        &f.tank_energy_end,
    };
    for (std::size_t i = 0; i < kFlowFields.size(); ++i) {
        fn(kFlowFields[i], *fields[i]);
    }
}

inline std::vector<double> flow_values(const HourlyFlows& f)
{
    std::vector<double> out;
    out.reserve(kFlowFields.size());
    HourlyFlows copy = f;
    for_each_flow_field(copy, [&](const char*, double& v) { out.push_back(v); });
    return out;
}

/// Refill demand waiting at the station, oldest first. Each parcel keeps the
/// number of hours it has already been carried.
class RefillQueue
{
  public:
    struct Parcel
    {
        double amount = 0.0;
        int age = 0;

        friend bool operator==(const Parcel&, const Parcel&) = default;
    };

    struct Settlement
    {
        double unserved = 0.0;
        double deferred = 0.0;
    };

    void arrive(double amount)
    {
        if (amount > 0.0) {
            parcels_.push_back({amount, 0});
        }
    }

    double pending() const
    {
        double s = 0.0;
        for (const auto& p : parcels_) {
            s += p.amount;
        }
        return s;
    }

    /// Amount that can no longer be deferred this hour.
    double overdue(int max_age) const
    {
        double s = 0.0;
        for (const auto& p : parcels_) {
            if (p.age >= max_age) {
                s += p.amount;
            }
        }
        return s;
    }

    /// Consumes delivered hydrogen from the oldest parcels first.
    void deliver(double amount)
    {
        std::size_t i = 0;
        for (; i < parcels_.size() && amount > 0.0; ++i) {
            if (parcels_[i].amount > amount) {
                parcels_[i].amount -= amount;
                amount = 0.0;
                break;
            }
            amount -= parcels_[i].amount;
        }
        parcels_.erase(parcels_.begin(), parcels_.begin() + static_cast<std::ptrdiff_t>(i));
    }

    /// Ends the hour: parcels younger than max_age are carried (if carrying
    /// is allowed), everything else is written off as unserved.
    Settlement close_hour(bool carry, int max_age)
    {
        Settlement s;
        std::size_t kept = 0;
        for (std::size_t i = 0; i < parcels_.size(); ++i) {
            Parcel p = parcels_[i];
            if (carry && p.age < max_age) {
                s.deferred += p.amount;
                ++p.age;
                parcels_[kept++] = p;
            } else {
                s.unserved += p.amount;
            }
        }
        parcels_.resize(kept);
        return s;
    }

    const std::vector<Parcel>& parcels() const { return parcels_; }
    bool empty() const { return parcels_.empty(); }

  private:
    std::vector<Parcel> parcels_;
};

struct HourInputs
{
    double irradiance = 0.0;
    double wind_speed = 0.0;
    double p_load = 0.0;
    double q_load = 0.0;
    double h_demand = 0.0;
};

// The stages below are shared by the direct kernel and the agent protocol,
// which must agree bit for bit.
namespace stage
{

struct Generation
{
    double p_pv = 0.0;
    double p_wg = 0.0;
};

inline Generation generation(const DeviceCatalog& cat, const SizingVector& sizes, double irradiance,
                             double wind_speed)
{
    return {components::pv_power(cat, irradiance, sizes.n_pv),
            components::wind_farm_power(cat, wind_speed, sizes.n_wt)};
}

struct LoadSplit
{
    double interruptible = 0.0;
    double uninterruptible = 0.0;
};

inline LoadSplit split_load(const ScenarioPolicy& policy, double p_load)
{
    const double frac = policy.managed_mode() ? policy.interruptible_fraction : 0.0;
    const double interruptible = frac * p_load;
    return {interruptible, p_load - interruptible};
}

/// How renewables meet AC load through the converter.
struct BusPlan
{
    double ren_served_ac = 0.0;
    double surplus_dc = 0.0;
    double ac_deficit = 0.0;
    double converter_room = 0.0; // AC headroom left in the converter
};

inline BusPlan plan_bus(const DeviceCatalog& cat, const SizingVector& sizes, double renewable_dc, double p_load)
{
    const double eta = cat.converter_efficiency();
    BusPlan plan;
    const double ren_ac = renewable_dc * eta;
    const double ac_limit = std::min(p_load, sizes.p_converter);
    if (ren_ac <= ac_limit) {
        plan.ren_served_ac = ren_ac;
    } else {
        plan.ren_served_ac = ac_limit;
        plan.surplus_dc = std::max(0.0, renewable_dc - ac_limit / eta);
    }
    plan.ac_deficit = p_load - plan.ren_served_ac;
    plan.converter_room = sizes.p_converter - plan.ren_served_ac;
    return plan;
}

struct FuelCellAction
{
    double p_tank_fc = 0.0;
    double p_fc_conv = 0.0;
    double served_ac = 0.0;
    double q_fc = 0.0;
};

/// Fuel cell covers as much of `ac_needed` as its rating and the tank allow.
inline FuelCellAction supply_deficit(const DeviceCatalog& cat, const SizingVector& sizes,
                                     const components::TankState& tank, double ac_needed)
{
    const double eta_el = cat.fuel_cell_electric_efficiency();
    const double dc_needed = ac_needed / cat.converter_efficiency();
    FuelCellAction a;
    a.p_tank_fc = std::min({dc_needed / eta_el, sizes.p_fuelcell / eta_el, components::available_draw(cat, tank)});
    const auto out = components::fuel_cell_outputs(cat, a.p_tank_fc);
    a.p_fc_conv = out.electric;
    a.q_fc = out.heat;
    a.served_ac = a.p_fc_conv * cat.converter_efficiency();
    return a;
}

struct Shedding
{
    double interruptible = 0.0;
    double uninterruptible = 0.0;
};

inline Shedding shed_load(const LoadSplit& split, double deficit)
{
    deficit = std::max(0.0, deficit);
    const double i = std::min(deficit, split.interruptible);
    return {i, deficit - i};
}

struct StorageAction
{
    double p_ren_el = 0.0;
    double p_el_tank = 0.0;
    double p_ren_h = 0.0;
    double q_h_tl = 0.0;
    double curtailed = 0.0;
};

/// Surplus goes to the electrolyzer first, then to the heater up to the
/// open heat demand; the rest is curtailed.
inline StorageAction store_surplus(const DeviceCatalog& cat, const SizingVector& sizes,
                                   const components::TankState& tank, double surplus_dc, double heat_gap)
{
    StorageAction a;
    a.p_ren_el = std::min({surplus_dc, sizes.p_electrolyzer,
                           components::charge_headroom(cat, tank) / cat.electrolyzer_efficiency()});
    a.p_el_tank = components::electrolyzer_output(cat, a.p_ren_el);
    const double rest = surplus_dc - a.p_ren_el;
    a.p_ren_h = std::min({rest, sizes.p_heater, std::max(0.0, heat_gap) / cat.heater_efficiency()});
    a.q_h_tl = components::heater_output(cat, a.p_ren_h);
    a.curtailed = rest - a.p_ren_h;
    return a;
}

struct BoilerAction
{
    double q_b_tl = 0.0;
    double fuel = 0.0;
    double unserved = 0.0;
};

inline BoilerAction thermal_backup(const DeviceCatalog& cat, const SizingVector& sizes, double heat_gap)
{
    heat_gap = std::max(0.0, heat_gap);
    BoilerAction a;
    a.q_b_tl = std::min(heat_gap, sizes.p_boiler);
    a.fuel = components::boiler_fuel_for_heat(cat, a.q_b_tl).fuel_in;
    a.unserved = heat_gap - a.q_b_tl;
    return a;
}

/// Whether the control side asks the station to push refills out of this
/// hour: a managed scenario, outside the off-peak window, in an hour that
/// needed the fuel cell or shed load.
inline bool defer_refills(const ScenarioPolicy& policy, int hour_of_day, const FuelCellAction& fc,
                          const Shedding& shed)
{
    return policy.managed_mode() && !policy.in_window(hour_of_day) &&
           (fc.p_tank_fc > 0.0 || shed.interruptible > 0.0 || shed.uninterruptible > 0.0);
}

struct StationAction
{
    double p_tank_sta = 0.0;
    double delivered = 0.0;
};

/// Draw for `request` kWh at the dispenser, capped by the compressor and by
/// what the tank holds above the fuel-cell reserve after this hour's other
/// flows.
inline StationAction station_draw(const DeviceCatalog& cat, const ScenarioPolicy& policy,
                                  const components::TankState& tank_mid, double request)
{
    const double eta = cat.station_efficiency();
    const double reserve = std::max(tank_mid.floor_energy(cat.hydrogen_hhv),
                                    policy.station_reserve_fraction * tank_mid.capacity_energy(cat.hydrogen_hhv));
    const double stock = std::max(0.0, tank_mid.energy - reserve) / components::draw_factor(cat);
    const double limit = std::min(cat.station_max_delivery / eta, stock);
    StationAction a;
    const double wanted = components::station_tank_draw(cat, request);
    if (wanted <= limit) {
        a.p_tank_sta = wanted;
        a.delivered = request;
    } else {
        a.p_tank_sta = limit;
        a.delivered = limit * eta;
    }
    return a;
}

} // namespace stage

/// Mutable state carried from hour to hour.
struct DispatchState
{
    components::TankState tank;
    RefillQueue queue;
};

/// One hour of the energy-management strategy.
inline HourlyFlows dispatch_hour(const DeviceCatalog& cat, const SizingVector& sizes, const ScenarioPolicy& policy,
                                 const HourInputs& in, int hour_of_day, DispatchState& state)
{
    HourlyFlows f;
    const auto gen = stage::generation(cat, sizes, in.irradiance, in.wind_speed);
    f.p_pv = gen.p_pv;
    f.p_wg = gen.p_wg;

    const auto split = stage::split_load(policy, in.p_load);
    f.p_load = in.p_load;
    f.p_uninterruptible = split.uninterruptible;

    const auto bus = stage::plan_bus(cat, sizes, gen.p_pv + gen.p_wg, in.p_load);

    stage::FuelCellAction fc;
    if (bus.ac_deficit > 0.0 && bus.converter_room > 0.0) {
        fc = stage::supply_deficit(cat, sizes, state.tank, std::min(bus.ac_deficit, bus.converter_room));
    }
    f.p_tank_fc = fc.p_tank_fc;
    f.p_fc_conv = fc.p_fc_conv;
    f.served_load = bus.ren_served_ac + fc.served_ac;

    const auto shed = stage::shed_load(split, in.p_load - f.served_load);
    f.shed_interruptible = shed.interruptible;
    f.shed_uninterruptible = shed.uninterruptible;

    f.q_load = in.q_load;
    f.q_fc_tl = fc.q_fc;
    const double fc_heat_used = std::min(fc.q_fc, in.q_load);
    f.q_fc_vented = fc.q_fc - fc_heat_used;
    const double heat_gap = in.q_load - fc_heat_used;

    stage::StorageAction st;
    if (bus.surplus_dc > 0.0) {
        st = stage::store_surplus(cat, sizes, state.tank, bus.surplus_dc, heat_gap);
    }
    f.p_ren_el = st.p_ren_el;
    f.p_el_tank = st.p_el_tank;
    f.p_ren_h = st.p_ren_h;
    f.q_h_tl = st.q_h_tl;
    f.curtailed = st.curtailed;

    const auto boiler = stage::thermal_backup(cat, sizes, heat_gap - st.q_h_tl);
    f.q_b_tl = boiler.q_b_tl;
    f.boiler_fuel = boiler.fuel;
    f.unserved_thermal = boiler.unserved;

    f.h_demand = in.h_demand;
    state.queue.arrive(in.h_demand);
    const double request = stage::defer_refills(policy, hour_of_day, fc, shed)
                               ? state.queue.overdue(policy.max_defer_hours)
                               : state.queue.pending();
    const auto mid = components::tank_step(cat, state.tank, st.p_el_tank, fc.p_tank_fc, 0.0);
    const auto sta = stage::station_draw(cat, policy, mid, request);
    state.queue.deliver(sta.delivered);
    const auto settle = state.queue.close_hour(policy.managed_mode(), policy.max_defer_hours);
    f.p_tank_sta = sta.p_tank_sta;
    f.h_delivered = sta.delivered;
    f.unserved_hydrogen = settle.unserved;
    f.deferred_hydrogen = settle.deferred;

    state.tank = components::tank_step(cat, state.tank, st.p_el_tank, fc.p_tank_fc, sta.p_tank_sta);
    f.tank_energy_end = state.tank.energy;
    return f;
}

/// Annual sums over the ledger.
struct SimulationTotals
{
    std::size_t hours = 0;
    double electric_load = 0.0;
    double served_load = 0.0;
    double shed_interruptible = 0.0;
    double shed_uninterruptible = 0.0;
    double thermal_load = 0.0;
    double unserved_thermal = 0.0;
    double hydrogen_demand = 0.0;
    double hydrogen_delivered = 0.0;
    double unserved_hydrogen = 0.0;
    double pending_hydrogen_end = 0.0;
    double boiler_heat = 0.0;
    double boiler_fuel = 0.0;
    double curtailed = 0.0;
    double elf_el_sum = 0.0; // sum of hourly unserved/demand ratios
    double elf_th_sum = 0.0;
    double tank_initial = 0.0;
    double tank_end = 0.0;
    double tank_capacity = 0.0; // kWh

    void add(const HourlyFlows& f)
    {
        ++hours;
        electric_load += f.p_load;
        served_load += f.served_load;
        shed_interruptible += f.shed_interruptible;
        shed_uninterruptible += f.shed_uninterruptible;
        thermal_load += f.q_load;
        unserved_thermal += f.unserved_thermal;
        hydrogen_demand += f.h_demand;
        hydrogen_delivered += f.h_delivered;
        unserved_hydrogen += f.unserved_hydrogen;
        pending_hydrogen_end = f.deferred_hydrogen;
        boiler_heat += f.q_b_tl;
        boiler_fuel += f.boiler_fuel;
        curtailed += f.curtailed;
        if (f.p_uninterruptible > 0.0) {
            elf_el_sum += f.shed_uninterruptible / f.p_uninterruptible;
        }
        if (f.q_load > 0.0) {
            elf_th_sum += f.unserved_thermal / f.q_load;
        }
        tank_end = f.tank_energy_end;
    }

    friend bool operator==(const SimulationTotals&, const SimulationTotals&) = default;
};

struct SimulationResult
{
    std::vector<HourlyFlows> ledger; // empty when the run discarded it
    SimulationTotals totals;

    friend bool operator==(const SimulationResult&, const SimulationResult&) = default;
};

struct SimulationOptions
{
    double initial_tank_fraction = 0.5;
    bool keep_ledger = true;
};

inline void check_sizes(const SizingVector& sizes)
{
    if (!sizes.valid()) {
        throw Error("sizing vector has negative or non-finite entries");
    }
}

inline void check_initial_fraction(const DeviceCatalog& cat, double fraction)
{
    if (!(fraction >= cat.tank_min_fraction && fraction <= 1.0)) {
        throw Error("initial tank fraction must lie in [tank_min_fraction, 1]");
    }
}

/// Profiles of equal, non-zero length with finite non-negative samples.
inline std::size_t check_span_profiles(const ProfileSet& p)
{
    const std::size_t n = p.irradiance.size();
    for (const HourlySeries* s :
         {&p.irradiance, &p.wind_speed, &p.electric_load, &p.thermal_load, &p.hydrogen_demand}) {
        if (s->size() != n || n == 0) {
            throw SeriesError(SeriesError::Kind::WrongLength, s->size());
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(s->values[i])) {
                throw SeriesError(SeriesError::Kind::NonFiniteValue, i);
            }
            if (s->values[i] < 0.0) {
                throw SeriesError(SeriesError::Kind::NegativeValue, i);
            }
        }
    }
    return n;
}

inline HourInputs inputs_at(const ProfileSet& p, std::size_t t)
{
    return {p.irradiance[t], p.wind_speed[t], p.electric_load[t], p.thermal_load[t], p.hydrogen_demand[t]};
}

/// Runs the strategy over profiles of any common length (tests use short
/// horizons). `simulate_year` is the 8760-hour entry point.
inline SimulationResult simulate(const DeviceCatalog& cat, const ProfileSet& profiles, const SizingVector& sizes,
                                 const ScenarioPolicy& policy, const SimulationOptions& opt = {})
{
    const std::size_t n = check_span_profiles(profiles);
    check_sizes(sizes);
    check_initial_fraction(cat, opt.initial_tank_fraction);
    policy.validate();

    DispatchState state;
    state.tank = components::TankState::at_fraction(cat, sizes.m_tank, opt.initial_tank_fraction);

    SimulationResult r;
    r.totals.tank_initial = state.tank.energy;
    r.totals.tank_end = state.tank.energy;
    r.totals.tank_capacity = state.tank.capacity_energy(cat.hydrogen_hhv);
    if (opt.keep_ledger) {
        r.ledger.reserve(n);
    }
    for (std::size_t t = 0; t < n; ++t) {
        const auto f = dispatch_hour(cat, sizes, policy, inputs_at(profiles, t), static_cast<int>(t % 24), state);
        r.totals.add(f);
        if (opt.keep_ledger) {
            r.ledger.push_back(f);
        }
    }
    return r;
}

inline SimulationResult simulate_year(const DeviceCatalog& cat, const ProfileSet& profiles, const SizingVector& sizes,
                                      const ScenarioPolicy& policy, const SimulationOptions& opt = {})
{
    profiles.validate();
    return simulate(cat, profiles, sizes, policy, opt);
}

/// Per-hour balance residuals, used by property tests and self-checks.
struct BalanceResiduals
{
    double electric_dc = 0.0;
    double electric_ac = 0.0;
    double thermal = 0.0;
    double hydrogen_queue = 0.0;
    double hydrogen_tank = 0.0;
    double station = 0.0;
};

inline BalanceResiduals balance_residuals(const DeviceCatalog& cat, const HourlyFlows& f, double tank_before,
                                          double pending_before)
{
    BalanceResiduals r;
    const double eta_conv = cat.converter_efficiency();
    r.electric_dc = (f.p_pv + f.p_wg + f.p_fc_conv) - (f.served_load / eta_conv + f.p_ren_el + f.p_ren_h + f.curtailed);
    r.electric_ac = f.p_load - (f.served_load + f.shed_interruptible + f.shed_uninterruptible);
    r.thermal = f.q_load - ((f.q_fc_tl - f.q_fc_vented) + f.q_h_tl + f.q_b_tl + f.unserved_thermal);
    r.hydrogen_queue = (f.h_demand + pending_before) - (f.h_delivered + f.unserved_hydrogen + f.deferred_hydrogen);
    r.hydrogen_tank = (f.tank_energy_end - tank_before) -
                      (f.p_el_tank - (f.p_tank_fc + f.p_tank_sta) * components::draw_factor(cat));
    r.station = f.p_tank_sta * cat.station_efficiency() - f.h_delivered;
    return r;
}

} // namespace mgsize
