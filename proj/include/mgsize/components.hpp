#pragma once

#include "mgsize/core.hpp"

#include <algorithm>
#include <cmath>

// Stateless device models. Power and hourly energy are interchangeable
// (one-hour steps); hydrogen is carried as energy on an HHV basis.
namespace mgsize::components
{

/// PV array output in kW for irradiance in W/m².
inline double pv_power(const DeviceCatalog& cat, double irradiance, long n_pv)
{
    return cat.pv_efficiency() * static_cast<double>(n_pv) * cat.pv_module_area * irradiance / 1000.0;
}

/// Output of one turbine in kW. The section between rated speed and cut-off
/// tapers linearly from rated power to furl power.
inline double wind_power_per_unit(const DeviceCatalog& cat, double v)
{
    if (v < cat.wind_cut_in || v > cat.wind_cut_off) {
        return 0.0;
    }
    if (v < cat.wind_rated_speed) {
        const double r = (v - cat.wind_cut_in) / (cat.wind_rated_speed - cat.wind_cut_in);
        return cat.wind_rated_power * r * r * r;
    }
    if (cat.wind_cut_off == cat.wind_rated_speed) {
        return cat.wind_rated_power;
    }
    const double slope = (cat.wind_furl_power - cat.wind_rated_power) / (cat.wind_cut_off - cat.wind_rated_speed);
    return cat.wind_rated_power + slope * (v - cat.wind_rated_speed);
}

inline double wind_farm_power(const DeviceCatalog& cat, double v, long n_wt)
{
    return cat.wind_turbine.efficiency * static_cast<double>(n_wt) * wind_power_per_unit(cat, v);
}

struct FuelCellOutput
{
    double electric = 0.0;
    double heat = 0.0;
};

inline FuelCellOutput fuel_cell_outputs(const DeviceCatalog& cat, double hydrogen_in)
{
    return {hydrogen_in * cat.fuel_cell_electric_efficiency(), hydrogen_in * cat.fuel_cell_thermal_efficiency};
}

/// Hydrogen (kWh) produced from surplus electric input.
inline double electrolyzer_output(const DeviceCatalog& cat, double electric_in)
{
    return electric_in * cat.electrolyzer_efficiency();
}

inline double heater_output(const DeviceCatalog& cat, double electric_in)
{
    return electric_in * cat.heater_efficiency();
}

struct BoilerFuel
{
    double fuel_in = 0.0; // kWh of fuel
    double cost = 0.0;    // $
};

inline BoilerFuel boiler_fuel_for_heat(const DeviceCatalog& cat, double heat_needed)
{
    const double fuel = heat_needed / cat.boiler_efficiency();
    return {fuel, fuel * cat.boiler_fuel_cost};
}

/// Tank hydrogen drawn to deliver `delivered` kWh at the dispenser.
inline double station_tank_draw(const DeviceCatalog& cat, double delivered)
{
    return delivered / cat.station_efficiency();
}

inline double tank_mass(const DeviceCatalog& cat, double energy)
{
    return energy / cat.hydrogen_hhv;
}

class BoundsViolation : public Error
{
  public:
    using Error::Error;
};

struct TankState
{
    double energy = 0.0;      // kWh
    double capacity_kg = 0.0;
    double min_fraction = 0.05;

    double capacity_energy(double hhv) const { return capacity_kg * hhv; }
    double floor_energy(double hhv) const { return min_fraction * capacity_energy(hhv); }

    static TankState at_fraction(const DeviceCatalog& cat, double capacity_kg, double fraction)
    {
        return {fraction * capacity_kg * cat.hydrogen_hhv, capacity_kg, cat.tank_min_fraction};
    }

    friend bool operator==(const TankState&, const TankState&) = default;
};

/// Multiplier applied to draws when booking them against the tank.
inline double draw_factor(const DeviceCatalog& cat)
{
    return cat.tank_discharge_mode == TankDischargeMode::Multiply ? cat.storage_efficiency()
                                                                  : 1.0 / cat.storage_efficiency();
}

/// Largest draw (kWh) that keeps the tank at or above its floor.
inline double available_draw(const DeviceCatalog& cat, const TankState& tank)
{
    return std::max(0.0, tank.energy - tank.floor_energy(cat.hydrogen_hhv)) / draw_factor(cat);
}

inline double charge_headroom(const DeviceCatalog& cat, const TankState& tank)
{
    return std::max(0.0, tank.capacity_energy(cat.hydrogen_hhv) - tank.energy);
}

/// One hour of tank bookkeeping:
///   E' = E + charge - (draw_fc + draw_station) * eta_storage
/// Results within rounding of a bound are snapped onto it; anything further
/// out means the caller dispatched more than the tank allows.
inline TankState tank_step(const DeviceCatalog& cat, const TankState& state, double charge, double draw_fc,
                           double draw_station)
{
    TankState next = state;
    next.energy = state.energy + charge - (draw_fc + draw_station) * draw_factor(cat);

    const double cap = state.capacity_energy(cat.hydrogen_hhv);
    const double floor = state.floor_energy(cat.hydrogen_hhv);
    const double tol = 1e-9 * std::max(1.0, cap);
    if (!std::isfinite(next.energy) || next.energy < floor - tol || next.energy > cap + tol) {
        throw BoundsViolation("tank energy " + std::to_string(next.energy) + " kWh outside [" +
                              std::to_string(floor) + ", " + std::to_string(cap) + "]");
    }
    next.energy = std::clamp(next.energy, floor, cap);
    return next;
}

} // namespace mgsize::components
