#pragma once

#include "mgsize/dispatch.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace mgsize::fixtures
{

/// Twenty-four hours that walk through every branch of the cascade: night
/// deficits served by the fuel cell, a converter-limited evening, midday
/// surplus split between electrolyzer, heater and curtailment, boiler
/// backup, shedding once the fuel cell runs out, and refills in and out of
/// the off-peak window.
inline ProfileSet toy_profiles()
{
    auto series = [](Unit u, std::vector<double> v) { return HourlySeries{u, std::move(v)}; };
    ProfileSet p;
    p.irradiance = series(Unit::WattPerSquareMeter,
                          {0, 0, 0, 0, 0, 0, 50, 180, 350, 560, 760, 900, 1000, 950, 820, 640, 420, 200, 60, 0, 0, 0, 0, 0});
    p.wind_speed = series(Unit::MeterPerSecond,
                          {6.75, 8, 2.0, 11, 13, 26, 4, 5.5, 7, 9, 12, 15, 18, 24, 25, 22, 9.5, 3, 2.5, 1, 7.2, 10, 6.75, 5});
    p.electric_load = series(Unit::Kilowatt,
                             {32, 30, 28, 28, 30, 36, 48, 62, 70, 66, 60, 58, 56, 57, 59, 63, 72, 85, 92, 88, 76, 60, 45, 36});
    p.thermal_load = series(Unit::Kilowatt,
                            {22, 20, 20, 21, 24, 30, 38, 40, 34, 26, 18, 12, 8, 7, 8, 12, 20, 28, 36, 40, 38, 32, 26, 24});
    p.hydrogen_demand = series(Unit::KilowattHourHydrogen,
                               {0, 198.5, 0, 0, 19.6, 0, 0, 198.5, 198.5, 0, 0, 0, 99.25, 0, 0, 0, 0, 198.5, 397, 198.5, 0, 0, 198.5, 0});
    return p;
}

inline SizingVector toy_sizes()
{
    return {300, 40, 25.0, 30.0, 20.0, 70.0, 15.0, 10.0};
}

inline SimulationOptions toy_options()
{
    return {0.9, true};
}

/// Random profiles of `hours` length, scaled so that both surplus and
/// deficit hours are common for sizes drawn by `random_sizes`.
inline ProfileSet random_profiles(std::mt19937_64& rng, std::size_t hours)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ProfileSet p;
    p.irradiance.unit = Unit::WattPerSquareMeter;
    p.wind_speed.unit = Unit::MeterPerSecond;
    p.electric_load.unit = Unit::Kilowatt;
    p.thermal_load.unit = Unit::Kilowatt;
    p.hydrogen_demand.unit = Unit::KilowattHourHydrogen;
    const double load_scale = 20.0 + 200.0 * u(rng);
    const double heat_scale = 10.0 + 150.0 * u(rng);
    const double fill = 40.0 + 300.0 * u(rng);
    for (std::size_t t = 0; t < hours; ++t) {
        const double h = static_cast<double>(t % 24);
        const double sun = std::max(0.0, std::sin((h - 6.0) / 12.0 * 3.141592653589793));
        p.irradiance.values.push_back(u(rng) < 0.1 ? 0.0 : 1100.0 * sun * u(rng));
        p.wind_speed.values.push_back(u(rng) < 0.05 ? 0.0 : 28.0 * u(rng) * u(rng));
        p.electric_load.values.push_back(u(rng) < 0.02 ? 0.0 : load_scale * (0.3 + u(rng)));
        p.thermal_load.values.push_back(u(rng) < 0.05 ? 0.0 : heat_scale * (0.2 + u(rng)));
        p.hydrogen_demand.values.push_back(u(rng) < 0.85 ? 0.0 : fill * u(rng));
    }
    return p;
}

inline SizingVector random_sizes(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto maybe_zero = [&](double v) { return u(rng) < 0.08 ? 0.0 : v; };
    SizingVector s;
    s.n_pv = static_cast<long>(maybe_zero(std::floor(2000.0 * u(rng))));
    s.n_wt = static_cast<long>(maybe_zero(std::floor(400.0 * u(rng))));
    s.p_electrolyzer = maybe_zero(400.0 * u(rng));
    s.m_tank = maybe_zero(1500.0 * u(rng));
    s.p_fuelcell = maybe_zero(300.0 * u(rng));
    s.p_converter = maybe_zero(400.0 * u(rng));
    s.p_boiler = maybe_zero(250.0 * u(rng));
    s.p_heater = maybe_zero(150.0 * u(rng));
    return s;
}

inline ScenarioPolicy random_policy(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return u(rng) < 0.5 ? ScenarioPolicy::fixed() : ScenarioPolicy::managed();
}

} // namespace mgsize::fixtures
