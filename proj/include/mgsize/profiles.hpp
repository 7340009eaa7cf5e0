#pragma once

#include "mgsize/core.hpp"
#include "mgsize/text.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace mgsize
{

class UnitMismatch : public Error
{
  public:
    UnitMismatch(const std::string& source, const std::string& found, Unit expected)
        : Error(source + ":1: unit '" + found + "' in header, expected '" + std::string(unit_tag(expected)) + "'")
    {
    }
};

// Profile CSV: header `hour,value,<unit>` then 8760 rows `hour,value` with
// hour counting 1..8760. A third column repeating the unit is tolerated.
inline std::string series_to_csv(const HourlySeries& s)
{
    std::string out = "hour,value," + std::string(unit_tag(s.unit)) + "\n";
    out.reserve(out.size() + s.size() * 16);
    for (std::size_t i = 0; i < s.size(); ++i) {
        out += std::to_string(i + 1);
        out += ',';
        out += text::format_double(s.values[i]);
        out += '\n';
    }
    return out;
}

inline HourlySeries series_from_csv(std::string_view content, Unit expected, const std::string& source)
{
    const auto ls = text::lines(content);
    if (ls.empty()) {
        throw text::ParseError(source, 1, "empty file");
    }
    const auto head = text::split(ls[0], ',');
    if (head.size() != 3 || text::trim(head[0]) != "hour" || text::trim(head[1]) != "value") {
        throw text::ParseError(source, 1, "header must be 'hour,value,<unit>'");
    }
    Unit unit{};
    const std::string tag(text::trim(head[2]));
    if (!parse_unit_tag(tag, unit) || unit != expected) {
        throw UnitMismatch(source, tag, expected);
    }

    HourlySeries s{unit, {}};
    s.values.reserve(kHoursPerYear);
    for (std::size_t i = 1; i < ls.size(); ++i) {
        if (text::trim(ls[i]).empty()) {
            continue;
        }
        const auto cells = text::split(ls[i], ',');
        if (cells.size() < 2 || cells.size() > 3) {
            throw text::ParseError(source, i + 1, "expected 'hour,value'");
        }
        const auto hour = text::parse_long(cells[0]);
        if (!hour || *hour != static_cast<long>(s.values.size() + 1)) {
            throw text::ParseError(source, i + 1,
                                   "hour column must count up from 1, expected " + std::to_string(s.values.size() + 1));
        }
        const auto value = text::parse_double(cells[1]);
        if (!value) {
            throw text::ParseError(source, i + 1, "not a number: '" + std::string(text::trim(cells[1])) + "'");
        }
        if (cells.size() == 3 && text::trim(cells[2]) != text::trim(head[2])) {
            throw text::ParseError(source, i + 1, "unit column disagrees with header");
        }
        s.values.push_back(*value);
    }
    validate_series(s);
    return s;
}

inline HourlySeries load_series(const std::string& path, Unit expected)
{
    return series_from_csv(text::read_file(path), expected, path);
}

struct ProfilePaths
{
    std::string irradiance;
    std::string wind_speed;
    std::string electric_load;
    std::string thermal_load;
    std::string hydrogen_demand;
};

inline ProfileSet load_profiles(const ProfilePaths& paths)
{
    ProfileSet p;
    p.irradiance = load_series(paths.irradiance, Unit::WattPerSquareMeter);
    p.wind_speed = load_series(paths.wind_speed, Unit::MeterPerSecond);
    p.electric_load = load_series(paths.electric_load, Unit::Kilowatt);
    p.thermal_load = load_series(paths.thermal_load, Unit::Kilowatt);
    p.hydrogen_demand = load_series(paths.hydrogen_demand, Unit::KilowattHourHydrogen);
    return p;
}

/// File names written by `synth` and expected by default in a profile directory.
inline constexpr std::array<const char*, 5> kProfileFileNames = {
    "irradiance.csv", "wind_speed.csv", "electric_load.csv", "thermal_load.csv", "hydrogen_demand.csv",
};

inline ProfilePaths profile_paths_in(const std::string& dir)
{
    const std::string d = dir.empty() || dir.back() == '/' ? dir : dir + "/";
    return {d + kProfileFileNames[0], d + kProfileFileNames[1], d + kProfileFileNames[2], d + kProfileFileNames[3],
            d + kProfileFileNames[4]};
}

/// Parameters of the synthetic year. The defaults are the reference preset:
/// demand magnitudes chosen so that optimized sizes come out at utility
/// scale (thousands of PV modules, hundreds of kW of storage).
struct SynthesisSpec
{
    std::uint64_t seed = 42;

    // irradiance: half-sine days, seasonal day length and peak, daily cloudiness
    double irradiance_peak = 1000.0;       // W/m²
    double irradiance_seasonal_depth = 0.3; // winter peak = (1 - depth) * summer peak
    double day_length_swing = 3.0;          // hours around 12 h
    double cloud_min = 0.35;                // daily clearness drawn from [cloud_min, 1]
    double irradiance_noise = 0.08;         // hourly multiplicative std-dev

    // wind: Weibull marginal with AR(1) hour-to-hour persistence
    double wind_shape = 2.0;
    double wind_scale = 7.0; // m/s
    double wind_persistence = 0.9;

    // electric load: base plus morning and evening peaks
    double annual_electric = 1.3e6; // kWh
    double electric_morning_peak = 0.35;
    double electric_evening_peak = 0.6;
    double electric_noise = 0.05;

    // thermal load: winter-weighted, morning and evening peaks
    double annual_thermal = 0.9e6; // kWh
    double thermal_winter_weight = 0.6;
    double thermal_noise = 0.05;

    // FCEV refilling
    long fleet_size = 150;
    double fills_per_week = 2.0;
    double kg_per_fill = 5.0;
    double hydrogen_hhv = 39.7;
    std::array<double, 24> arrival_weights = default_arrivals();

    /// Unmanaged arrivals lean on the working day.
    static std::array<double, 24> default_arrivals()
    {
        return {0.2, 0.2, 0.2, 0.2, 0.2, 0.2, 0.5, 1.5, 1.5, 1.5, 1.0, 1.0,
                1.0, 1.0, 1.0, 1.0, 1.5, 1.5, 1.5, 1.5, 0.6, 0.3, 0.3, 0.3};
    }

    void validate() const
    {
        if (!(irradiance_peak >= 0.0 && irradiance_seasonal_depth >= 0.0 && irradiance_seasonal_depth <= 1.0 &&
              day_length_swing >= 0.0 && day_length_swing < 7.0 && cloud_min >= 0.0 && cloud_min <= 1.0 &&
              irradiance_noise >= 0.0)) {
            throw Error("invalid irradiance synthesis parameters");
        }
        if (!(wind_shape > 0.0 && wind_scale >= 0.0 && wind_persistence >= 0.0 && wind_persistence < 1.0)) {
            throw Error("invalid wind synthesis parameters");
        }
        if (!(annual_electric >= 0.0 && annual_thermal >= 0.0 && electric_noise >= 0.0 && thermal_noise >= 0.0 &&
              electric_morning_peak >= 0.0 && electric_evening_peak >= 0.0 && thermal_winter_weight >= 0.0 &&
              thermal_winter_weight < 1.0)) {
            throw Error("invalid load synthesis parameters");
        }
        if (!(fleet_size >= 0 && fills_per_week >= 0.0 && kg_per_fill >= 0.0 && hydrogen_hhv > 0.0)) {
            throw Error("invalid FCEV synthesis parameters");
        }
        double w = 0.0;
        for (double a : arrival_weights) {
            if (!(a >= 0.0)) {
                throw Error("arrival weights must be non-negative");
            }
            w += a;
        }
        if (!(w > 0.0)) {
            throw Error("arrival weights must not all be zero");
        }
    }

    /// Refills per simulated week; 52 weeks are populated.
    long fills_each_week() const { return std::lround(static_cast<double>(fleet_size) * fills_per_week); }

    double expected_annual_hydrogen() const
    {
        return 52.0 * static_cast<double>(fills_each_week()) * kg_per_fill * hydrogen_hhv;
    }
};

namespace detail
{

inline std::mt19937_64 stream(std::uint64_t seed, std::uint32_t index)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), index};
    return std::mt19937_64(seq);
}

inline double season_phase(std::size_t day, double offset)
{
    return 2.0 * std::numbers::pi * (static_cast<double>(day) - offset) / 365.0;
}

inline double bump(double h, double center, double width)
{
    const double d = h - center;
    return std::exp(-d * d / (2.0 * width * width));
}

inline void scale_to_total(std::vector<double>& v, double total)
{
    double s = 0.0;
    for (double x : v) {
        s += x;
    }
    if (s <= 0.0) {
        return;
    }
    const double k = total / s;
    for (double& x : v) {
        x *= k;
    }
}

} // namespace detail

inline HourlySeries synthesize_irradiance(const SynthesisSpec& spec)
{
    auto rng = detail::stream(spec.seed, 1);
    std::uniform_real_distribution<double> cloud(spec.cloud_min, 1.0);
    std::normal_distribution<double> noise(0.0, 1.0);

    std::vector<double> v(kHoursPerYear, 0.0);
    for (std::size_t day = 0; day < 365; ++day) {
        const double season = std::sin(detail::season_phase(day, 80.0));
        const double length = 12.0 + spec.day_length_swing * season;
        const double sunrise = 12.0 - length / 2.0;
        const double peak = spec.irradiance_peak * (1.0 - spec.irradiance_seasonal_depth * (1.0 - season) / 2.0);
        const double clearness = cloud(rng);
        for (std::size_t h = 0; h < 24; ++h) {
            const double eps = noise(rng);
            const double t = static_cast<double>(h) + 0.5;
            if (t <= sunrise || t >= sunrise + length) {
                continue;
            }
            const double shape = std::sin(std::numbers::pi * (t - sunrise) / length);
            const double factor = std::max(0.0, 1.0 + spec.irradiance_noise * eps);
            v[day * 24 + h] = std::min(1.2 * spec.irradiance_peak, peak * clearness * shape * factor);
        }
    }
    return {Unit::WattPerSquareMeter, std::move(v)};
}

inline HourlySeries synthesize_wind(const SynthesisSpec& spec)
{
    auto rng = detail::stream(spec.seed, 2);
    std::normal_distribution<double> noise(0.0, 1.0);
    const double phi = spec.wind_persistence;
    const double innovation = std::sqrt(1.0 - phi * phi);

    std::vector<double> v(kHoursPerYear);
    double z = noise(rng);
    for (std::size_t t = 0; t < kHoursPerYear; ++t) {
        if (t > 0) {
            z = phi * z + innovation * noise(rng);
        }
        double u = 0.5 * std::erfc(-z / std::numbers::sqrt2);
        u = std::clamp(u, 1e-12, 1.0 - 1e-12);
        const double speed = spec.wind_scale * std::pow(-std::log1p(-u), 1.0 / spec.wind_shape);
        v[t] = std::min(speed, 40.0);
    }
    return {Unit::MeterPerSecond, std::move(v)};
}

inline HourlySeries synthesize_electric_load(const SynthesisSpec& spec)
{
    auto rng = detail::stream(spec.seed, 3);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> v(kHoursPerYear);
    for (std::size_t t = 0; t < kHoursPerYear; ++t) {
        const std::size_t day = t / 24;
        const double h = static_cast<double>(t % 24);
        const double diurnal = 0.55 + spec.electric_morning_peak * detail::bump(h, 8.0, 1.5) +
                               spec.electric_evening_peak * detail::bump(h, 19.5, 2.0);
        const double season = 1.0 + 0.1 * std::cos(detail::season_phase(day, 15.0));
        v[t] = diurnal * season * std::max(0.5, 1.0 + spec.electric_noise * noise(rng));
    }
    detail::scale_to_total(v, spec.annual_electric);
    return {Unit::Kilowatt, std::move(v)};
}

inline HourlySeries synthesize_thermal_load(const SynthesisSpec& spec)
{
    auto rng = detail::stream(spec.seed, 4);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> v(kHoursPerYear);
    for (std::size_t t = 0; t < kHoursPerYear; ++t) {
        const std::size_t day = t / 24;
        const double h = static_cast<double>(t % 24);
        const double season = 1.0 + spec.thermal_winter_weight * std::cos(detail::season_phase(day, 15.0));
        const double diurnal = 0.6 + 0.5 * detail::bump(h, 7.0, 2.0) + 0.5 * detail::bump(h, 20.0, 2.5);
        v[t] = season * diurnal * std::max(0.5, 1.0 + spec.thermal_noise * noise(rng));
    }
    detail::scale_to_total(v, spec.annual_thermal);
    return {Unit::Kilowatt, std::move(v)};
}

/// Each week, fleet_size * fills_per_week refills of kg_per_fill arrive on a
/// uniformly drawn weekday at an hour drawn from the arrival weights.
inline HourlySeries synthesize_hydrogen_demand(const SynthesisSpec& spec)
{
    auto rng = detail::stream(spec.seed, 5);
    std::uniform_int_distribution<int> weekday(0, 6);
    std::discrete_distribution<int> hour(spec.arrival_weights.begin(), spec.arrival_weights.end());
    const double fill = spec.kg_per_fill * spec.hydrogen_hhv;

    std::vector<double> v(kHoursPerYear, 0.0);
    const long fills = spec.fills_each_week();
    for (std::size_t week = 0; week < 52; ++week) {
        for (long f = 0; f < fills; ++f) {
            const auto day = week * 7 + static_cast<std::size_t>(weekday(rng));
            const auto h = static_cast<std::size_t>(hour(rng));
            v[day * 24 + h] += fill;
        }
    }
    return {Unit::KilowattHourHydrogen, std::move(v)};
}

inline ProfileSet synthesize(const SynthesisSpec& spec)
{
    spec.validate();
    ProfileSet p;
    p.irradiance = synthesize_irradiance(spec);
    p.wind_speed = synthesize_wind(spec);
    p.electric_load = synthesize_electric_load(spec);
    p.thermal_load = synthesize_thermal_load(spec);
    p.hydrogen_demand = synthesize_hydrogen_demand(spec);
    p.validate();
    return p;
}

} // namespace mgsize
