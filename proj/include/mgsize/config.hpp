#pragma once

#include "mgsize/economics.hpp"
#include "mgsize/optimizer.hpp"
#include "mgsize/profiles.hpp"
#include "mgsize/text.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Run configuration in a plain INI dialect:
//
//   # comment            (also ';', whole lines only)
//   [section]
//   key = value
//
// Every key is optional; omitted keys keep their default. Unknown sections,
// unknown keys, repeated keys and malformed values are errors carrying the
// file name and line.
namespace mgsize
{

class ConfigError : public text::ParseError
{
  public:
    using ParseError::ParseError;
};

enum class ProfileSource
{
    Synthetic,
    Files,
};

struct RunConfig
{
    DeviceCatalog catalog;
    FinanceParams finance;
    ScenarioPolicy policy = ScenarioPolicy::fixed();
    PsoConfig pso;
    double initial_tank_fraction = 0.5;
    ProfileSource profile_source = ProfileSource::Synthetic;
    ProfilePaths profile_paths = profile_paths_in("profiles");
    SynthesisSpec synthesis;
    std::string output_dir = "out";

    void validate() const
    {
        catalog.validate();
        finance.validate();
        policy.validate();
        pso.validate();
        synthesis.validate();
        if (!(initial_tank_fraction >= catalog.tank_min_fraction && initial_tank_fraction <= 1.0)) {
            throw Error("initial_tank_fraction must lie in [tank_min_fraction, 1]");
        }
    }
};

namespace config_detail
{

struct Key
{
    std::string section;
    std::string name;
    std::function<std::string()> get;
    std::function<bool(std::string_view)> set; // false on a malformed value
};

inline Key real(std::string section, std::string name, double& v)
{
    return {std::move(section), std::move(name), [&v] { return text::format_double(v); },
            [&v](std::string_view s) {
                const auto d = text::parse_double(s);
                if (!d || !std::isfinite(*d)) {
                    return false;
                }
                v = *d;
                return true;
            }};
}

template <class Int>
Key integer(std::string section, std::string name, Int& v)
{
    return {std::move(section), std::move(name), [&v] { return std::to_string(v); },
            [&v](std::string_view s) {
                s = text::trim(s);
                Int out{};
                const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
                if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
                    return false;
                }
                v = out;
                return true;
            }};
}

template <class Enum, std::size_t N>
Key choice(std::string section, std::string name, Enum& v, const std::array<std::pair<std::string_view, Enum>, N>& options)
{
    return {std::move(section), std::move(name),
            [&v, options] {
                for (const auto& [label, e] : options) {
                    if (e == v) {
                        return std::string(label);
                    }
                }
                return std::string();
            },
            [&v, options](std::string_view s) {
                s = text::trim(s);
                for (const auto& [label, e] : options) {
                    if (label == s) {
                        v = e;
                        return true;
                    }
                }
                return false;
            }};
}

inline Key str(std::string section, std::string name, std::string& v)
{
    return {std::move(section), std::move(name), [&v] { return v; },
            [&v](std::string_view s) {
                s = text::trim(s);
                if (s.empty()) {
                    return false;
                }
                v = std::string(s);
                return true;
            }};
}

inline Key hour_set(std::string section, std::string name, std::array<bool, 24>& w)
{
    return {std::move(section), std::move(name),
            [&w] {
                std::string out;
                for (int h = 0; h < 24; ++h) {
                    if (w[static_cast<std::size_t>(h)]) {
                        out += (out.empty() ? "" : ",") + std::to_string(h);
                    }
                }
                return out.empty() ? std::string("none") : out;
            },
            [&w](std::string_view s) {
                std::array<bool, 24> out{};
                if (text::trim(s) != "none") {
                    for (auto cell : text::split(s, ',')) {
                        const auto h = text::parse_long(cell);
                        if (!h || *h < 0 || *h > 23) {
                            return false;
                        }
                        out[static_cast<std::size_t>(*h)] = true;
                    }
                }
                w = out;
                return true;
            }};
}

inline Key real_list(std::string section, std::string name, std::array<double, 24>& a)
{
    return {std::move(section), std::move(name),
            [&a] {
                std::string out;
                for (std::size_t i = 0; i < a.size(); ++i) {
                    out += (i ? "," : "") + text::format_double(a[i]);
                }
                return out;
            },
            [&a](std::string_view s) {
                const auto cells = text::split(s, ',');
                if (cells.size() != a.size()) {
                    return false;
                }
                std::array<double, 24> out{};
                for (std::size_t i = 0; i < a.size(); ++i) {
                    const auto d = text::parse_double(cells[i]);
                    if (!d || !std::isfinite(*d)) {
                        return false;
                    }
                    out[i] = *d;
                }
                a = out;
                return true;
            }};
}

/// All keys, in the order `to_ini` writes them.
inline std::vector<Key> keys(RunConfig& c)
{
    std::vector<Key> k;
    auto& cat = c.catalog;
    const std::pair<const char*, DeviceEconomics*> devices[] = {
        {"pv", &cat.pv},
        {"wind_turbine", &cat.wind_turbine},
        {"fuel_cell", &cat.fuel_cell},
        {"electrolyzer", &cat.electrolyzer},
        {"hydrogen_tank", &cat.hydrogen_tank},
        {"heater", &cat.heater},
        {"boiler", &cat.boiler},
        {"converter", &cat.converter},
        {"station_compressor", &cat.station_compressor},
    };
    for (const auto& [name, d] : devices) {
        const std::string s = std::string("device.") + name;
        k.push_back(real(s, "capital_cost", d->capital_cost));
        k.push_back(real(s, "replacement_cost", d->replacement_cost));
        k.push_back(real(s, "maintenance_cost", d->maintenance_cost));
        k.push_back(real(s, "lifetime", d->lifetime));
        k.push_back(real(s, "efficiency", d->efficiency));
    }

    k.push_back(real("catalog", "pv_module_area", cat.pv_module_area));
    k.push_back(real("catalog", "wind_cut_in", cat.wind_cut_in));
    k.push_back(real("catalog", "wind_rated_speed", cat.wind_rated_speed));
    k.push_back(real("catalog", "wind_cut_off", cat.wind_cut_off));
    k.push_back(real("catalog", "wind_rated_power", cat.wind_rated_power));
    k.push_back(real("catalog", "wind_furl_power", cat.wind_furl_power));
    k.push_back(real("catalog", "fuel_cell_thermal_efficiency", cat.fuel_cell_thermal_efficiency));
    k.push_back(real("catalog", "hydrogen_hhv", cat.hydrogen_hhv));
    k.push_back(real("catalog", "tank_min_fraction", cat.tank_min_fraction));
    k.push_back(choice("catalog", "tank_discharge_efficiency_mode", cat.tank_discharge_mode,
                       std::array<std::pair<std::string_view, TankDischargeMode>, 2>{
                           {{"multiply", TankDischargeMode::Multiply}, {"divide", TankDischargeMode::Divide}}}));
    k.push_back(real("catalog", "boiler_fuel_cost", cat.boiler_fuel_cost));
    k.push_back(real("catalog", "station_max_delivery", cat.station_max_delivery));

    auto& fin = c.finance;
    k.push_back(real("finance", "interest_rate", fin.interest_rate));
    k.push_back(real("finance", "project_years", fin.project_years));
    k.push_back(real("finance", "penalty_uninterruptible", fin.penalty_uninterruptible));
    k.push_back(real("finance", "penalty_interruptible", fin.penalty_interruptible));
    k.push_back(real("finance", "penalty_thermal", fin.penalty_thermal));
    k.push_back(real("finance", "penalty_hydrogen", fin.penalty_hydrogen));
    for (auto& e : fin.emissions) {
        std::string p(e.pollutant);
        for (auto& ch : p) {
            ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        }
        k.push_back(real("finance", p + "_externality_cost", e.externality_cost));
        k.push_back(real("finance", p + "_boiler_factor", e.boiler_factor));
    }
    k.push_back(choice("finance", "emission_basis", fin.emission_basis,
                       std::array<std::pair<std::string_view, EmissionBasis>, 2>{
                           {{"heat_output", EmissionBasis::HeatOutput}, {"fuel_input", EmissionBasis::FuelInput}}}));

    auto& pol = c.policy;
    k.push_back(choice("policy", "mode", pol.mode,
                       std::array<std::pair<std::string_view, ScenarioMode>, 2>{
                           {{"fixed", ScenarioMode::Fixed}, {"managed", ScenarioMode::Managed}}}));
    k.push_back(real("policy", "interruptible_fraction", pol.interruptible_fraction));
    k.push_back(hour_set("policy", "defer_window", pol.defer_window));
    k.push_back(integer("policy", "max_defer_hours", pol.max_defer_hours));
    k.push_back(real("policy", "station_reserve_fraction", pol.station_reserve_fraction));
    k.push_back(real("policy", "initial_tank_fraction", c.initial_tank_fraction));

    auto& ps = c.pso;
    k.push_back(integer("pso", "swarm_size", ps.settings.swarm_size));
    k.push_back(integer("pso", "iterations", ps.settings.iterations));
    k.push_back(real("pso", "inertia", ps.settings.inertia));
    k.push_back(real("pso", "cognitive", ps.settings.cognitive));
    k.push_back(real("pso", "social", ps.settings.social));
    k.push_back(integer("pso", "seed", ps.settings.seed));
    k.push_back(real("pso", "penalty_weight", ps.penalty_weight));
    k.push_back(integer("pso", "max_n_pv", ps.ceiling.n_pv));
    k.push_back(integer("pso", "max_n_wt", ps.ceiling.n_wt));
    k.push_back(real("pso", "max_p_electrolyzer", ps.ceiling.p_electrolyzer));
    k.push_back(real("pso", "max_m_tank", ps.ceiling.m_tank));
    k.push_back(real("pso", "max_p_fuelcell", ps.ceiling.p_fuelcell));
    k.push_back(real("pso", "max_p_converter", ps.ceiling.p_converter));
    k.push_back(real("pso", "max_p_boiler", ps.ceiling.p_boiler));
    k.push_back(real("pso", "max_p_heater", ps.ceiling.p_heater));

    k.push_back(choice("profiles", "source", c.profile_source,
                       std::array<std::pair<std::string_view, ProfileSource>, 2>{
                           {{"synthetic", ProfileSource::Synthetic}, {"files", ProfileSource::Files}}}));
    k.push_back(str("profiles", "irradiance", c.profile_paths.irradiance));
    k.push_back(str("profiles", "wind_speed", c.profile_paths.wind_speed));
    k.push_back(str("profiles", "electric_load", c.profile_paths.electric_load));
    k.push_back(str("profiles", "thermal_load", c.profile_paths.thermal_load));
    k.push_back(str("profiles", "hydrogen_demand", c.profile_paths.hydrogen_demand));

    auto& sy = c.synthesis;
    k.push_back(integer("synthesis", "seed", sy.seed));
    k.push_back(real("synthesis", "irradiance_peak", sy.irradiance_peak));
    k.push_back(real("synthesis", "irradiance_seasonal_depth", sy.irradiance_seasonal_depth));
    k.push_back(real("synthesis", "day_length_swing", sy.day_length_swing));
    k.push_back(real("synthesis", "cloud_min", sy.cloud_min));
    k.push_back(real("synthesis", "irradiance_noise", sy.irradiance_noise));
    k.push_back(real("synthesis", "wind_shape", sy.wind_shape));
    k.push_back(real("synthesis", "wind_scale", sy.wind_scale));
    k.push_back(real("synthesis", "wind_persistence", sy.wind_persistence));
    k.push_back(real("synthesis", "annual_electric", sy.annual_electric));
    k.push_back(real("synthesis", "electric_morning_peak", sy.electric_morning_peak));
    k.push_back(real("synthesis", "electric_evening_peak", sy.electric_evening_peak));
    k.push_back(real("synthesis", "electric_noise", sy.electric_noise));
    k.push_back(real("synthesis", "annual_thermal", sy.annual_thermal));
    k.push_back(real("synthesis", "thermal_winter_weight", sy.thermal_winter_weight));
    k.push_back(real("synthesis", "thermal_noise", sy.thermal_noise));
    k.push_back(integer("synthesis", "fleet_size", sy.fleet_size));
    k.push_back(real("synthesis", "fills_per_week", sy.fills_per_week));
    k.push_back(real("synthesis", "kg_per_fill", sy.kg_per_fill));
    k.push_back(real("synthesis", "hydrogen_hhv", sy.hydrogen_hhv));
    k.push_back(real_list("synthesis", "arrival_weights", sy.arrival_weights));

    k.push_back(str("output", "dir", c.output_dir));
    return k;
}

} // namespace config_detail

/// Every key with its current value, grouped by section.
inline std::string to_ini(const RunConfig& config)
{
    RunConfig copy = config;
    std::string out;
    std::string section;
    for (const auto& key : config_detail::keys(copy)) {
        if (key.section != section) {
            out += (out.empty() ? "[" : "\n[") + key.section + "]\n";
            section = key.section;
        }
        out += key.name + " = " + key.get() + "\n";
    }
    return out;
}

/// Applies `content` on top of `base`. Relative profile paths are resolved
/// against `base_dir` when it is non-empty.
inline RunConfig parse_ini(std::string_view content, const std::string& source = "config",
                           RunConfig base = {}, const std::string& base_dir = "")
{
    RunConfig c = std::move(base);
    auto keys = config_detail::keys(c);
    std::map<std::pair<std::string, std::string>, std::size_t> index;
    std::set<std::string> sections;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        index[{keys[i].section, keys[i].name}] = i;
        sections.insert(keys[i].section);
    }

    std::set<std::pair<std::string, std::string>> seen;
    std::string section;
    const auto ls = text::lines(content);
    for (std::size_t n = 0; n < ls.size(); ++n) {
        const auto line = text::trim(ls[n]);
        const std::size_t lineno = n + 1;
        if (line.empty() || line.front() == '#' || line.front() == ';') {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError(source, lineno, "unterminated section header");
            }
            section = std::string(text::trim(line.substr(1, line.size() - 2)));
            if (!sections.count(section)) {
                throw ConfigError(source, lineno, "unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(source, lineno, "expected 'key = value'");
        }
        if (section.empty()) {
            throw ConfigError(source, lineno, "key outside of any section");
        }
        const std::string name(text::trim(line.substr(0, eq)));
        const auto value = text::trim(line.substr(eq + 1));
        const auto it = index.find({section, name});
        if (it == index.end()) {
            throw ConfigError(source, lineno, "unknown key '" + name + "' in [" + section + "]");
        }
        if (!seen.insert({section, name}).second) {
            throw ConfigError(source, lineno, "repeated key '" + name + "' in [" + section + "]");
        }
        if (!keys[it->second].set(value)) {
            throw ConfigError(source, lineno, "bad value '" + std::string(value) + "' for '" + name + "'");
        }
    }

    if (!base_dir.empty()) {
        for (auto* p : {&c.profile_paths.irradiance, &c.profile_paths.wind_speed, &c.profile_paths.electric_load,
                        &c.profile_paths.thermal_load, &c.profile_paths.hydrogen_demand}) {
            const std::filesystem::path path(*p);
            if (path.is_relative()) {
                *p = (std::filesystem::path(base_dir) / path).lexically_normal().string();
            }
        }
    }
    return c;
}

/// Reads a config file; a missing file is reported with its path.
inline RunConfig load_config(const std::string& path)
{
    const auto content = text::read_file(path);
    const auto dir = std::filesystem::path(path).parent_path().string();
    return parse_ini(content, path, RunConfig{}, dir.empty() ? "." : dir);
}

/// Synthesizes or loads the profiles the configuration points at.
inline ProfileSet resolve_profiles(const RunConfig& c)
{
    if (c.profile_source == ProfileSource::Synthetic) {
        return synthesize(c.synthesis);
    }
    auto p = load_profiles(c.profile_paths);
    p.validate();
    return p;
}

} // namespace mgsize
