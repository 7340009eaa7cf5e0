#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mgsize
{

inline constexpr std::size_t kHoursPerYear = 8760;

/// Base class for every error the library raises.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

enum class Unit
{
    WattPerSquareMeter,
    MeterPerSecond,
    Kilowatt,
    KilowattHourHydrogen,
};

/// ASCII tag used in file headers.
inline std::string_view unit_tag(Unit u)
{
    switch (u) {
    case Unit::WattPerSquareMeter: return "W/m2";
    case Unit::MeterPerSecond: return "m/s";
    case Unit::Kilowatt: return "kW";
    case Unit::KilowattHourHydrogen: return "kWh-H2";
    }
    return "?";
}

/// Accepts the ASCII tags plus the superscript spelling of W/m².
inline bool parse_unit_tag(std::string_view tag, Unit& out)
{
    if (tag == "W/m2" || tag == "W/m\xC2\xB2") {
        out = Unit::WattPerSquareMeter;
    } else if (tag == "m/s") {
        out = Unit::MeterPerSecond;
    } else if (tag == "kW") {
        out = Unit::Kilowatt;
    } else if (tag == "kWh-H2") {
        out = Unit::KilowattHourHydrogen;
    } else {
        return false;
    }
    return true;
}

class SeriesError : public Error
{
  public:
    enum class Kind
    {
        WrongLength,
        NegativeValue,
        NonFiniteValue,
    };

    SeriesError(Kind kind, std::size_t detail)
        : Error(describe(kind, detail)), kind_(kind), detail_(detail)
    {
    }

    Kind kind() const { return kind_; }
    /// Actual length for WrongLength, offending index otherwise.
    std::size_t detail() const { return detail_; }

  private:
    static std::string describe(Kind kind, std::size_t detail)
    {
        switch (kind) {
        case Kind::WrongLength:
            return "series has " + std::to_string(detail) + " values, expected 8760";
        case Kind::NegativeValue:
            return "negative value at index " + std::to_string(detail);
        case Kind::NonFiniteValue:
            return "non-finite value at index " + std::to_string(detail);
        }
        return "invalid series";
    }

    Kind kind_;
    std::size_t detail_;
};

/// A year of hourly samples. Index i covers clock hours [i, i+1) of a
/// non-leap year, so hour-of-day is i % 24.
struct HourlySeries
{
    Unit unit = Unit::Kilowatt;
    std::vector<double> values;

    HourlySeries() = default;
    HourlySeries(Unit u, std::vector<double> v) : unit(u), values(std::move(v)) {}

    static HourlySeries zeros(Unit u) { return {u, std::vector<double>(kHoursPerYear, 0.0)}; }
    static HourlySeries constant(Unit u, double v) { return {u, std::vector<double>(kHoursPerYear, v)}; }

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }

    double total() const
    {
        double s = 0.0;
        for (double v : values) {
            s += v;
        }
        return s;
    }

    friend bool operator==(const HourlySeries&, const HourlySeries&) = default;
};

inline const HourlySeries& validate_series(const HourlySeries& s)
{
    if (s.values.size() != kHoursPerYear) {
        throw SeriesError(SeriesError::Kind::WrongLength, s.values.size());
    }
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        if (!std::isfinite(s.values[i])) {
            throw SeriesError(SeriesError::Kind::NonFiniteValue, i);
        }
        if (s.values[i] < 0.0) {
            throw SeriesError(SeriesError::Kind::NegativeValue, i);
        }
    }
    return s;
}

/// The five annual inputs, in the fixed order used by files and the CLI.
struct ProfileSet
{
    HourlySeries irradiance{Unit::WattPerSquareMeter, {}};
    HourlySeries wind_speed{Unit::MeterPerSecond, {}};
    HourlySeries electric_load{Unit::Kilowatt, {}};
    HourlySeries thermal_load{Unit::Kilowatt, {}};
    HourlySeries hydrogen_demand{Unit::KilowattHourHydrogen, {}};

    static ProfileSet zeros()
    {
        return {HourlySeries::zeros(Unit::WattPerSquareMeter), HourlySeries::zeros(Unit::MeterPerSecond),
                HourlySeries::zeros(Unit::Kilowatt), HourlySeries::zeros(Unit::Kilowatt),
                HourlySeries::zeros(Unit::KilowattHourHydrogen)};
    }

    void validate() const
    {
        for (const HourlySeries* s : {&irradiance, &wind_speed, &electric_load, &thermal_load, &hydrogen_demand}) {
            validate_series(*s);
        }
    }

    friend bool operator==(const ProfileSet&, const ProfileSet&) = default;
};

struct DeviceEconomics
{
    double capital_cost = 0.0;     // $/unit
    double replacement_cost = 0.0; // $/unit
    double maintenance_cost = 0.0; // $/unit/yr
    double lifetime = 20.0;        // years
    double efficiency = 1.0;

    bool valid() const
    {
        return capital_cost >= 0.0 && replacement_cost >= 0.0 && maintenance_cost >= 0.0 && lifetime >= 1.0 &&
               efficiency > 0.0 && efficiency <= 1.0;
    }

    friend bool operator==(const DeviceEconomics&, const DeviceEconomics&) = default;
};

/// How Eq.-7-style tank bookkeeping applies the storage efficiency to draws.
enum class TankDischargeMode
{
    Multiply, // E -= draw * eta, as the model is usually printed
    Divide,   // E -= draw / eta
};

/// Physical and economic constants for every device kind. The defaults are
/// the reference values of the combined heat-and-power microgrid model.
struct DeviceCatalog
{
    DeviceEconomics pv{2000.0, 1800.0, 0.0, 20.0, 0.154};
    DeviceEconomics wind_turbine{1500.0, 900.0, 45.0, 20.0, 1.0};
    DeviceEconomics fuel_cell{2000.0, 1500.0, 100.0, 5.0, 0.40};
    DeviceEconomics electrolyzer{1500.0, 1000.0, 15.0, 20.0, 0.75};
    DeviceEconomics hydrogen_tank{500.0, 450.0, 5.0, 20.0, 0.95};
    DeviceEconomics heater{281.0, 150.0, 5.0, 20.0, 0.90};
    DeviceEconomics boiler{85.0, 60.0, 2.0, 15.0, 0.94};
    DeviceEconomics converter{700.0, 650.0, 7.0, 15.0, 0.90};
    DeviceEconomics station_compressor{100000.0, 80000.0, 200.0, 20.0, 0.49};

    // PV module
    double pv_module_area = 1.9; // m²

    // wind turbine power curve, per 1 kW unit
    double wind_cut_in = 2.5;   // m/s
    double wind_rated_speed = 11.0;
    double wind_cut_off = 25.0;
    double wind_rated_power = 1.0; // kW
    double wind_furl_power = 1.0;  // kW at cut-off

    double fuel_cell_thermal_efficiency = 0.50;
    double hydrogen_hhv = 39.7;        // kWh/kg
    double tank_min_fraction = 0.05;
    TankDischargeMode tank_discharge_mode = TankDischargeMode::Multiply;
    double boiler_fuel_cost = 0.03;    // $/kWh of fuel input
    double station_max_delivery = 200.0; // kWh-H2 per hour

    double pv_efficiency() const { return pv.efficiency; }
    double fuel_cell_electric_efficiency() const { return fuel_cell.efficiency; }
    double electrolyzer_efficiency() const { return electrolyzer.efficiency; }
    double storage_efficiency() const { return hydrogen_tank.efficiency; }
    double heater_efficiency() const { return heater.efficiency; }
    double boiler_efficiency() const { return boiler.efficiency; }
    double converter_efficiency() const { return converter.efficiency; }
    double station_efficiency() const { return station_compressor.efficiency; }

    /// Throws mgsize::Error naming the first offending field.
    void validate() const
    {
        const std::pair<const char*, const DeviceEconomics*> devices[] = {
            {"pv", &pv},
            {"wind_turbine", &wind_turbine},
            {"fuel_cell", &fuel_cell},
            {"electrolyzer", &electrolyzer},
            {"hydrogen_tank", &hydrogen_tank},
            {"heater", &heater},
            {"boiler", &boiler},
            {"converter", &converter},
            {"station_compressor", &station_compressor},
        };
        for (const auto& [name, econ] : devices) {
            if (!econ->valid()) {
                throw Error(std::string("invalid economics for device '") + name + "'");
            }
        }
        if (!(wind_cut_in >= 0.0 && wind_cut_in < wind_rated_speed && wind_rated_speed <= wind_cut_off)) {
            throw Error("wind curve requires 0 <= cut_in < rated_speed <= cut_off");
        }
        if (!(pv_module_area > 0.0 && wind_rated_power >= 0.0 && wind_furl_power >= 0.0)) {
            throw Error("pv module area and wind powers must be positive");
        }
        if (!(fuel_cell_thermal_efficiency >= 0.0 && fuel_cell.efficiency + fuel_cell_thermal_efficiency <= 1.0)) {
            throw Error("fuel cell electric + thermal efficiency must not exceed 1");
        }
        if (!(hydrogen_hhv > 0.0 && tank_min_fraction >= 0.0 && tank_min_fraction < 1.0)) {
            throw Error("hydrogen HHV must be positive and tank_min_fraction in [0, 1)");
        }
        if (!(boiler_fuel_cost >= 0.0 && station_max_delivery >= 0.0)) {
            throw Error("boiler fuel cost and station delivery cap must be non-negative");
        }
    }

    friend bool operator==(const DeviceCatalog&, const DeviceCatalog&) = default;
};

/// The eight sizing decisions. Counts are whole units; the rest are
/// capacities in kW (tank in kg).
struct SizingVector
{
    long n_pv = 0;
    long n_wt = 0;
    double p_electrolyzer = 0.0;
    double m_tank = 0.0;
    double p_fuelcell = 0.0;
    double p_converter = 0.0;
    double p_boiler = 0.0;
    double p_heater = 0.0;

    static constexpr std::size_t kDimensions = 8;

    static constexpr std::string_view names[kDimensions] = {
        "n_pv", "n_wt", "p_electrolyzer", "m_tank", "p_fuelcell", "p_converter", "p_boiler", "p_heater",
    };

    bool valid() const
    {
        return n_pv >= 0 && n_wt >= 0 && p_electrolyzer >= 0.0 && m_tank >= 0.0 && p_fuelcell >= 0.0 &&
               p_converter >= 0.0 && p_boiler >= 0.0 && p_heater >= 0.0 && std::isfinite(p_electrolyzer) &&
               std::isfinite(m_tank) && std::isfinite(p_fuelcell) && std::isfinite(p_converter) &&
               std::isfinite(p_boiler) && std::isfinite(p_heater);
    }

    /// Values in the order of `names`.
    std::vector<double> to_vector() const
    {
        return {static_cast<double>(n_pv), static_cast<double>(n_wt), p_electrolyzer, m_tank, p_fuelcell,
                p_converter, p_boiler, p_heater};
    }

    /// Counts are rounded to the nearest integer.
    static SizingVector from_vector(const std::vector<double>& x)
    {
        if (x.size() != kDimensions) {
            throw Error("sizing vector needs 8 values, got " + std::to_string(x.size()));
        }
        SizingVector s;
        s.n_pv = std::lround(x[0]);
        s.n_wt = std::lround(x[1]);
        s.p_electrolyzer = x[2];
        s.m_tank = x[3];
        s.p_fuelcell = x[4];
        s.p_converter = x[5];
        s.p_boiler = x[6];
        s.p_heater = x[7];
        return s;
    }

    friend bool operator==(const SizingVector&, const SizingVector&) = default;
};

} // namespace mgsize
