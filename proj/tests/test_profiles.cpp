#include "mgsize/profiles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <string>

using namespace mgsize;

namespace
{

std::string csv_rows(const std::string& unit, std::size_t n, double value = 1.5)
{
    std::string s = "hour,value," + unit + "\n";
    for (std::size_t i = 1; i <= n; ++i) {
        s += std::to_string(i) + "," + text::format_double(value) + "\n";
    }
    return s;
}

} // namespace

TEST(Series, AllZerosIsValid)
{
    EXPECT_NO_THROW(validate_series(HourlySeries::zeros(Unit::Kilowatt)));
}

TEST(Series, WrongLength)
{
    HourlySeries s{Unit::Kilowatt, std::vector<double>(8759, 0.0)};
    try {
        validate_series(s);
        FAIL();
    } catch (const SeriesError& e) {
        EXPECT_EQ(e.kind(), SeriesError::Kind::WrongLength);
        EXPECT_EQ(e.detail(), 8759u);
    }
}

TEST(Series, NegativeValue)
{
    auto s = HourlySeries::zeros(Unit::Kilowatt);
    s.values[3] = -1.0;
    try {
        validate_series(s);
        FAIL();
    } catch (const SeriesError& e) {
        EXPECT_EQ(e.kind(), SeriesError::Kind::NegativeValue);
        EXPECT_EQ(e.detail(), 3u);
    }
}

TEST(Series, NonFiniteValue)
{
    auto s = HourlySeries::zeros(Unit::Kilowatt);
    s.values[9] = std::nan("");
    try {
        validate_series(s);
        FAIL();
    } catch (const SeriesError& e) {
        EXPECT_EQ(e.kind(), SeriesError::Kind::NonFiniteValue);
        EXPECT_EQ(e.detail(), 9u);
    }
}

TEST(ProfileCsv, WellFormedFile)
{
    const auto s = series_from_csv(csv_rows("kW", 8760), Unit::Kilowatt, "x.csv");
    EXPECT_EQ(s.size(), 8760u);
    EXPECT_EQ(s.values[100], 1.5);
}

TEST(ProfileCsv, ExtraRowIsWrongLength)
{
    try {
        series_from_csv(csv_rows("kW", 8761), Unit::Kilowatt, "x.csv");
        FAIL();
    } catch (const SeriesError& e) {
        EXPECT_EQ(e.kind(), SeriesError::Kind::WrongLength);
        EXPECT_EQ(e.detail(), 8761u);
    }
}

TEST(ProfileCsv, UnitMismatch)
{
    EXPECT_THROW(series_from_csv(csv_rows("m/s", 8760), Unit::WattPerSquareMeter, "irr.csv"), UnitMismatch);
}

TEST(ProfileCsv, BadRowNamesTheLine)
{
    auto content = csv_rows("kW", 8760);
    content.replace(content.find("\n5,1.5\n") + 1, 5, "5,abc");
    try {
        series_from_csv(content, Unit::Kilowatt, "load.csv");
        FAIL();
    } catch (const text::ParseError& e) {
        EXPECT_EQ(e.line(), 6u);
        EXPECT_NE(std::string(e.what()).find("load.csv:6"), std::string::npos);
    }
}

TEST(ProfileCsv, HourMustCountUp)
{
    auto content = csv_rows("kW", 8760);
    content.replace(content.find("\n7,1.5\n") + 1, 1, "8");
    EXPECT_THROW(series_from_csv(content, Unit::Kilowatt, "load.csv"), text::ParseError);
}

TEST(ProfileCsv, RoundTripIsExact)
{
    const auto p = synthesize(SynthesisSpec{});
    for (const HourlySeries* s : {&p.irradiance, &p.wind_speed, &p.electric_load, &p.thermal_load,
                                  &p.hydrogen_demand}) {
        EXPECT_EQ(series_from_csv(series_to_csv(*s), s->unit, "rt.csv"), *s);
    }
}

TEST(ProfileCsv, MissingFileNamesThePath)
{
    try {
        load_series("/nonexistent/irradiance.csv", Unit::WattPerSquareMeter);
        FAIL();
    } catch (const text::IoError& e) {
        EXPECT_NE(std::string(e.what()).find("/nonexistent/irradiance.csv"), std::string::npos);
    }
}

TEST(Synthesis, SameSeedSameSeries)
{
    SynthesisSpec spec;
    spec.seed = 99;
    EXPECT_EQ(synthesize(spec), synthesize(spec));
    SynthesisSpec other = spec;
    other.seed = 100;
    EXPECT_NE(synthesize(spec).wind_speed, synthesize(other).wind_speed);
}

TEST(Synthesis, ProducesValidYears)
{
    EXPECT_NO_THROW(synthesize(SynthesisSpec{}).validate());
}

TEST(Synthesis, NightHasNoSun)
{
    const auto irr = synthesize_irradiance(SynthesisSpec{});
    for (std::size_t day = 0; day < 365; ++day) {
        EXPECT_EQ(irr[day * 24], 0.0);
    }
}

TEST(Synthesis, FleetHydrogenDemand)
{
    const SynthesisSpec spec;
    const double expected = 150.0 * 2.0 * 52.0 * 5.0 * 39.7; // 3,096,600 kWh
    EXPECT_EQ(spec.expected_annual_hydrogen(), expected);
    const auto h = synthesize_hydrogen_demand(spec);
    EXPECT_NEAR(h.total(), expected, 198.5);
}

TEST(Synthesis, ArrivalsStayInTheDistributionSupport)
{
    SynthesisSpec spec;
    spec.arrival_weights.fill(0.0);
    spec.arrival_weights[14] = 1.0;
    spec.arrival_weights[15] = 2.0;
    const auto h = synthesize_hydrogen_demand(spec);
    for (std::size_t t = 0; t < h.size(); ++t) {
        if (h[t] > 0.0) {
            EXPECT_TRUE(t % 24 == 14 || t % 24 == 15) << t;
        }
    }
}

TEST(Synthesis, AnnualDemandsMatchTheSettings)
{
    const SynthesisSpec spec;
    const auto p = synthesize(spec);
    EXPECT_NEAR(p.electric_load.total(), spec.annual_electric, 1e-6 * spec.annual_electric);
    EXPECT_NEAR(p.thermal_load.total(), spec.annual_thermal, 1e-6 * spec.annual_thermal);
}

TEST(Synthesis, WindFollowsTheWeibullScale)
{
    const auto w = synthesize_wind(SynthesisSpec{});
    double mean = 0.0;
    for (double v : w.values) {
        mean += v;
    }
    mean /= static_cast<double>(w.size());
    // Weibull(k = 2, c = 7) has mean 7 * Gamma(1.5) = 6.2035
    EXPECT_NEAR(mean, 7.0 * std::tgamma(1.5), 0.6);
}
