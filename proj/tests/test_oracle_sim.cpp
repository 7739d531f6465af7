#include <gtest/gtest.h>

#include <cmath>

#include "revisit/oracle_sim.hpp"
#include "test_support.hpp"

namespace revisit::oracle {
namespace {

using revisit::testing::single;

TEST(SolveKepler, CircularAndEccentric) {
    EXPECT_DOUBLE_EQ(solve_kepler(1.0, 0.0), 1.0);
    for (double e : {0.1, 0.5, 0.9, 0.99}) {
        for (double m = -3.0; m <= 3.0; m += 0.25) {
            const double ecc = solve_kepler(m, e);
            EXPECT_NEAR(ecc - e * std::sin(ecc), m, 1e-11);
        }
    }
}

TEST(J2Propagator, EpochIdentity) {
    OrbitElements el{7200.0, 0.02, deg2rad(55.0), deg2rad(40.0), deg2rad(30.0), deg2rad(75.0)};
    const auto s = propagate_j2(el, 0.0);
    const double p = el.semi_latus_rectum();
    const double r = p / (1.0 + el.eccentricity * std::cos(el.true_anomaly));
    EXPECT_NEAR(s.radius, r, 1e-9);
    const double u = el.arg_perigee + el.true_anomaly;
    EXPECT_NEAR(s.position_eci[2], r * std::sin(u) * std::sin(el.inclination), 1e-9);
    EXPECT_NEAR(s.latitude, std::asin(std::sin(u) * std::sin(el.inclination)), 1e-12);
    for (int k = 0; k < 3; ++k) {
        EXPECT_DOUBLE_EQ(s.position_eci[k], s.position_ecef[k]);
    }
}

TEST(J2Propagator, PolarRaanConstant) {
    const auto el = OrbitElements::circular(700.0, 0.5 * kPi);
    const J2Propagator prop(el);
    EXPECT_NEAR(prop.raan_rate(), 0.0, 1e-20);
    // Node direction in inertial space stays on the x axis.
    for (double t : {0.0, 1e5, 1e6, 5e6}) {
        const auto s = prop.at(t);
        EXPECT_NEAR(s.position_eci[1], 0.0, 1e-6);
    }
}

TEST(J2Propagator, LatitudeReturnsAfterNodalPeriod) {
    for (double inc : {20.0, 51.6, 97.4, 130.0}) {
        auto el = OrbitElements::circular(650.0, deg2rad(inc));
        el.true_anomaly = deg2rad(33.0);
        const double pn = nodal_period(el.semi_major_axis_km, 0.0, el.inclination);
        const J2Propagator prop(el);
        const double lat0 = prop.at(0.0).latitude;
        for (int rev = 1; rev <= 5; ++rev) {
            EXPECT_NEAR(prop.at(rev * pn).latitude, lat0, 1e-6);
        }
    }
}

TEST(J2Propagator, CircularRadiusConstant) {
    const J2Propagator prop(OrbitElements::circular(550.0, deg2rad(97.59)));
    const double r0 = kWgs84.equatorial_radius_km + 550.0;
    for (double t = 0.0; t <= 60.0 * kSecondsPerDay; t += 3659.0) {
        EXPECT_NEAR(prop.at(t).radius, r0, 1e-9);
    }
}

TEST(J2Propagator, EarthRotationInLongitude) {
    const J2Propagator prop(OrbitElements::circular(500.0, 0.0));
    const double t = 1000.0;
    const auto s = prop.at(t);
    const double n = mean_anomaly_rate(kWgs84.equatorial_radius_km + 500.0, 0.0, 0.0) +
                     arg_perigee_rate(kWgs84.equatorial_radius_km + 500.0, 0.0, 0.0) +
                     raan_drift_rate(kWgs84.equatorial_radius_km + 500.0, 0.0, 0.0);
    EXPECT_NEAR(s.longitude, wrap_pi((n - kWgs84.rotation_rate_rad_s) * t), 1e-9);
}

TEST(Visible, ElevationThreshold) {
    const Vec3 station{6378.137, 0.0, 0.0};
    const double r = 6878.137;
    EXPECT_TRUE(visible({r, 0.0, 0.0}, station, SensorSpec::elevation(deg2rad(89.0))));
    // Satellite 10 deg of central angle away: elevation from closed form.
    const double c = deg2rad(10.0);
    const Vec3 sat{r * std::cos(c), r * std::sin(c), 0.0};
    const double theta_at_20 = ground_range_from_elevation(6378.137, r, deg2rad(20.0));
    EXPECT_EQ(visible(sat, station, SensorSpec::elevation(deg2rad(20.0))), c <= theta_at_20);
    EXPECT_FALSE(visible({-r, 0.0, 0.0}, station, SensorSpec::elevation(0.0)));
}

TEST(Visible, BoresightThreshold) {
    const Vec3 station{6378.137, 0.0, 0.0};
    const double r = 6878.137;
    const double theta = ground_range_from_boresight(6378.137, r, deg2rad(30.0));
    for (double f : {0.95, 1.05}) {
        const double c = f * theta;
        const Vec3 sat{r * std::cos(c), r * std::sin(c), 0.0};
        EXPECT_EQ(visible(sat, station, SensorSpec::boresight(deg2rad(30.0))), f < 1.0);
        const VisibilityTest cached(SensorSpec::boresight(deg2rad(30.0)), station);
        EXPECT_EQ(cached(sat), f < 1.0);
    }
}

TEST(SimConfig, Validation) {
    SimConfig cfg;
    cfg.sensor = SensorSpec::elevation(0.1);
    cfg.step_s = 0.05;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg.step_s = 10.0;
    cfg.refine_tolerance_s = 10.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg.refine_tolerance_s = 0.1;
    EXPECT_NO_THROW(cfg.validate());
}

TEST(SimulateCoverage, ZeroConeNoAccess) {
    auto sc = single(600.0, 97.8, SensorSpec::boresight(0.0), 10.0, 3.0);
    sc.grid_resolution = deg2rad(1.0);
    const auto res = simulate_coverage(sim_config_for(sc));
    EXPECT_EQ(res.table.interval_count(), 0u);
    EXPECT_TRUE(res.aggregate.window_exceeded);
}

TEST(SimulateCoverage, IntervalsWithinWindowAndSorted) {
    auto sc = single(700.0, 98.19, SensorSpec::elevation(deg2rad(10.0)), 30.0, 4.0);
    sc.grid_resolution = deg2rad(1.0);
    const auto res = simulate_coverage(sim_config_for(sc));
    EXPECT_GT(res.table.interval_count(), 0u);
    for (const auto& ivs : res.table.points) {
        for (std::size_t k = 0; k < ivs.size(); ++k) {
            EXPECT_LE(0.0, ivs[k].start);
            EXPECT_LE(ivs[k].start, ivs[k].end);
            EXPECT_LE(ivs[k].end, sc.window_s);
            if (k > 0) {
                EXPECT_GT(ivs[k].start, ivs[k - 1].end);
            }
        }
    }
}

TEST(SimulateCoverage, StepHalvingConverges) {
    auto sc = single(800.0, 60.0, SensorSpec::elevation(deg2rad(20.0)), 20.0, 10.0);
    sc.grid_resolution = deg2rad(1.0);
    const auto coarse = simulate_coverage(sim_config_for(sc, 10.0, 0.1));
    const auto fine = simulate_coverage(sim_config_for(sc, 5.0, 0.1));
    ASSERT_TRUE(coarse.aggregate.mrt_hours && fine.aggregate.mrt_hours);
    EXPECT_LT(std::abs(*coarse.aggregate.mrt_hours - *fine.aggregate.mrt_hours) * kSecondsPerHour, 0.1);
}

TEST(SimulateCoverage, ThreadsDeterministic) {
    auto sc = single(700.0, 90.0, SensorSpec::elevation(0.0), 0.0, 2.0);
    sc.walker = WalkerConfig{3, 3, 0};
    sc.grid_resolution = deg2rad(1.0);
    const auto serial = simulate_coverage(sim_config_for(sc));
    sc.threads = 3;
    const auto parallel = simulate_coverage(sim_config_for(sc));
    for (std::size_t p = 0; p < serial.table.points.size(); ++p) {
        ASSERT_EQ(serial.table.points[p].size(), parallel.table.points[p].size());
        for (std::size_t k = 0; k < serial.table.points[p].size(); ++k) {
            EXPECT_EQ(serial.table.points[p][k].start, parallel.table.points[p][k].start);
            EXPECT_EQ(serial.table.points[p][k].end, parallel.table.points[p][k].end);
        }
    }
}

TEST(SimulateCoverage, Reference400km60deg) {
    const auto sc = single(400.0, 60.0, SensorSpec::elevation(deg2rad(10.0)), 0.0);
    const auto res = simulate_coverage(sim_config_for(sc));
    ASSERT_TRUE(res.aggregate.mrt_hours);
    EXPECT_NEAR(*res.aggregate.mrt_hours, 13.08, 0.02);
}

TEST(SimulateCoverage, ReferenceSunSynchronous55deg) {
    auto sc = single(500.0, 97.41, SensorSpec::elevation(deg2rad(30.0)), 55.0);
    const auto res = simulate_coverage(sim_config_for(sc));
    ASSERT_TRUE(res.aggregate.mrt_hours);
    EXPECT_NEAR(*res.aggregate.mrt_hours, 14.46, 0.02);
}

TEST(SimulateCoverage, BoresightAgreesWithEngine) {
    auto sc = single(600.0, 0.0, SensorSpec::boresight(deg2rad(45.0)), 65.0);
    sc.orbit.inclination = sso_inclination(sc.orbit.semi_major_axis_km, 0.0);
    const auto engine = analyze(sc);
    const auto res = simulate_coverage(sim_config_for(sc));
    ASSERT_TRUE(engine.mrt_hours && res.aggregate.mrt_hours);
    EXPECT_NEAR(*engine.mrt_hours, *res.aggregate.mrt_hours, 2.0 / 60.0);
}

TEST(ConstellationElements, WalkerLayout) {
    Scenario sc;
    sc.orbit = OrbitElements::circular(700.0, deg2rad(60.0));
    sc.walker = WalkerConfig{6, 3, 1};
    const auto sats = constellation_elements(sc);
    ASSERT_EQ(sats.size(), 6u);
    EXPECT_NEAR(sats[2].raan, kTwoPi / 3.0, 1e-12);
    EXPECT_NEAR(sats[3].true_anomaly, kPi + kTwoPi / 6.0, 1e-12);
    sc.walker.reset();
    EXPECT_EQ(constellation_elements(sc).size(), 1u);
}

} // namespace
} // namespace revisit::oracle
