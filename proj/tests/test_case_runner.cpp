#include <gtest/gtest.h>

#include "revisit/case_runner.hpp"

namespace revisit {
namespace {

using nlohmann::json;

CaseConfig sso_case(double alt, double psi, double lat) {
    CaseConfig c;
    c.altitude_km = alt;
    c.sso = true;
    c.boresight_deg = psi;
    c.latitude_deg = lat;
    return c;
}

TEST(CaseFromJson, FullSchema) {
    const auto c = case_from_json(json::parse(R"({
        "altitude_km": 700, "inclination_deg": 90, "elevation_deg": 0,
        "latitude_deg": 12.5, "walker": "6/3/1", "window_days": 30,
        "grid_res_deg": 0.5, "segment_samples": 400,
        "nodal_period_form": "linear_ratio", "walker_phasing": "longitude_offset",
        "raan_deg": 10, "arg_perigee_deg": 5, "true_anomaly_deg": 1, "eccentricity": 0.001
    })"));
    EXPECT_EQ(*c.altitude_km, 700.0);
    EXPECT_EQ(*c.inclination_deg, 90.0);
    EXPECT_EQ(*c.elevation_deg, 0.0);
    EXPECT_FALSE(c.boresight_deg);
    EXPECT_EQ(c.latitude_deg, 12.5);
    EXPECT_EQ(c.walker.total, 6);
    EXPECT_EQ(c.walker.planes, 3);
    EXPECT_EQ(c.walker.phasing, 1);
    EXPECT_EQ(c.window_days, 30.0);
    EXPECT_EQ(c.grid_res_deg, 0.5);
    EXPECT_EQ(c.segment_samples, 400u);
    EXPECT_EQ(c.nodal_form, NodalPeriodForm::LinearRatio);
    EXPECT_EQ(c.walker_phasing, WalkerPhasing::LongitudeOffset);
    const auto sc = c.to_scenario();
    EXPECT_NEAR(sc.orbit.semi_major_axis_km, 7078.137, 1e-9);
    EXPECT_NEAR(sc.orbit.raan, deg2rad(10.0), 1e-15);
    EXPECT_NEAR(sc.window_s, 30.0 * kSecondsPerDay, 1e-9);
}

TEST(CaseFromJson, Defaults) {
    const auto c = case_from_json(json::parse(R"({"altitude_km": 500, "sso": true, "boresight_deg": 45})"));
    EXPECT_EQ(c.window_days, 60.0);
    EXPECT_EQ(c.grid_res_deg, 0.1);
    EXPECT_EQ(c.segment_samples, 1000u);
    EXPECT_EQ(c.walker.total, 1);
    EXPECT_EQ(c.nodal_form, NodalPeriodForm::Standard);
    EXPECT_NEAR(c.resolved_inclination_deg(), 97.4, 0.05);
    EXPECT_FALSE(c.to_scenario().walker);
}

TEST(CaseFromJson, WalkerObjectForm) {
    const auto c = case_from_json(json::parse(
        R"({"altitude_km": 500, "inclination_deg": 60, "elevation_deg": 5, "walker": {"t": 4, "p": 2, "f": 1}})"));
    EXPECT_EQ(c.walker.total, 4);
    EXPECT_EQ(c.walker.planes, 2);
    EXPECT_EQ(c.walker.phasing, 1);
}

TEST(CaseFromJson, Rejections) {
    EXPECT_THROW(case_from_json(json::parse(R"({"altitude": 500})")), ConfigError);
    EXPECT_THROW(case_from_json(json::parse(R"([1, 2])")), ConfigError);
    EXPECT_THROW(case_from_json(json::parse(R"({"altitude_km": "500"})")), ConfigError);
    EXPECT_THROW(case_from_json(json::parse(R"({"sso": 1})")), ConfigError);
    EXPECT_THROW(case_from_json(json::parse(R"({"walker": "3/2/0"})")), ConfigError);
    EXPECT_THROW(case_from_json(json::parse(R"({"segment_samples": 2})")), ConfigError);
    EXPECT_THROW(case_from_json(json::parse(R"({"nodal_period_form": "exact"})")), ConfigError);
}

TEST(CaseConfig, ExactlyOneChoice) {
    CaseConfig c = sso_case(500.0, 45.0, 40.0);
    EXPECT_NO_THROW(c.validate());
    c.inclination_deg = 97.0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = sso_case(500.0, 45.0, 40.0);
    c.elevation_deg = 10.0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = sso_case(500.0, 45.0, 40.0);
    c.boresight_deg.reset();
    EXPECT_THROW(c.validate(), ConfigError);
    c = sso_case(500.0, 45.0, 40.0);
    c.semi_major_axis_km = 6878.137;
    EXPECT_THROW(c.validate(), ConfigError);
    c.altitude_km.reset();
    EXPECT_NO_THROW(c.validate());
}

TEST(ParseWalker, Forms) {
    const auto w = parse_walker("12/4/2");
    EXPECT_EQ(w.total, 12);
    EXPECT_EQ(w.planes, 4);
    EXPECT_EQ(w.phasing, 2);
    EXPECT_THROW(parse_walker("12-4-2"), ConfigError);
    EXPECT_THROW(parse_walker("12/4"), ConfigError);
    EXPECT_THROW(parse_walker("12/5/0"), ConfigError);
    EXPECT_THROW(parse_walker("3/3/1x"), ConfigError);
}

TEST(SweepAxis, ParseAndCount) {
    const auto ax = parse_sweep_axis("altitude_km:400:900:50");
    EXPECT_EQ(ax.param, SweepParam::Altitude);
    EXPECT_EQ(ax.count(), 11u);
    EXPECT_DOUBLE_EQ(ax.value(10), 900.0);
    EXPECT_EQ(parse_sweep_axis("latitude_deg:0:80:5").count(), 17u);
    EXPECT_EQ(parse_sweep_axis("boresight_deg:10:10:1").count(), 1u);
    EXPECT_THROW(parse_sweep_axis("altitude_km:400:900:0"), ConfigError);
    EXPECT_THROW(parse_sweep_axis("altitude_km:900:400:50"), ConfigError);
    EXPECT_THROW(parse_sweep_axis("mass:1:2:1"), ConfigError);
    EXPECT_THROW(parse_sweep_axis("altitude_km:a:2:1"), ConfigError);
    EXPECT_THROW(parse_sweep_axis("altitude_km:1:2"), ConfigError);
}

TEST(SweepSpec, CellOrderLastAxisFastest) {
    SweepSpec spec{sso_case(500.0, 45.0, 40.0),
                   {parse_sweep_axis("altitude_km:500:600:50"), parse_sweep_axis("latitude_deg:0:10:10")}};
    ASSERT_EQ(spec.cell_count(), 6u);
    EXPECT_EQ(*spec.cell(0).altitude_km, 500.0);
    EXPECT_EQ(spec.cell(0).latitude_deg, 0.0);
    EXPECT_EQ(spec.cell(1).latitude_deg, 10.0);
    EXPECT_EQ(*spec.cell(2).altitude_km, 550.0);
    EXPECT_EQ(*spec.cell(5).altitude_km, 600.0);
    EXPECT_EQ(spec.cell(5).latitude_deg, 10.0);
    spec.axes.push_back(parse_sweep_axis("window_days:1:2:1"));
    EXPECT_THROW(spec.validate(), ConfigError);
    spec.axes = {parse_sweep_axis("altitude_km:1:2:1"), parse_sweep_axis("altitude_km:1:2:1")};
    EXPECT_THROW(spec.validate(), ConfigError);
}

TEST(SweepSpec, FromJson) {
    const auto j = json::parse(R"({"altitude_km": 500, "sso": true, "boresight_deg": 45,
        "sweep": [{"param": "boresight_deg", "min": 10, "max": 50, "step": 20}]})");
    const auto axes = sweep_axes_from_json(j);
    ASSERT_EQ(axes.size(), 1u);
    EXPECT_EQ(axes[0].param, SweepParam::Sensor);
    SweepSpec spec{case_from_json(j), axes};
    EXPECT_EQ(*spec.cell(2).boresight_deg, 50.0);
    EXPECT_THROW(sweep_axes_from_json(json::parse(R"({"sweep": 3})")), ConfigError);
}

TEST(RunCase, Reference800km20deg) {
    CaseConfig c;
    c.altitude_km = 800.0;
    c.inclination_deg = 20.0;
    c.elevation_deg = 40.0;
    const auto r = run_case(c);
    ASSERT_TRUE(r.error.empty()) << r.error;
    EXPECT_NEAR(*r.report.mrt_hours, 10.79, 0.02);
}

TEST(RunCase, ReferenceSunSynchronousEquator) {
    CaseConfig c;
    c.altitude_km = 500.0;
    c.inclination_deg = 97.41;
    c.elevation_deg = 30.0;
    const auto r = run_case(c);
    ASSERT_TRUE(r.error.empty()) << r.error;
    EXPECT_NEAR(*r.report.mrt_hours, 72.59, 0.05);
}

TEST(RunCase, DegenerateWalkerMatchesSingleSatellite) {
    CaseConfig c = sso_case(650.0, 35.0, 30.0);
    c.window_days = 20.0;
    const auto single_sat = analyze_detailed(c.to_scenario());
    Scenario sc = c.to_scenario();
    sc.walker = WalkerConfig{1, 1, 0};
    const auto walker = analyze_detailed(sc);
    ASSERT_EQ(single_sat.table.points.size(), walker.table.points.size());
    for (std::size_t k = 0; k < walker.table.points.size(); ++k) {
        ASSERT_EQ(single_sat.table.points[k].size(), walker.table.points[k].size());
        for (std::size_t j = 0; j < walker.table.points[k].size(); ++j) {
            EXPECT_EQ(single_sat.table.points[k][j].start, walker.table.points[k][j].start);
            EXPECT_EQ(single_sat.table.points[k][j].end, walker.table.points[k][j].end);
        }
    }
    EXPECT_EQ(single_sat.report.mrt_hours, walker.report.mrt_hours);
    EXPECT_EQ(single_sat.report.art_hours, walker.report.art_hours);
}

TEST(RunCase, ErrorsAreRecorded) {
    CaseConfig c;
    c.altitude_km = 500.0;
    c.inclination_deg = 30.0;
    c.elevation_deg = 10.0;
    c.latitude_deg = 50.0;
    const auto r = run_case(c);
    EXPECT_NE(r.error.find("latitude"), std::string::npos);
    EXPECT_FALSE(r.report.mrt_hours);
    EXPECT_EQ(batch_status({r}), 1);
}

TEST(RunCase, WindowSentinel) {
    CaseConfig c = sso_case(500.0, 10.0, 0.0);
    c.window_days = 1.0;
    const auto r = run_case(c);
    EXPECT_EQ(r.error, "window_exceeded");
    EXPECT_FALSE(r.report.mrt_hours);
    EXPECT_EQ(batch_status({r}), 0);
    const std::string row = csv_row(r);
    // mrt_h is empty, error column holds the sentinel.
    EXPECT_NE(row.find(",,"), std::string::npos);
    EXPECT_EQ(row.substr(row.size() - 15), "window_exceeded");
}

TEST(RunSweep, DegenerateSweepEqualsRunCase) {
    CaseConfig c = sso_case(600.0, 40.0, 30.0);
    c.window_days = 15.0;
    SweepSpec spec{c, {parse_sweep_axis("altitude_km:600:600:10")}};
    const auto rows = run_sweep(spec);
    ASSERT_EQ(rows.size(), 1u);
    auto single_row = run_case(c);
    single_row.case_id = "0";
    EXPECT_EQ(csv_row(rows[0]), csv_row(single_row));
}

TEST(RunSweep, DeterministicAcrossThreads) {
    CaseConfig c = sso_case(500.0, 45.0, 40.0);
    c.window_days = 10.0;
    c.grid_res_deg = 0.5;
    SweepSpec spec{c, {parse_sweep_axis("altitude_km:400:700:100"), parse_sweep_axis("boresight_deg:20:40:20")}};
    const auto a = to_csv(run_sweep(spec, 1));
    const auto b = to_csv(run_sweep(spec, 4));
    const auto again = to_csv(run_sweep(spec, 1));
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, again);
}

TEST(Csv, HeaderAndColumnCount) {
    EXPECT_STREQ(kCsvHeader,
                 "case_id,alt_km,inc_deg,ecc,lat_deg,sensor_mode,sensor_deg,t,p,f,window_days,mrt_h,art_h,"
                 "coverage_frac,ttc_h,pass_count,error");
    CaseResult r;
    r.case_id = "7";
    r.config = sso_case(500.0, 45.0, 40.0);
    r.inclination_deg = 97.4;
    r.report.mrt_hours = 12.5;
    r.report.art_hours = 4.0;
    r.report.coverage_fraction = 1.0;
    r.report.time_to_full_coverage_hours = 30.0;
    r.report.pass_count = 900;
    EXPECT_EQ(csv_row(r),
              "7,500.000,97.400000,0.000000,40.0000,boresight,45.0000,1,1,0,60.0000,12.500000,4.000000,"
              "1.000000,30.000000,900,");
    r.error = "bad, \"thing\"";
    EXPECT_EQ(csv_row(r).substr(csv_row(r).size() - 22), ",,,,,,\"bad, \"\"thing\"\"\"");
}

TEST(BatchStatus, MixedRows) {
    CaseResult ok;
    CaseResult sentinel;
    sentinel.error = "window_exceeded";
    CaseResult bad;
    bad.error = "pole overlap";
    EXPECT_EQ(batch_status({ok, sentinel}), 0);
    EXPECT_EQ(batch_status({ok, bad, sentinel}), 1);
}

TEST(DefaultThreadCount, EnvironmentOverride) {
    ::setenv("REVISIT_THREADS", "3", 1);
    EXPECT_EQ(default_thread_count(), 3u);
    ::setenv("REVISIT_THREADS", "zero", 1);
    EXPECT_GE(default_thread_count(), 1u);
    ::unsetenv("REVISIT_THREADS");
}

} // namespace
} // namespace revisit
