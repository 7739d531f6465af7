// revisit: command-line front end for revisit-time analysis.
//
//   revisit run   [--config case.json] [flags]     single case, CSV row
//   revisit sweep  --config sweep.json [--sweep param:min:max:step] ...
//
// Exit codes: 0 success (window-exceeded cells included), 1 configuration
// or per-case error, 2 internal error.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "revisit/revisit.hpp"

namespace {

struct Overrides {
    std::optional<double> altitude_km;
    std::optional<double> semi_major_axis_km;
    std::optional<double> eccentricity;
    std::optional<double> inclination_deg;
    bool sso = false;
    std::optional<double> elevation_deg;
    std::optional<double> boresight_deg;
    std::optional<double> latitude_deg;
    std::optional<std::string> walker;
    std::optional<double> window_days;
    std::optional<double> grid_res_deg;
    std::optional<std::size_t> segment_samples;
};

void add_case_flags(CLI::App& cmd, Overrides& o) {
    cmd.add_option("--altitude-km", o.altitude_km, "Circular altitude above the equatorial radius");
    cmd.add_option("--semi-major-axis-km", o.semi_major_axis_km, "Semi-major axis");
    cmd.add_option("--eccentricity", o.eccentricity, "Eccentricity");
    cmd.add_option("--inclination-deg", o.inclination_deg, "Inclination");
    cmd.add_flag("--sso", o.sso, "Use the sun-synchronous inclination");
    cmd.add_option("--elevation-deg", o.elevation_deg, "Minimum elevation constraint");
    cmd.add_option("--boresight-deg", o.boresight_deg, "Sensor boresight half-cone angle");
    cmd.add_option("--latitude-deg", o.latitude_deg, "Target latitude");
    cmd.add_option("--walker", o.walker, "Walker pattern t/p/f");
    cmd.add_option("--window-days", o.window_days, "Analysis window");
    cmd.add_option("--grid-res-deg", o.grid_res_deg, "Longitude grid resolution");
    cmd.add_option("--segment-samples", o.segment_samples, "Track samples per pass");
}

revisit::CaseConfig apply(revisit::CaseConfig c, const Overrides& o) {
    if (o.altitude_km) {
        c.altitude_km = o.altitude_km;
        c.semi_major_axis_km.reset();
    }
    if (o.semi_major_axis_km) {
        c.semi_major_axis_km = o.semi_major_axis_km;
        c.altitude_km.reset();
    }
    if (o.eccentricity) c.eccentricity = *o.eccentricity;
    if (o.inclination_deg && o.sso) {
        throw revisit::ConfigError("--inclination-deg and --sso are mutually exclusive");
    }
    if (o.inclination_deg) {
        c.inclination_deg = o.inclination_deg;
        c.sso = false;
    }
    if (o.sso) {
        c.sso = true;
        c.inclination_deg.reset();
    }
    if (o.elevation_deg && o.boresight_deg) {
        throw revisit::ConfigError("--elevation-deg and --boresight-deg are mutually exclusive");
    }
    if (o.elevation_deg) {
        c.elevation_deg = o.elevation_deg;
        c.boresight_deg.reset();
    }
    if (o.boresight_deg) {
        c.boresight_deg = o.boresight_deg;
        c.elevation_deg.reset();
    }
    if (o.latitude_deg) c.latitude_deg = *o.latitude_deg;
    if (o.walker) c.walker = revisit::parse_walker(*o.walker);
    if (o.window_days) c.window_days = *o.window_days;
    if (o.grid_res_deg) c.grid_res_deg = *o.grid_res_deg;
    if (o.segment_samples) c.segment_samples = *o.segment_samples;
    return c;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw revisit::ConfigError("cannot write '" + out_path + "'");
    }
    out << text;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Revisit-time analysis for satellites and Walker constellations"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    Overrides overrides;
    bool with_oracle = false;
    bool report_timing = false;
    std::vector<std::string> sweep_axes;

    auto* run = app.add_subcommand("run", "Evaluate a single case");
    run->add_option("--config", config_path, "JSON case file");
    run->add_option("--out", out_path, "Write CSV here instead of stdout");
    run->add_flag("--oracle", with_oracle, "Also run the brute-force coverage simulation");
    run->add_flag("--timing", report_timing, "Print wall time to stderr");
    add_case_flags(*run, overrides);

    auto* sweep = app.add_subcommand("sweep", "Evaluate a one- or two-parameter sweep");
    sweep->add_option("--config", config_path, "JSON case file with optional 'sweep' axes");
    sweep->add_option("--out", out_path, "Write CSV here instead of stdout");
    sweep->add_option("--sweep", sweep_axes, "Axis param:min:max:step (replaces the file's axes)");
    add_case_flags(*sweep, overrides);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        nlohmann::json file = nlohmann::json::object();
        if (!config_path.empty()) {
            file = revisit::read_json_file(config_path);
        }
        const revisit::CaseConfig base = apply(revisit::case_from_json(file), overrides);
        const unsigned threads = revisit::default_thread_count();

        if (run->parsed()) {
            base.validate();
            const auto t0 = std::chrono::steady_clock::now();
            std::vector<revisit::CaseResult> rows{revisit::run_case(base)};
            rows.back().case_id = "0";
            const double elapsed =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (report_timing) {
                std::fprintf(stderr, "run_case wall time: %.3f s\n", elapsed);
            }
            if (rows.back().report.footprint_clamped) {
                std::fprintf(stderr,
                             "warning: boresight cone exceeds the horizon; footprint clamped\n");
            }
            if (with_oracle) {
                rows.push_back(revisit::run_case_oracle(base, threads));
                rows.back().case_id = "oracle";
            }
            emit(revisit::to_csv(rows), out_path);
            for (const auto& r : rows) {
                if (!r.error.empty() && r.error != "window_exceeded") {
                    std::fprintf(stderr, "error: %s\n", r.error.c_str());
                }
            }
            return revisit::batch_status(rows);
        }

        revisit::SweepSpec spec;
        spec.base = base;
        if (!sweep_axes.empty()) {
            for (const auto& a : sweep_axes) {
                spec.axes.push_back(revisit::parse_sweep_axis(a));
            }
        } else {
            spec.axes = revisit::sweep_axes_from_json(file);
        }
        const auto rows = revisit::run_sweep(spec, threads);
        emit(revisit::to_csv(rows), out_path);
        return revisit::batch_status(rows);
    } catch (const revisit::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "error: configuration: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 2;
    }
}
