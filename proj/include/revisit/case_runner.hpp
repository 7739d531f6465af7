#pragma once

// Case and sweep configuration, JSON ingestion, and CSV emission for the
// command-line front end.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "revisit/coverage_engine.hpp"
#include "revisit/errors.hpp"
#include "revisit/oracle_sim.hpp"

namespace revisit {

/// One run as described at the I/O boundary (degrees, km, days).
struct CaseConfig {
    std::optional<double> altitude_km;
    std::optional<double> semi_major_axis_km;
    double eccentricity = 0.0;
    std::optional<double> inclination_deg;
    bool sso = false;
    double raan_deg = 0.0;
    double arg_perigee_deg = 0.0;
    double true_anomaly_deg = 0.0;
    std::optional<double> boresight_deg;
    std::optional<double> elevation_deg;
    double latitude_deg = 0.0;
    WalkerConfig walker{};
    double window_days = 60.0;
    double grid_res_deg = 0.1;
    std::size_t segment_samples = 1000;
    NodalPeriodForm nodal_form = NodalPeriodForm::Standard;
    WalkerPhasing walker_phasing = WalkerPhasing::Kinematic;

    double semi_major_axis(const EarthConstants& earth = kWgs84) const {
        return semi_major_axis_km ? *semi_major_axis_km : earth.equatorial_radius_km + *altitude_km;
    }
    double altitude(const EarthConstants& earth = kWgs84) const {
        return altitude_km ? *altitude_km : *semi_major_axis_km - earth.equatorial_radius_km;
    }

    void validate() const {
        if (altitude_km.has_value() == semi_major_axis_km.has_value()) {
            throw ConfigError("give exactly one of altitude_km or semi_major_axis_km");
        }
        if (inclination_deg.has_value() == sso) {
            throw ConfigError("give exactly one of inclination_deg or sso");
        }
        if (boresight_deg.has_value() == elevation_deg.has_value()) {
            throw ConfigError("give exactly one of boresight_deg or elevation_deg");
        }
        if (!(window_days > 0.0)) {
            throw ConfigError("window_days must be positive");
        }
        if (segment_samples < 3) {
            throw ConfigError("segment_samples must be at least 3");
        }
        walker.validate();
    }

    /// Resolved inclination in degrees (solves for SSO when requested).
    double resolved_inclination_deg(const EarthConstants& earth = kWgs84) const {
        if (sso) {
            return rad2deg(sso_inclination(semi_major_axis(earth), eccentricity, earth));
        }
        return *inclination_deg;
    }

    Scenario to_scenario(const EarthConstants& earth = kWgs84) const {
        validate();
        Scenario sc;
        sc.earth = earth;
        sc.orbit.semi_major_axis_km = semi_major_axis(earth);
        sc.orbit.eccentricity = eccentricity;
        sc.orbit.inclination = deg2rad(resolved_inclination_deg(earth));
        sc.orbit.raan = deg2rad(raan_deg);
        sc.orbit.arg_perigee = deg2rad(arg_perigee_deg);
        sc.orbit.true_anomaly = deg2rad(true_anomaly_deg);
        sc.sensor = boresight_deg ? SensorSpec::boresight(deg2rad(*boresight_deg))
                                  : SensorSpec::elevation(deg2rad(*elevation_deg));
        sc.latitude = deg2rad(latitude_deg);
        if (walker.total > 1) {
            sc.walker = walker;
        }
        sc.window_s = window_days * kSecondsPerDay;
        sc.grid_resolution = deg2rad(grid_res_deg);
        sc.segment_samples = segment_samples;
        sc.nodal_form = nodal_form;
        sc.walker_phasing = walker_phasing;
        return sc;
    }
};

/// Parses "t/p/f".
inline WalkerConfig parse_walker(const std::string& text) {
    WalkerConfig w;
    char s1 = 0;
    char s2 = 0;
    std::istringstream in(text);
    if (!(in >> w.total >> s1 >> w.planes >> s2 >> w.phasing) || s1 != '/' || s2 != '/' ||
        !(in >> std::ws).eof()) {
        throw ConfigError("walker must be written t/p/f, got '" + text + "'");
    }
    w.validate();
    return w;
}

/// Parameters that a sweep may vary.
enum class SweepParam { Altitude, Inclination, Latitude, Sensor, WindowDays };

inline SweepParam parse_sweep_param(const std::string& name) {
    if (name == "altitude_km") return SweepParam::Altitude;
    if (name == "inclination_deg") return SweepParam::Inclination;
    if (name == "latitude_deg") return SweepParam::Latitude;
    if (name == "sensor_deg" || name == "boresight_deg" || name == "elevation_deg") {
        return SweepParam::Sensor;
    }
    if (name == "window_days") return SweepParam::WindowDays;
    throw ConfigError("unknown sweep parameter '" + name + "'");
}

struct SweepAxis {
    SweepParam param = SweepParam::Altitude;
    double min = 0.0;
    double max = 0.0;
    double step = 1.0;

    std::size_t count() const {
        return static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
    }
    double value(std::size_t k) const { return min + step * static_cast<double>(k); }

    void validate() const {
        if (!(step > 0.0)) {
            throw ConfigError("sweep step must be positive");
        }
        if (!(max >= min)) {
            throw ConfigError("sweep range is empty");
        }
    }
};

/// Parses "param:min:max:step".
inline SweepAxis parse_sweep_axis(const std::string& text) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ':')) {
        parts.push_back(item);
    }
    if (parts.size() != 4) {
        throw ConfigError("sweep axis must be written param:min:max:step, got '" + text + "'");
    }
    SweepAxis ax;
    ax.param = parse_sweep_param(parts[0]);
    try {
        ax.min = std::stod(parts[1]);
        ax.max = std::stod(parts[2]);
        ax.step = std::stod(parts[3]);
    } catch (const std::exception&) {
        throw ConfigError("sweep axis bounds must be numbers in '" + text + "'");
    }
    ax.validate();
    return ax;
}

struct SweepSpec {
    CaseConfig base;
    std::vector<SweepAxis> axes; // one or two

    void validate() const {
        if (axes.empty() || axes.size() > 2) {
            throw ConfigError("a sweep needs one or two axes");
        }
        for (const auto& a : axes) {
            a.validate();
        }
        if (axes.size() == 2 && axes[0].param == axes[1].param) {
            throw ConfigError("sweep axes must vary different parameters");
        }
    }

    std::size_t cell_count() const {
        std::size_t n = 1;
        for (const auto& a : axes) {
            n *= a.count();
        }
        return n;
    }

    /// Configuration of cell `idx`; the last axis varies fastest.
    CaseConfig cell(std::size_t idx) const {
        CaseConfig c = base;
        for (std::size_t k = axes.size(); k-- > 0;) {
            const std::size_t n = axes[k].count();
            apply(c, axes[k].param, axes[k].value(idx % n));
            idx /= n;
        }
        return c;
    }

    static void apply(CaseConfig& c, SweepParam p, double v) {
        switch (p) {
        case SweepParam::Altitude:
            c.altitude_km = v;
            c.semi_major_axis_km.reset();
            break;
        case SweepParam::Inclination:
            c.inclination_deg = v;
            c.sso = false;
            break;
        case SweepParam::Latitude:
            c.latitude_deg = v;
            break;
        case SweepParam::Sensor:
            if (c.boresight_deg) {
                c.boresight_deg = v;
            } else {
                c.elevation_deg = v;
            }
            break;
        case SweepParam::WindowDays:
            c.window_days = v;
            break;
        }
    }
};

namespace detail {

inline std::optional<double> opt_number(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) {
        return std::nullopt;
    }
    if (!j.at(key).is_number()) {
        throw ConfigError(std::string("field '") + key + "' must be a number");
    }
    return j.at(key).get<double>();
}

} // namespace detail

/// Reads a case from JSON. Unknown keys are rejected so typos do not pass silently.
inline CaseConfig case_from_json(const nlohmann::json& j) {
    static const std::vector<std::string> known = {
        "altitude_km",    "semi_major_axis_km", "eccentricity",    "inclination_deg",
        "sso",            "raan_deg",           "arg_perigee_deg", "true_anomaly_deg",
        "boresight_deg",  "elevation_deg",      "latitude_deg",    "walker",
        "window_days",    "grid_res_deg",       "segment_samples", "nodal_period_form",
        "walker_phasing", "sweep"};
    if (!j.is_object()) {
        throw ConfigError("configuration must be a JSON object");
    }
    for (const auto& item : j.items()) {
        if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
            throw ConfigError("unknown configuration field '" + item.key() + "'");
        }
    }
    CaseConfig c;
    c.altitude_km = detail::opt_number(j, "altitude_km");
    c.semi_major_axis_km = detail::opt_number(j, "semi_major_axis_km");
    c.eccentricity = detail::opt_number(j, "eccentricity").value_or(0.0);
    c.inclination_deg = detail::opt_number(j, "inclination_deg");
    if (j.contains("sso")) {
        if (!j.at("sso").is_boolean()) {
            throw ConfigError("field 'sso' must be true or false");
        }
        c.sso = j.at("sso").get<bool>();
    }
    c.raan_deg = detail::opt_number(j, "raan_deg").value_or(0.0);
    c.arg_perigee_deg = detail::opt_number(j, "arg_perigee_deg").value_or(0.0);
    c.true_anomaly_deg = detail::opt_number(j, "true_anomaly_deg").value_or(0.0);
    c.boresight_deg = detail::opt_number(j, "boresight_deg");
    c.elevation_deg = detail::opt_number(j, "elevation_deg");
    c.latitude_deg = detail::opt_number(j, "latitude_deg").value_or(0.0);
    if (j.contains("walker")) {
        const auto& w = j.at("walker");
        if (w.is_string()) {
            c.walker = parse_walker(w.get<std::string>());
        } else if (w.is_object()) {
            c.walker = WalkerConfig{w.value("t", 1), w.value("p", 1), w.value("f", 0)};
            c.walker.validate();
        } else {
            throw ConfigError("field 'walker' must be \"t/p/f\" or {t, p, f}");
        }
    }
    c.window_days = detail::opt_number(j, "window_days").value_or(60.0);
    c.grid_res_deg = detail::opt_number(j, "grid_res_deg").value_or(0.1);
    if (auto n = detail::opt_number(j, "segment_samples")) {
        if (*n < 3 || *n != std::floor(*n)) {
            throw ConfigError("segment_samples must be an integer >= 3");
        }
        c.segment_samples = static_cast<std::size_t>(*n);
    }
    if (j.contains("nodal_period_form")) {
        const auto f = j.at("nodal_period_form").get<std::string>();
        if (f == "standard") {
            c.nodal_form = NodalPeriodForm::Standard;
        } else if (f == "linear_ratio") {
            c.nodal_form = NodalPeriodForm::LinearRatio;
        } else {
            throw ConfigError("nodal_period_form must be 'standard' or 'linear_ratio'");
        }
    }
    if (j.contains("walker_phasing")) {
        const auto f = j.at("walker_phasing").get<std::string>();
        if (f == "kinematic") {
            c.walker_phasing = WalkerPhasing::Kinematic;
        } else if (f == "longitude_offset") {
            c.walker_phasing = WalkerPhasing::LongitudeOffset;
        } else {
            throw ConfigError("walker_phasing must be 'kinematic' or 'longitude_offset'");
        }
    }
    return c;
}

/// Reads the optional "sweep" array: [{"param", "min", "max", "step"}, ...].
inline std::vector<SweepAxis> sweep_axes_from_json(const nlohmann::json& j) {
    std::vector<SweepAxis> axes;
    if (!j.contains("sweep")) {
        return axes;
    }
    const auto& s = j.at("sweep");
    if (!s.is_array()) {
        throw ConfigError("field 'sweep' must be an array of axes");
    }
    for (const auto& a : s) {
        SweepAxis ax;
        ax.param = parse_sweep_param(a.at("param").get<std::string>());
        ax.min = a.at("min").get<double>();
        ax.max = a.at("max").get<double>();
        ax.step = a.at("step").get<double>();
        ax.validate();
        axes.push_back(ax);
    }
    return axes;
}

inline nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open configuration file '" + path + "'");
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("invalid JSON in '" + path + "': " + e.what());
    }
}

/// One CSV row.
struct CaseResult {
    std::string case_id;
    CaseConfig config;
    double inclination_deg = 0.0;
    RevisitReport report;
    std::string error; // empty, "window_exceeded", or a message
};

inline CaseResult run_case(const CaseConfig& cfg, unsigned threads = 1) {
    CaseResult r;
    r.config = cfg;
    try {
        r.inclination_deg = cfg.resolved_inclination_deg();
        Scenario sc = cfg.to_scenario();
        sc.threads = threads;
        r.report = analyze(sc);
        if (r.report.window_exceeded) {
            r.error = "window_exceeded";
        }
    } catch (const Error& e) {
        r.error = e.what();
        if (cfg.inclination_deg) {
            r.inclination_deg = *cfg.inclination_deg;
        }
    }
    return r;
}

/// Runs the brute-force oracle on the same case.
inline CaseResult run_case_oracle(const CaseConfig& cfg, unsigned threads = 1) {
    CaseResult r;
    r.config = cfg;
    try {
        r.inclination_deg = cfg.resolved_inclination_deg();
        Scenario sc = cfg.to_scenario();
        sc.threads = threads;
        r.report = oracle::simulate_coverage(oracle::sim_config_for(sc)).aggregate;
        if (r.report.window_exceeded) {
            r.error = "window_exceeded";
        }
    } catch (const Error& e) {
        r.error = e.what();
    }
    return r;
}

/// Worker count: REVISIT_THREADS if set, else the hardware concurrency.
inline unsigned default_thread_count() {
    if (const char* env = std::getenv("REVISIT_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) {
            return static_cast<unsigned>(n);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Evaluates every cell; cells run concurrently but results keep sweep order.
inline std::vector<CaseResult> run_sweep(const SweepSpec& spec, unsigned threads = 1) {
    spec.validate();
    const std::size_t n = spec.cell_count();
    std::vector<CaseResult> rows(n);
    auto cell = [&](std::size_t k) {
        rows[k] = run_case(spec.cell(k));
        rows[k].case_id = std::to_string(k);
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    if (workers == 1) {
        for (std::size_t k = 0; k < n; ++k) {
            cell(k);
        }
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t k = w; k < n; k += workers) {
                    cell(k);
                }
            });
        }
    }
    return rows;
}

inline constexpr const char* kCsvHeader =
    "case_id,alt_km,inc_deg,ecc,lat_deg,sensor_mode,sensor_deg,t,p,f,window_days,mrt_h,art_h,"
    "coverage_frac,ttc_h,pass_count,error";

namespace detail {

inline std::string fmt(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    return buf;
}

inline std::string fmt(const std::optional<double>& v, int precision) {
    return v ? fmt(*v, precision) : std::string();
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

} // namespace detail

inline std::string csv_row(const CaseResult& r) {
    const CaseConfig& c = r.config;
    const bool bore = c.boresight_deg.has_value();
    const std::optional<double> alt =
        (c.altitude_km || c.semi_major_axis_km) ? std::optional<double>(c.altitude()) : std::nullopt;
    const bool failed = !r.error.empty() && r.error != "window_exceeded";
    std::ostringstream os;
    os << r.case_id << ',' << detail::fmt(alt, 3) << ',' << detail::fmt(r.inclination_deg, 6) << ','
       << detail::fmt(c.eccentricity, 6) << ',' << detail::fmt(c.latitude_deg, 4) << ','
       << (bore ? "boresight" : "elevation") << ','
       << detail::fmt(bore ? c.boresight_deg : c.elevation_deg, 4) << ',' << c.walker.total << ','
       << c.walker.planes << ',' << c.walker.phasing << ',' << detail::fmt(c.window_days, 4) << ',';
    if (failed) {
        os << ",,,,,";
    } else {
        os << detail::fmt(r.report.mrt_hours, 6) << ',' << detail::fmt(r.report.art_hours, 6) << ','
           << detail::fmt(r.report.coverage_fraction, 6) << ','
           << detail::fmt(r.report.time_to_full_coverage_hours, 6) << ',' << r.report.pass_count
           << ',';
    }
    os << detail::csv_escape(r.error);
    return os.str();
}

inline std::string to_csv(const std::vector<CaseResult>& rows) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const auto& r : rows) {
        out += csv_row(r);
        out += '\n';
    }
    return out;
}

/// Exit status for a batch: 0 when every cell succeeded or only hit the
/// window sentinel, 1 otherwise.
inline int batch_status(const std::vector<CaseResult>& rows) {
    for (const auto& r : rows) {
        if (!r.error.empty() && r.error != "window_exceeded") {
            return 1;
        }
    }
    return 0;
}

} // namespace revisit
