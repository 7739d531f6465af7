#pragma once

// Brute-force point-coverage simulation used to cross-check the
// semi-analytical engine: secular J2 propagation, fixed time steps, and an
// explicit station-to-satellite visibility test refined by bisection.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <thread>
#include <vector>

#include "revisit/coverage_engine.hpp"
#include "revisit/earth_model.hpp"
#include "revisit/errors.hpp"
#include "revisit/orbit.hpp"
#include "revisit/sensor_geometry.hpp"

namespace revisit::oracle {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

struct SatState {
    Vec3 position_eci{};  // km
    Vec3 position_ecef{}; // km, Greenwich meridian aligned with the x axis at t = 0
    double latitude = 0.0;  // geocentric [rad]
    double longitude = 0.0; // [rad], in [-π, π)
    double radius = 0.0;    // km
};

/// Eccentric anomaly from mean anomaly; Newton iteration to 1e-12.
inline double solve_kepler(double mean_anomaly, double e) {
    const double m = wrap_pi(mean_anomaly);
    double ecc = m + 0.85 * e * (std::sin(m) < 0.0 ? -1.0 : 1.0);
    for (int iter = 0; iter < 50; ++iter) {
        const double f = ecc - e * std::sin(ecc) - m;
        const double step = f / (1.0 - e * std::cos(ecc));
        ecc -= step;
        if (std::abs(step) < 1e-12) {
            return ecc;
        }
    }
    throw KeplerNonConvergence("Kepler's equation did not converge for M = " +
                               std::to_string(mean_anomaly) + ", e = " + std::to_string(e));
}

/// Secular-J2 propagator: Ω, ω and M advance at constant rates.
class J2Propagator {
public:
    explicit J2Propagator(const OrbitElements& el, const EarthConstants& earth = kWgs84)
        : el_(el), earth_(earth) {
        const double a = el.semi_major_axis_km;
        raan_rate_ = raan_drift_rate(a, el.eccentricity, el.inclination, earth);
        argp_rate_ = arg_perigee_rate(a, el.eccentricity, el.inclination, earth);
        mean_rate_ = mean_anomaly_rate(a, el.eccentricity, el.inclination, earth);
        const double e = el.eccentricity;
        const double ecc0 = 2.0 * std::atan(std::sqrt((1.0 - e) / (1.0 + e)) *
                                            std::tan(0.5 * el.true_anomaly));
        mean0_ = ecc0 - e * std::sin(ecc0);
    }

    SatState at(double t) const {
        const double e = el_.eccentricity;
        const double raan = el_.raan + raan_rate_ * t;
        const double argp = el_.arg_perigee + argp_rate_ * t;
        const double ecc = solve_kepler(mean0_ + mean_rate_ * t, e);
        const double nu = 2.0 * std::atan2(std::sqrt(1.0 + e) * std::sin(0.5 * ecc),
                                           std::sqrt(1.0 - e) * std::cos(0.5 * ecc));
        const double r = el_.semi_major_axis_km * (1.0 - e * std::cos(ecc));
        const double u = argp + nu;
        const double cu = std::cos(u), su = std::sin(u);
        const double co = std::cos(raan), so = std::sin(raan);
        const double ci = std::cos(el_.inclination), si = std::sin(el_.inclination);

        SatState s;
        s.radius = r;
        s.position_eci = {r * (co * cu - so * su * ci), r * (so * cu + co * su * ci), r * su * si};
        const double gst = earth_.rotation_rate_rad_s * t;
        const double cg = std::cos(gst), sg = std::sin(gst);
        s.position_ecef = {cg * s.position_eci[0] + sg * s.position_eci[1],
                           -sg * s.position_eci[0] + cg * s.position_eci[1], s.position_eci[2]};
        s.latitude = std::asin(std::clamp(s.position_ecef[2] / r, -1.0, 1.0));
        s.longitude = wrap_pi(std::atan2(s.position_ecef[1], s.position_ecef[0]));
        return s;
    }

    double raan_rate() const { return raan_rate_; }

private:
    OrbitElements el_;
    EarthConstants earth_;
    double raan_rate_ = 0.0;
    double argp_rate_ = 0.0;
    double mean_rate_ = 0.0;
    double mean0_ = 0.0;
};

inline SatState propagate_j2(const OrbitElements& el, double t, const EarthConstants& earth = kWgs84) {
    return J2Propagator(el, earth).at(t);
}

struct TargetPoint {
    double latitude = 0.0;
    double longitude = 0.0;
};

struct SimConfig {
    double step_s = 10.0;
    double refine_tolerance_s = 0.1;
    double window_s = 60.0 * kSecondsPerDay;
    std::vector<OrbitElements> satellites;
    SensorSpec sensor;
    std::vector<TargetPoint> targets;
    EarthConstants earth = kWgs84;
    unsigned threads = 1;

    void validate() const {
        if (!(step_s > 0.0) || !(refine_tolerance_s > 0.0) || !(refine_tolerance_s < step_s)) {
            throw ConfigError("oracle step must be positive and larger than the refinement tolerance");
        }
        if (!(window_s > 0.0)) {
            throw ConfigError("oracle window must be positive");
        }
        if (!sensor.valid()) {
            throw ConfigError("oracle sensor angle out of range");
        }
    }
};

/// Station on the spheroid at geocentric latitude/longitude, ECEF km.
inline Vec3 station_position(const TargetPoint& p, const EarthConstants& earth = kWgs84) {
    const double r = geodetic_radius(p.latitude, earth);
    return {r * std::cos(p.latitude) * std::cos(p.longitude),
            r * std::cos(p.latitude) * std::sin(p.longitude), r * std::sin(p.latitude)};
}

/// Line-of-sight visibility of a satellite at ECEF `sat` from `station`.
///
/// Elevation mode: the elevation above the station's local horizontal plane
/// must reach ε. Boresight mode: the off-nadir angle at the satellite must
/// not exceed ψ and the station must see the satellite above its horizon.
inline bool visible(const Vec3& sat, const Vec3& station, const SensorSpec& sensor) {
    const Vec3 los{sat[0] - station[0], sat[1] - station[1], sat[2] - station[2]};
    const double range = norm(los);
    const double sin_elev = dot(los, station) / (range * norm(station));
    if (sensor.mode == SensorMode::Elevation) {
        return sin_elev >= std::sin(sensor.angle);
    }
    if (sin_elev < 0.0) {
        return false;
    }
    const double cos_nadir = dot(sat, los) / (norm(sat) * range);
    return cos_nadir >= std::cos(sensor.angle);
}

/// Precomputed form of `visible` for the inner simulation loop.
class VisibilityTest {
public:
    VisibilityTest(const SensorSpec& sensor, const Vec3& station)
        : station_(station), mode_(sensor.mode) {
        const double r = norm(station);
        up_ = {station[0] / r, station[1] / r, station[2] / r};
        threshold_ = sensor.mode == SensorMode::Elevation ? std::sin(sensor.angle)
                                                          : std::cos(sensor.angle);
    }

    bool operator()(const Vec3& sat) const {
        const Vec3 los{sat[0] - station_[0], sat[1] - station_[1], sat[2] - station_[2]};
        const double range = norm(los);
        const double up = dot(los, up_);
        if (mode_ == SensorMode::Elevation) {
            return up >= threshold_ * range;
        }
        if (up < 0.0) {
            return false;
        }
        return dot(sat, los) >= threshold_ * norm(sat) * range;
    }

private:
    Vec3 station_;
    Vec3 up_{};
    SensorMode mode_;
    double threshold_ = 0.0;
};

struct SimResult {
    AccessTable table;
    RevisitReport aggregate;
    std::vector<std::optional<double>> point_max_gap_hours;
};

namespace detail {

struct LatitudeBand {
    double latitude = 0.0;
    double station_radius = 0.0;
    std::vector<std::size_t> order; // target indices sorted by longitude
    std::vector<double> lons;       // sorted longitudes
};

inline std::vector<LatitudeBand> group_targets(const std::vector<TargetPoint>& targets,
                                               const EarthConstants& earth) {
    std::map<double, std::vector<std::size_t>> by_lat;
    for (std::size_t k = 0; k < targets.size(); ++k) {
        by_lat[targets[k].latitude].push_back(k);
    }
    std::vector<LatitudeBand> bands;
    for (auto& [lat, idx] : by_lat) {
        LatitudeBand b;
        b.latitude = lat;
        b.station_radius = geodetic_radius(lat, earth);
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t c) {
            return wrap_pi(targets[a].longitude) < wrap_pi(targets[c].longitude);
        });
        b.order = idx;
        for (std::size_t k : idx) {
            b.lons.push_back(wrap_pi(targets[k].longitude));
        }
        bands.push_back(std::move(b));
    }
    return bands;
}

/// Time-stepped access search for one satellite against every target.
inline std::vector<std::vector<Interval>> satellite_accesses(const OrbitElements& el,
                                                             const SimConfig& cfg,
                                                             const std::vector<LatitudeBand>& bands,
                                                             const std::vector<VisibilityTest>& stations) {
    const J2Propagator prop(el, cfg.earth);
    const std::size_t n_targets = cfg.targets.size();
    std::vector<std::vector<Interval>> out(n_targets);
    std::vector<long> seen_step(n_targets, -1);
    std::vector<double> open_start(n_targets, 0.0);
    std::vector<std::size_t> open;
    std::vector<std::size_t> next_open;
    constexpr double kMargin = deg2rad(0.5);

    auto visible_at = [&](double t, std::size_t target) {
        return stations[target](prop.at(t).position_ecef);
    };
    // Bisection for the visibility transition inside (t_lo, t_hi].
    auto refine = [&](double t_lo, double t_hi, std::size_t target, bool rising) {
        while (t_hi - t_lo > cfg.refine_tolerance_s) {
            const double mid = 0.5 * (t_lo + t_hi);
            if (visible_at(mid, target) == rising) {
                t_hi = mid;
            } else {
                t_lo = mid;
            }
        }
        return rising ? t_hi : t_lo;
    };

    const auto steps = static_cast<long>(std::ceil(cfg.window_s / cfg.step_s));
    for (long k = 0; k <= steps; ++k) {
        const double t = std::min(static_cast<double>(k) * cfg.step_s, cfg.window_s);
        const SatState s = prop.at(t);
        for (const LatitudeBand& band : bands) {
            // Candidate cap: the horizon, or the elevation-limited cap when
            // that is tighter. Only used to skip points that cannot be visible.
            double horizon = std::acos(band.station_radius / s.radius);
            if (cfg.sensor.mode == SensorMode::Elevation) {
                horizon = std::acos(band.station_radius / s.radius * std::cos(cfg.sensor.angle)) -
                          cfg.sensor.angle;
            }
            horizon += kMargin;
            if (std::abs(s.latitude - band.latitude) > horizon) {
                continue;
            }
            const double cos_dlon = (std::cos(horizon) - std::sin(band.latitude) * std::sin(s.latitude)) /
                                    (std::cos(band.latitude) * std::cos(s.latitude));
            auto test = [&](std::size_t j) {
                const std::size_t target = band.order[j];
                if (!stations[target](s.position_ecef)) {
                    return;
                }
                if (seen_step[target] != k - 1 || k == 0) {
                    open_start[target] = k == 0 ? 0.0 : refine(t - cfg.step_s, t, target, true);
                }
                if (seen_step[target] != k) {
                    seen_step[target] = k;
                    next_open.push_back(target);
                }
            };
            if (cos_dlon <= -1.0) {
                for (std::size_t j = 0; j < band.lons.size(); ++j) {
                    test(j);
                }
                continue;
            }
            const double half = std::acos(std::min(cos_dlon, 1.0));
            // Longitude window [lo, hi] may wrap around ±π.
            const double lo = wrap_pi(s.longitude - half);
            const double width = 2.0 * half;
            auto begin = std::lower_bound(band.lons.begin(), band.lons.end(), lo);
            std::size_t j = static_cast<std::size_t>(begin - band.lons.begin());
            const std::size_t n = band.lons.size();
            for (std::size_t count = 0; count < n; ++count, ++j) {
                if (j == n) {
                    j = 0;
                }
                double off = band.lons[j] - lo;
                if (off < 0.0) {
                    off += kTwoPi;
                }
                if (off > width) {
                    break;
                }
                test(j);
            }
        }
        // Close accesses that were open at the previous step but not now.
        for (std::size_t target : open) {
            if (seen_step[target] != k) {
                const double end = refine(t - cfg.step_s, t, target, false);
                out[target].push_back({open_start[target], end});
            }
        }
        open.swap(next_open);
        next_open.clear();
    }
    for (std::size_t target : open) {
        out[target].push_back({open_start[target], cfg.window_s});
    }
    return out;
}

} // namespace detail

/// Runs the point-coverage simulation and computes revisit statistics with
/// the same gap conventions as the semi-analytical engine.
inline SimResult simulate_coverage(const SimConfig& cfg) {
    cfg.validate();
    for (const auto& el : cfg.satellites) {
        validate(el, cfg.earth);
    }
    const auto bands = detail::group_targets(cfg.targets, cfg.earth);
    std::vector<VisibilityTest> stations;
    stations.reserve(cfg.targets.size());
    for (const auto& p : cfg.targets) {
        stations.emplace_back(cfg.sensor, station_position(p, cfg.earth));
    }

    const std::size_t n_sat = cfg.satellites.size();
    std::vector<std::vector<std::vector<Interval>>> per_sat(n_sat);
    const unsigned threads = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(n_sat)));
    if (threads <= 1) {
        for (std::size_t s = 0; s < n_sat; ++s) {
            per_sat[s] = detail::satellite_accesses(cfg.satellites[s], cfg, bands, stations);
        }
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t s = w; s < n_sat; s += threads) {
                    per_sat[s] = detail::satellite_accesses(cfg.satellites[s], cfg, bands, stations);
                }
            });
        }
    }

    SimResult res;
    res.table = AccessTable(cfg.targets.size(), cfg.window_s);
    for (const auto& sat : per_sat) {
        for (std::size_t p = 0; p < sat.size(); ++p) {
            auto& dst = res.table.points[p];
            dst.insert(dst.end(), sat[p].begin(), sat[p].end());
        }
    }
    res.aggregate = revisit_stats(res.table, cfg.refine_tolerance_s);
    res.point_max_gap_hours.resize(cfg.targets.size());
    for (std::size_t p = 0; p < cfg.targets.size(); ++p) {
        const auto gaps = point_gaps(res.table.points[p]);
        if (!gaps.empty()) {
            res.point_max_gap_hours[p] = *std::max_element(gaps.begin(), gaps.end()) / kSecondsPerHour;
        }
    }
    return res;
}

/// Element sets of every satellite in a scenario's constellation.
inline std::vector<OrbitElements> constellation_elements(const Scenario& sc) {
    std::vector<OrbitElements> sats;
    auto add = [&](double raan_offset, double phase) {
        OrbitElements el = sc.orbit;
        el.raan += raan_offset;
        el.true_anomaly += phase;
        sats.push_back(el);
    };
    if (sc.planes) {
        for (const auto& plane : *sc.planes) {
            for (double phase : plane.phase_offsets) {
                add(plane.raan_offset, phase);
            }
        }
    } else if (sc.walker) {
        const WalkerConfig& w = *sc.walker;
        w.validate();
        const int s = w.per_plane();
        for (int m = 0; m < w.planes; ++m) {
            for (int l = 0; l < s; ++l) {
                add(kTwoPi * m / w.planes,
                    kTwoPi * l / s + kTwoPi * static_cast<double>(w.phasing) * m / w.total);
            }
        }
    } else {
        add(0.0, 0.0);
    }
    return sats;
}

/// Oracle configuration matching a scenario: the same satellites, sensor and
/// grid of longitudes at the target latitude.
inline SimConfig sim_config_for(const Scenario& sc, double step_s = 10.0, double refine_s = 0.1) {
    SimConfig cfg;
    cfg.step_s = step_s;
    cfg.refine_tolerance_s = refine_s;
    cfg.window_s = sc.window_s;
    cfg.satellites = constellation_elements(sc);
    cfg.sensor = sc.sensor;
    cfg.earth = sc.earth;
    cfg.threads = sc.threads;
    const LongitudeGrid grid = build_grid(sc.grid_resolution);
    cfg.targets.reserve(grid.count);
    for (std::size_t g = 0; g < grid.count; ++g) {
        cfg.targets.push_back({sc.latitude, grid.point(g)});
    }
    return cfg;
}

} // namespace revisit::oracle
