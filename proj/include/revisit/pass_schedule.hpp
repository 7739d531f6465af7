#pragma once

// Latitude-crossing passes for a single satellite and their expansion to a
// Walker constellation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "revisit/earth_model.hpp"
#include "revisit/errors.hpp"
#include "revisit/orbit.hpp"
#include "revisit/sensor_geometry.hpp"

namespace revisit {

enum class Direction { Ascending, Descending };

inline const char* to_string(Direction d) {
    return d == Direction::Ascending ? "ascending" : "descending";
}

/// Walker delta pattern i:t/p/f.
struct WalkerConfig {
    int total = 1;
    int planes = 1;
    int phasing = 0;

    int per_plane() const { return total / planes; }

    void validate() const {
        if (total < 1 || planes < 1) {
            throw ConfigError("walker t and p must be positive");
        }
        if (total % planes != 0) {
            throw ConfigError("walker p = " + std::to_string(planes) +
                              " does not divide t = " + std::to_string(total));
        }
        if (phasing < 0 || phasing >= planes) {
            throw ConfigError("walker phasing f must lie in [0, p)");
        }
    }
};

/// Explicit plane layout for constellations that are not Walker patterns.
struct PlaneOverride {
    double raan_offset = 0.0;          // relative to the reference plane [rad]
    std::vector<double> phase_offsets; // argument of latitude ahead of the reference [rad]
};

/// How the inter-plane phasing factor f enters the pass longitudes.
///
/// `Kinematic` treats the in-track lead of each plane as a time shift along
/// the ground track. `LongitudeOffset` adds 2πmf/t directly to the crossing
/// longitude at an unchanged epoch.
enum class WalkerPhasing { Kinematic, LongitudeOffset };

struct Pass {
    double longitude = 0.0; // crossing longitude, normalized to [-π, π)
    double epoch = 0.0;     // seconds since analysis start
    Direction direction = Direction::Ascending;
    int plane = 0;
    int satellite = 0;
};

struct PassSet {
    std::vector<Pass> passes; // sorted by epoch
    double shift = 0.0;       // Δλ [rad/rev]
    double nodal_period = 0.0;
    double window_start = 0.0;
    double window_end = 0.0;

    std::size_t size() const { return passes.size(); }
};

/// Secular quantities shared by every satellite with the same a, e, i.
struct OrbitRates {
    double nodal_period = 0.0;
    double raan_rate = 0.0;
    double shift = 0.0;

    static OrbitRates of(const OrbitElements& el, NodalPeriodForm form = NodalPeriodForm::Standard,
                         const EarthConstants& earth = kWgs84) {
        OrbitRates r;
        r.nodal_period = revisit::nodal_period(el.semi_major_axis_km, el.eccentricity, el.inclination,
                                      form, earth);
        r.raan_rate = revisit::raan_drift_rate(el.semi_major_axis_km, el.eccentricity, el.inclination, earth);
        r.shift = revisit::ground_track_shift(r.nodal_period, r.raan_rate, earth);
        return r;
    }
};

namespace detail {

/// Mean anomaly for true anomaly `nu`, continuous in `nu` (no wrapping).
inline double continuous_mean_anomaly(double nu, double e) {
    if (e == 0.0) {
        return nu;
    }
    const double turns = std::floor((nu + kPi) / kTwoPi);
    const double nu_w = nu - turns * kTwoPi; // in [-π, π)
    const double ecc_anom =
        2.0 * std::atan(std::sqrt((1.0 - e) / (1.0 + e)) * std::tan(0.5 * nu_w));
    const double mean = ecc_anom - e * std::sin(ecc_anom);
    return mean + turns * kTwoPi;
}

/// Right ascension of the point at argument of latitude `u` in a plane with
/// node `raan` and inclination `inc`.
inline double right_ascension(double u, double raan, double inc) {
    const double cu = std::cos(u);
    const double su = std::sin(u);
    return std::atan2(cu * std::sin(raan) + su * std::cos(raan) * std::cos(inc),
                      cu * std::cos(raan) - su * std::sin(raan) * std::cos(inc));
}

} // namespace detail

/// Time [s] to travel from true anomaly `nu_from` to `nu_to` (forward, may
/// exceed one period if `nu_to` is more than a revolution ahead).
inline double time_between(const OrbitElements& el, double nu_from, double nu_to, double period) {
    const double dm = detail::continuous_mean_anomaly(nu_to, el.eccentricity) -
                      detail::continuous_mean_anomaly(nu_from, el.eccentricity);
    return dm / kTwoPi * period;
}

/// First crossing of one branch after the element epoch.
struct FirstCrossing {
    double longitude = 0.0;
    double epoch = 0.0; // in [0, P_n)
    double true_anomaly = 0.0;
};

/// First ascending and descending crossings of latitude `lat` after the
/// element epoch. Longitudes include Earth rotation and nodal drift accrued
/// up to each crossing.
inline std::pair<FirstCrossing, FirstCrossing> first_crossings(const OrbitElements& el, double lat,
                                                               const OrbitRates& rates) {
    const CrossingGeometry geo = radius_at_latitude(el, lat);
    auto make = [&](double nu) {
        FirstCrossing c;
        // Unwrap so the crossing lies within one revolution ahead of the epoch.
        double target = nu;
        while (target < el.true_anomaly) {
            target += kTwoPi;
        }
        while (target >= el.true_anomaly + kTwoPi) {
            target -= kTwoPi;
        }
        c.true_anomaly = target;
        c.epoch = time_between(el, el.true_anomaly, target, rates.nodal_period);
        c.longitude = wrap_pi(detail::right_ascension(el.arg_perigee + target, el.raan,
                                                      el.inclination) +
                              c.epoch / rates.nodal_period * rates.shift);
        return c;
    };
    return {make(geo.nu_ascending), make(geo.nu_descending)};
}

/// Crossing longitudes (ascending, descending) of `lat` for the element set,
/// with the rotation correction for the time from the element epoch.
inline std::pair<double, double> crossing_longitude(const OrbitElements& el, double lat,
                                                    double shift, double period) {
    OrbitRates rates;
    rates.nodal_period = period;
    rates.shift = shift;
    const auto [asc, desc] = first_crossings(el, lat, rates);
    return {asc.longitude, desc.longitude};
}

/// Arithmetic series of crossings for one satellite over [window_start, window_end].
///
/// The first ascending and descending crossings are given at epochs within
/// one nodal period of the element epoch; the series is extended backwards
/// when the window starts earlier. Each branch holds floor(span / P_n)
/// passes.
inline PassSet pass_series(const FirstCrossing& asc, const FirstCrossing& desc, double shift,
                           double period, double window_end, double window_start = 0.0) {
    PassSet out;
    out.shift = shift;
    out.nodal_period = period;
    out.window_start = window_start;
    out.window_end = window_end;
    if (!(window_end > window_start) || !(period > 0.0)) {
        return out;
    }
    const auto count = static_cast<long>(std::floor((window_end - window_start) / period));
    auto emit = [&](const FirstCrossing& first, Direction dir) {
        // Move the first crossing to the earliest epoch that is still >= window_start.
        const double k = std::floor((first.epoch - window_start) / period);
        const double epoch0 = first.epoch - k * period;
        const double lon0 = first.longitude - k * shift;
        for (long j = 0; j < count; ++j) {
            Pass p;
            p.epoch = epoch0 + static_cast<double>(j) * period;
            p.longitude = wrap_pi(lon0 + static_cast<double>(j) * shift);
            p.direction = dir;
            out.passes.push_back(p);
        }
    };
    emit(asc, Direction::Ascending);
    emit(desc, Direction::Descending);
    std::stable_sort(out.passes.begin(), out.passes.end(),
                     [](const Pass& a, const Pass& b) { return a.epoch < b.epoch; });
    return out;
}

namespace detail {

/// Appends a copy of the single-satellite series `base` delayed by `lag` of a
/// revolution (lag in [0, 1)) and rotated by `lon_offset`. Each branch keeps
/// its pass count; passes pushed beyond one period past the window start are
/// wrapped one period earlier.
inline void append_shifted(const PassSet& base, double lag, double lon_offset, int plane,
                           int sat, std::vector<Pass>& out) {
    for (Direction dir : {Direction::Ascending, Direction::Descending}) {
        const Pass* first = nullptr;
        for (const Pass& p : base.passes) {
            if (p.direction == dir) {
                first = &p;
                break;
            }
        }
        if (first == nullptr) {
            continue;
        }
        double epoch0 = first->epoch + lag * base.nodal_period;
        double lon0 = first->longitude + lag * base.shift;
        if (epoch0 - base.nodal_period >= base.window_start) {
            epoch0 -= base.nodal_period;
            lon0 -= base.shift;
        }
        long j = 0;
        for (const Pass& p : base.passes) {
            if (p.direction != dir) {
                continue;
            }
            Pass q = p;
            q.epoch = epoch0 + static_cast<double>(j) * base.nodal_period;
            q.longitude = wrap_pi(lon0 + static_cast<double>(j) * base.shift + lon_offset);
            q.plane = plane;
            q.satellite = sat;
            out.push_back(q);
            ++j;
        }
    }
}

inline double frac01(double x) {
    double f = x - std::floor(x);
    return f >= 1.0 ? 0.0 : f;
}

} // namespace detail

/// Expands a single-satellite pass set to the full Walker constellation.
///
/// Plane m adds 2πm/p to every longitude. In-plane satellite l trails the
/// reference by l/s of a revolution, so its passes occur (l/s)·P_n later and
/// (l/s)·Δλ further along. The phasing factor puts plane m ahead by 2πmf/t
/// in argument of latitude.
inline PassSet walker_expand(const PassSet& base, const WalkerConfig& cfg,
                             WalkerPhasing phasing = WalkerPhasing::Kinematic) {
    cfg.validate();
    PassSet out = base;
    out.passes.clear();
    const int s = cfg.per_plane();
    for (int m = 0; m < cfg.planes; ++m) {
        double plane_lon = kTwoPi * m / cfg.planes;
        double plane_lag = 0.0;
        const double lead = static_cast<double>(m) * cfg.phasing / cfg.total;
        if (phasing == WalkerPhasing::LongitudeOffset) {
            plane_lon += kTwoPi * lead;
        } else {
            plane_lag = detail::frac01(-lead);
        }
        for (int l = 0; l < s; ++l) {
            const double lag = detail::frac01(plane_lag + static_cast<double>(l) / s);
            detail::append_shifted(base, lag, plane_lon, m, l, out.passes);
        }
    }
    std::stable_sort(out.passes.begin(), out.passes.end(),
                     [](const Pass& a, const Pass& b) { return a.epoch < b.epoch; });
    return out;
}

/// Pass set for an arbitrary plane layout; each plane shares the reference
/// satellite's a, e, i and ω.
inline PassSet expand_planes(const PassSet& base, const std::vector<PlaneOverride>& planes) {
    PassSet out = base;
    out.passes.clear();
    for (std::size_t m = 0; m < planes.size(); ++m) {
        for (std::size_t l = 0; l < planes[m].phase_offsets.size(); ++l) {
            const double lag = detail::frac01(-planes[m].phase_offsets[l] / kTwoPi);
            detail::append_shifted(base, lag, planes[m].raan_offset, static_cast<int>(m),
                                   static_cast<int>(l), out.passes);
        }
    }
    std::stable_sort(out.passes.begin(), out.passes.end(),
                     [](const Pass& a, const Pass& b) { return a.epoch < b.epoch; });
    return out;
}

/// One sample of the ground track near a crossing, relative to the crossing.
struct TrackSample {
    double dlon = 0.0; // longitude offset from the crossing, rotation included [rad]
    double lat = 0.0;  // latitude of the track point [rad]
    double dt = 0.0;   // time offset from the crossing [s]
};

struct TrackSegment {
    Direction direction = Direction::Ascending;
    std::vector<TrackSample> samples; // ordered by time
    double sample_step = 0.0;         // largest time step between samples [s]
};

/// Samples the ground track around the crossing of `lat` on one branch.
///
/// The span covers every argument of latitude whose track point lies within
/// `reach` of `lat`, widened by 10 % on each side. Longitudes are offsets from
/// the crossing and include Earth rotation over the time offset.
inline TrackSegment ground_track_segment(const OrbitElements& el, double lat, Direction dir,
                                         double reach, const OrbitRates& rates,
                                         std::size_t n_points) {
    if (n_points < 3) {
        throw ConfigError("a track segment needs at least 3 samples");
    }
    const double inc = el.inclination;
    const double u_cross_asc = crossing_argument_of_latitude(inc, lat);
    const double max_lat = std::asin(std::sin(inc)); // apex latitude, |.| <= π/2

    // Ascending-branch bounds on argument of latitude.
    auto u_at = [&](double target_lat) {
        if (target_lat >= max_lat) {
            return 0.5 * kPi;
        }
        if (target_lat <= -max_lat) {
            return -0.5 * kPi;
        }
        return std::asin(std::sin(target_lat) / std::sin(inc));
    };
    double lo = u_at(lat - reach) - u_cross_asc;
    double hi = u_at(lat + reach) - u_cross_asc;
    const double pad = 0.1 * (hi - lo);
    lo -= pad;
    hi += pad;

    const double u_cross = dir == Direction::Ascending ? u_cross_asc : kPi - u_cross_asc;
    if (dir == Direction::Descending) {
        // Mirror: the descending branch runs the same latitudes in reverse.
        std::swap(lo, hi);
        lo = -lo;
        hi = -hi;
    }
    const double nu_cross = u_cross - el.arg_perigee;
    const double ra_cross = detail::right_ascension(u_cross, 0.0, inc);

    TrackSegment seg;
    seg.direction = dir;
    seg.samples.reserve(n_points);
    double prev_dt = 0.0;
    for (std::size_t k = 0; k < n_points; ++k) {
        const double du = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n_points - 1);
        const double u = u_cross + du;
        TrackSample s;
        s.dt = time_between(el, nu_cross, nu_cross + du, rates.nodal_period);
        s.lat = std::asin(std::sin(inc) * std::sin(u));
        s.dlon = wrap_pi(detail::right_ascension(u, 0.0, inc) - ra_cross) +
                 s.dt / rates.nodal_period * rates.shift;
        if (k > 0) {
            seg.sample_step = std::max(seg.sample_step, s.dt - prev_dt);
        }
        prev_dt = s.dt;
        seg.samples.push_back(s);
    }
    return seg;
}

} // namespace revisit
