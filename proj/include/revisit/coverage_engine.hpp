#pragma once

// Longitude-grid access computation and revisit statistics at a target latitude.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "revisit/earth_model.hpp"
#include "revisit/errors.hpp"
#include "revisit/orbit.hpp"
#include "revisit/pass_schedule.hpp"
#include "revisit/sensor_geometry.hpp"

namespace revisit {

/// Uniform grid of longitudes over [-π, π), first point at -π.
struct LongitudeGrid {
    double spacing = 0.0;
    std::size_t count = 0;

    double point(std::size_t idx) const { return -kPi + spacing * static_cast<double>(idx); }

    /// Grid index for an unwrapped integer position.
    std::size_t wrap_index(std::int64_t pos) const {
        const auto n = static_cast<std::int64_t>(count);
        std::int64_t r = pos % n;
        return static_cast<std::size_t>(r < 0 ? r + n : r);
    }
};

inline LongitudeGrid build_grid(double resolution) {
    if (!(resolution > 0.0) || resolution > deg2rad(1.0) + 1e-15) {
        throw ConfigError("grid resolution must lie in (0, 1] deg");
    }
    LongitudeGrid g;
    g.count = static_cast<std::size_t>(std::llround(kTwoPi / resolution));
    g.spacing = kTwoPi / static_cast<double>(g.count);
    return g;
}

struct Interval {
    double start = 0.0;
    double end = 0.0;

    friend bool operator<(const Interval& a, const Interval& b) {
        return a.start < b.start || (a.start == b.start && a.end < b.end);
    }
};

/// Access intervals per grid point over [0, window].
struct AccessTable {
    std::vector<std::vector<Interval>> points;
    double window = 0.0;

    AccessTable() = default;
    AccessTable(std::size_t n_points, double window_s) : points(n_points), window(window_s) {}

    std::size_t interval_count() const {
        std::size_t n = 0;
        for (const auto& p : points) {
            n += p.size();
        }
        return n;
    }
};

/// Footprint ellipse at the target latitude: semi-axes Λ (longitude) and θ (latitude).
struct Ellipse {
    double lon_half = 0.0; // Λ
    double lat_half = 0.0; // θ
};

struct GridAccess {
    std::size_t index = 0;
    Interval interval;
};

/// Finds, for every grid point, the first and last segment samples whose
/// footprint ellipse contains it, and turns them into an access interval.
///
/// Each sample's ellipse cuts the target parallel in a longitude interval;
/// grid points are painted in sample order with a skip-list so every point
/// is visited once per direction.
class PassAccessKernel {
public:
    void run(const Pass& pass, const TrackSegment& seg, const Ellipse& ellipse, double lat,
             const LongitudeGrid& grid, double window, std::vector<GridAccess>& out) {
        const std::size_t n = seg.samples.size();
        lo_.assign(n, 0);
        hi_.assign(n, -1);
        std::int64_t gmin = std::numeric_limits<std::int64_t>::max();
        std::int64_t gmax = std::numeric_limits<std::int64_t>::min();
        const double inv_spacing = 1.0 / grid.spacing;
        constexpr double kSlack = 1e-9;
        for (std::size_t k = 0; k < n; ++k) {
            const TrackSample& s = seg.samples[k];
            const double dlat = (lat - s.lat) / ellipse.lat_half;
            const double q = 1.0 - dlat * dlat;
            if (q < 0.0) {
                continue;
            }
            const double half = ellipse.lon_half * std::sqrt(q);
            const double centre = pass.longitude + s.dlon + kPi;
            const auto a = static_cast<std::int64_t>(std::ceil((centre - half) * inv_spacing - kSlack));
            const auto b = static_cast<std::int64_t>(std::floor((centre + half) * inv_spacing + kSlack));
            if (b < a) {
                continue;
            }
            lo_[k] = a;
            hi_[k] = b;
            gmin = std::min(gmin, a);
            gmax = std::max(gmax, b);
        }
        if (gmax < gmin) {
            return;
        }
        const auto width = static_cast<std::size_t>(gmax - gmin + 1);
        first_.assign(width, kUnset);
        last_.assign(width, kUnset);
        paint(gmin, width, first_, false);
        paint(gmin, width, last_, true);

        for (std::size_t j = 0; j < width; ++j) {
            if (first_[j] == kUnset) {
                continue;
            }
            Interval iv{pass.epoch + seg.samples[first_[j]].dt, pass.epoch + seg.samples[last_[j]].dt};
            if (iv.end < 0.0 || iv.start > window) {
                continue;
            }
            iv.start = std::max(iv.start, 0.0);
            iv.end = std::min(iv.end, window);
            out.push_back({grid.wrap_index(gmin + static_cast<std::int64_t>(j)), iv});
        }
    }

private:
    static constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();

    // Assigns to each unpainted cell the first sample (in forward or reverse
    // order) whose interval covers it.
    void paint(std::int64_t gmin, std::size_t width, std::vector<std::size_t>& dst, bool reverse) {
        next_.resize(width + 1);
        for (std::size_t j = 0; j <= width; ++j) {
            next_[j] = j;
        }
        auto find = [this](std::size_t j) {
            std::size_t root = j;
            while (next_[root] != root) {
                root = next_[root];
            }
            while (next_[j] != root) {
                const std::size_t up = next_[j];
                next_[j] = root;
                j = up;
            }
            return root;
        };
        const std::size_t n = lo_.size();
        for (std::size_t step = 0; step < n; ++step) {
            const std::size_t k = reverse ? n - 1 - step : step;
            if (hi_[k] < lo_[k]) {
                continue;
            }
            const auto a = static_cast<std::size_t>(lo_[k] - gmin);
            const auto b = static_cast<std::size_t>(hi_[k] - gmin);
            for (std::size_t j = find(a); j <= b; j = find(j)) {
                dst[j] = k;
                next_[j] = j + 1;
            }
        }
    }

    std::vector<std::int64_t> lo_;
    std::vector<std::int64_t> hi_;
    std::vector<std::size_t> first_;
    std::vector<std::size_t> last_;
    std::vector<std::size_t> next_;
};

/// Access intervals of a single pass on the grid.
inline std::vector<GridAccess> pass_accesses(const Pass& pass, const TrackSegment& seg,
                                             const Ellipse& ellipse, double lat,
                                             const LongitudeGrid& grid, double window) {
    std::vector<GridAccess> out;
    PassAccessKernel kernel;
    kernel.run(pass, seg, ellipse, lat, grid, window, out);
    return out;
}

struct RevisitReport {
    std::optional<double> mrt_hours; // empty when the window was exceeded
    std::optional<double> art_hours;
    double coverage_fraction = 0.0;
    std::optional<double> time_to_full_coverage_hours;
    std::size_t uncovered_count = 0;
    std::size_t pass_count = 0;
    std::size_t gap_count = 0;
    bool window_exceeded = true;
    bool footprint_clamped = false;
};

/// Sorts and merges each point's intervals in place. Intervals separated by
/// no more than `join_tolerance` seconds are joined.
inline void merge_intervals(std::vector<Interval>& ivs, double join_tolerance) {
    if (ivs.empty()) {
        return;
    }
    std::sort(ivs.begin(), ivs.end());
    std::size_t w = 0;
    for (std::size_t r = 1; r < ivs.size(); ++r) {
        if (ivs[r].start <= ivs[w].end + join_tolerance) {
            ivs[w].end = std::max(ivs[w].end, ivs[r].end);
        } else {
            ivs[++w] = ivs[r];
        }
    }
    ivs.resize(w + 1);
}

/// Gaps between consecutive (merged) accesses of one point [s].
inline std::vector<double> point_gaps(std::span<const Interval> merged) {
    std::vector<double> gaps;
    for (std::size_t k = 1; k < merged.size(); ++k) {
        gaps.push_back(merged[k].start - merged[k - 1].end);
    }
    return gaps;
}

/// Revisit statistics over all grid points. Gaps touching the window
/// boundaries are not counted. MRT is reported only when every point is
/// accessed at least once.
inline RevisitReport revisit_stats(AccessTable& table, double join_tolerance = 0.0) {
    RevisitReport rep;
    const std::size_t n = table.points.size();
    if (n == 0) {
        return rep;
    }
    double max_gap = -1.0;
    double gap_sum = 0.0;
    double latest_first = 0.0;
    std::size_t covered = 0;
    for (auto& ivs : table.points) {
        merge_intervals(ivs, join_tolerance);
        if (ivs.empty()) {
            continue;
        }
        ++covered;
        latest_first = std::max(latest_first, ivs.front().start);
        for (std::size_t k = 1; k < ivs.size(); ++k) {
            const double gap = ivs[k].start - ivs[k - 1].end;
            max_gap = std::max(max_gap, gap);
            gap_sum += gap;
            ++rep.gap_count;
        }
    }
    rep.coverage_fraction = static_cast<double>(covered) / static_cast<double>(n);
    rep.uncovered_count = n - covered;
    if (rep.gap_count > 0) {
        rep.art_hours = gap_sum / static_cast<double>(rep.gap_count) / kSecondsPerHour;
    }
    rep.window_exceeded = covered < n || rep.gap_count == 0;
    if (!rep.window_exceeded) {
        rep.mrt_hours = max_gap / kSecondsPerHour;
    }
    if (covered == n) {
        rep.time_to_full_coverage_hours = latest_first / kSecondsPerHour;
    }
    return rep;
}

/// Everything needed to evaluate one configuration.
struct Scenario {
    OrbitElements orbit;                            // reference satellite
    std::optional<WalkerConfig> walker;             // symmetric constellation
    std::optional<std::vector<PlaneOverride>> planes; // explicit layout, exclusive with walker
    SensorSpec sensor;
    double latitude = 0.0;                          // [rad]
    double window_s = 60.0 * kSecondsPerDay;
    double grid_resolution = deg2rad(0.1);
    std::size_t segment_samples = 1000;
    NodalPeriodForm nodal_form = NodalPeriodForm::Standard;
    WalkerPhasing walker_phasing = WalkerPhasing::Kinematic;
    EarthConstants earth = kWgs84;
    unsigned threads = 1;
};

inline constexpr double kMaxTargetLatitude = deg2rad(80.0);

/// Intermediate products of an evaluation, kept for diagnostics and tests.
struct Analysis {
    OrbitRates rates;
    FootprintAtLatitude footprint_ascending;
    FootprintAtLatitude footprint_descending;
    TrackSegment segment_ascending;
    TrackSegment segment_descending;
    PassSet passes;
    LongitudeGrid grid;
    AccessTable table;
    RevisitReport report;
};

inline PassSet build_pass_set(const Scenario& sc, const OrbitRates& rates, double margin) {
    const auto [asc, desc] = first_crossings(sc.orbit, sc.latitude, rates);
    PassSet base = pass_series(asc, desc, rates.shift, rates.nodal_period, sc.window_s + margin,
                               -margin);
    if (sc.planes) {
        return expand_planes(base, *sc.planes);
    }
    if (sc.walker) {
        return walker_expand(base, *sc.walker, sc.walker_phasing);
    }
    return base;
}

inline Analysis analyze_detailed(const Scenario& sc) {
    validate(sc.orbit, sc.earth);
    if (std::abs(sc.latitude) > kMaxTargetLatitude + 1e-12) {
        throw ConfigError("target latitude beyond +/-80 deg is not supported");
    }
    if (!(sc.window_s > 0.0)) {
        throw ConfigError("analysis window must be positive");
    }
    if (sc.walker && sc.planes) {
        throw ConfigError("walker pattern and explicit planes are mutually exclusive");
    }
    if (sc.segment_samples < 3) {
        throw ConfigError("segment samples must be at least 3");
    }
    if (sc.walker) {
        sc.walker->validate();
    }

    Analysis an;
    an.rates = OrbitRates::of(sc.orbit, sc.nodal_form, sc.earth);
    const CrossingGeometry geo = radius_at_latitude(sc.orbit, sc.latitude);
    an.footprint_ascending = resolve_footprint(sc.sensor, sc.latitude,
                                               orbit_radius(sc.orbit, geo.nu_ascending), sc.earth);
    an.footprint_descending = resolve_footprint(
        sc.sensor, sc.latitude, orbit_radius(sc.orbit, geo.nu_descending), sc.earth);
    an.segment_ascending =
        ground_track_segment(sc.orbit, sc.latitude, Direction::Ascending,
                             an.footprint_ascending.ground_range, an.rates, sc.segment_samples);
    an.segment_descending =
        ground_track_segment(sc.orbit, sc.latitude, Direction::Descending,
                             an.footprint_descending.ground_range, an.rates, sc.segment_samples);
    an.passes = build_pass_set(sc, an.rates, an.rates.nodal_period);
    an.grid = build_grid(sc.grid_resolution);
    an.table = AccessTable(an.grid.count, sc.window_s);

    const Ellipse asc_ellipse{an.footprint_ascending.dihedral_half, an.footprint_ascending.ground_range};
    const Ellipse desc_ellipse{an.footprint_descending.dihedral_half,
                               an.footprint_descending.ground_range};

    const auto& passes = an.passes.passes;
    const unsigned threads = std::max(1u, std::min<unsigned>(sc.threads, 64u));
    const std::size_t chunks = std::min<std::size_t>(threads, std::max<std::size_t>(passes.size(), 1));
    std::vector<std::vector<GridAccess>> partial(chunks);
    auto work = [&](std::size_t c) {
        PassAccessKernel kernel;
        const std::size_t begin = passes.size() * c / chunks;
        const std::size_t end = passes.size() * (c + 1) / chunks;
        for (std::size_t k = begin; k < end; ++k) {
            const Pass& p = passes[k];
            const bool asc = p.direction == Direction::Ascending;
            kernel.run(p, asc ? an.segment_ascending : an.segment_descending,
                       asc ? asc_ellipse : desc_ellipse, sc.latitude, an.grid, sc.window_s,
                       partial[c]);
        }
    };
    if (chunks == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(chunks);
        for (std::size_t c = 0; c < chunks; ++c) {
            pool.emplace_back(work, c);
        }
    }
    for (const auto& part : partial) {
        for (const GridAccess& ga : part) {
            an.table.points[ga.index].push_back(ga.interval);
        }
    }

    const double join = std::max(an.segment_ascending.sample_step, an.segment_descending.sample_step);
    an.report = revisit_stats(an.table, join);
    an.report.pass_count = static_cast<std::size_t>(
        std::count_if(passes.begin(), passes.end(),
                      [&](const Pass& p) { return p.epoch >= 0.0 && p.epoch <= sc.window_s; }));
    an.report.footprint_clamped = an.footprint_ascending.clamped || an.footprint_descending.clamped;
    return an;
}

/// Revisit metrics for a scenario.
inline RevisitReport analyze(const Scenario& sc) { return analyze_detailed(sc).report; }

} // namespace revisit
