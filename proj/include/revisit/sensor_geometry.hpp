#pragma once

// Sensor field-of-regard geometry at the target latitude: half ground-range
// angle θ and the longitude half-width Λ of the footprint.

#include <algorithm>
#include <cmath>
#include <string>

#include "revisit/earth_model.hpp"
#include "revisit/errors.hpp"
#include "revisit/orbit.hpp"

namespace revisit {

enum class SensorMode { Boresight, Elevation };

/// Field of regard, either a boresight half-cone ψ or a minimum elevation ε.
struct SensorSpec {
    SensorMode mode = SensorMode::Elevation;
    double angle = 0.0; // ψ or ε [rad], depending on mode

    static SensorSpec boresight(double half_cone) { return {SensorMode::Boresight, half_cone}; }
    static SensorSpec elevation(double min_elevation) {
        return {SensorMode::Elevation, min_elevation};
    }

    bool valid() const {
        if (mode == SensorMode::Boresight) {
            return angle >= 0.0 && angle < 0.5 * kPi;
        }
        return angle >= 0.0 && angle <= 0.5 * kPi;
    }
};

struct FootprintAtLatitude {
    double ground_range = 0.0;   // θ [rad]
    double dihedral_half = 0.0;  // Λ [rad]
    double slant_range_km = 0.0; // ρ
    double gamma = 0.0;          // angle at the footprint edge, obtuse [rad]
    bool clamped = false;        // boresight cone exceeded the horizon
};

struct CrossingGeometry {
    double radius_km = 0.0;   // r_s at the crossing
    double nu_ascending = 0.0;  // true anomaly of the ascending crossing [rad]
    double nu_descending = 0.0; // true anomaly of the descending crossing [rad]
};

/// Argument of latitude of the ascending crossing of `lat`, in [-π/2, π/2].
/// Throws LatitudeUnreachable when the track never reaches `lat`.
inline double crossing_argument_of_latitude(double inclination, double lat) {
    const double si = std::sin(inclination);
    const double ratio = si == 0.0 ? (std::sin(lat) == 0.0 ? 0.0 : 2.0) : std::sin(lat) / si;
    if (std::abs(ratio) > 1.0 + 1e-12) {
        throw LatitudeUnreachable("latitude " + std::to_string(rad2deg(lat)) +
                                  " deg is not reached by an orbit inclined at " +
                                  std::to_string(rad2deg(inclination)) + " deg");
    }
    return std::asin(std::clamp(ratio, -1.0, 1.0));
}

inline CrossingGeometry radius_at_latitude(const OrbitElements& el, double lat) {
    const double u_asc = crossing_argument_of_latitude(el.inclination, lat);
    CrossingGeometry out;
    out.nu_ascending = u_asc - el.arg_perigee;
    out.nu_descending = kPi - u_asc - el.arg_perigee;
    // Both branches share r_s for circular orbits; report the ascending one.
    out.radius_km = el.semi_latus_rectum() / (1.0 + el.eccentricity * std::cos(out.nu_ascending));
    return out;
}

/// Orbit radius at true anomaly `nu`.
inline double orbit_radius(const OrbitElements& el, double nu) {
    return el.semi_latus_rectum() / (1.0 + el.eccentricity * std::cos(nu));
}

inline double horizon_angle(double earth_radius_km, double orbit_radius_km) {
    return std::acos(earth_radius_km / orbit_radius_km);
}

/// θ from a minimum elevation constraint ε.
inline double ground_range_from_elevation(double earth_radius_km, double orbit_radius_km,
                                          double min_elevation) {
    return std::acos(earth_radius_km / orbit_radius_km * std::cos(min_elevation)) - min_elevation;
}

/// Full boresight solution: θ, γ and ρ for half-cone ψ.
///
/// γ takes the obtuse branch of the sine law; ψ beyond the tangent cone is
/// clamped to the horizon and flagged.
inline FootprintAtLatitude boresight_footprint(double earth_radius_km, double orbit_radius_km,
                                               double half_cone) {
    FootprintAtLatitude fp;
    const double sin_gamma = orbit_radius_km * std::sin(half_cone) / earth_radius_km;
    if (sin_gamma >= 1.0) {
        fp.clamped = sin_gamma > 1.0;
        fp.ground_range = horizon_angle(earth_radius_km, orbit_radius_km);
        fp.gamma = 0.5 * kPi;
        fp.slant_range_km = std::sqrt(orbit_radius_km * orbit_radius_km -
                                      earth_radius_km * earth_radius_km);
        return fp;
    }
    fp.gamma = kPi - std::asin(sin_gamma);
    fp.slant_range_km = earth_radius_km * std::cos(fp.gamma) + orbit_radius_km * std::cos(half_cone);
    fp.ground_range = std::asin(std::clamp(fp.slant_range_km * std::sin(half_cone) / earth_radius_km,
                                           -1.0, 1.0));
    return fp;
}

inline double ground_range_from_boresight(double earth_radius_km, double orbit_radius_km,
                                          double half_cone) {
    return boresight_footprint(earth_radius_km, orbit_radius_km, half_cone).ground_range;
}

/// Longitude half-width Λ of a cap of angular radius θ centred on latitude `lat`.
inline double dihedral_half_angle(double ground_range, double lat) {
    const double s2 = std::sin(lat) * std::sin(lat);
    const double c2 = std::cos(lat) * std::cos(lat);
    const double arg = (std::cos(ground_range) - s2) / c2;
    if (!(arg >= -1.0 - 1e-12) || !std::isfinite(arg)) {
        throw PoleOverlap("footprint of half ground range " + std::to_string(rad2deg(ground_range)) +
                          " deg covers every longitude at latitude " +
                          std::to_string(rad2deg(lat)) + " deg");
    }
    return std::acos(std::clamp(arg, -1.0, 1.0));
}

/// Resolves a sensor specification to θ and Λ at `lat` for an orbit radius `r_s`.
inline FootprintAtLatitude resolve_footprint(const SensorSpec& sensor, double lat,
                                             double orbit_radius_km,
                                             const EarthConstants& earth = kWgs84) {
    if (!sensor.valid()) {
        throw ConfigError("sensor angle out of range: " + std::to_string(rad2deg(sensor.angle)) +
                          " deg");
    }
    const double rphi = geodetic_radius(lat, earth);
    if (!(orbit_radius_km > rphi)) {
        throw ConfigError("orbit radius is below the Earth's surface at the target latitude");
    }
    FootprintAtLatitude fp;
    if (sensor.mode == SensorMode::Boresight) {
        fp = boresight_footprint(rphi, orbit_radius_km, sensor.angle);
    } else {
        fp.ground_range = ground_range_from_elevation(rphi, orbit_radius_km, sensor.angle);
        fp.gamma = sensor.angle + 0.5 * kPi;
        fp.slant_range_km = std::sqrt(rphi * rphi + orbit_radius_km * orbit_radius_km -
                                      2.0 * rphi * orbit_radius_km * std::cos(fp.ground_range));
    }
    fp.dihedral_half = dihedral_half_angle(fp.ground_range, lat);
    return fp;
}

} // namespace revisit
