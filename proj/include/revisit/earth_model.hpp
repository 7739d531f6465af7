#pragma once

// Oblate-spheroid Earth: physical constants and the geodetic radius.

#include <cmath>
#include <numbers>

namespace revisit {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kSecondsPerDay = 86400.0;
inline constexpr double kSecondsPerHour = 3600.0;

constexpr double deg2rad(double deg) { return deg * (kPi / 180.0); }
constexpr double rad2deg(double rad) { return rad * (180.0 / kPi); }

/// Physical constants of the Earth model.
///
/// Defaults are WGS-84 radii with EGM96 J2 and gravitational parameter.
struct EarthConstants {
    double equatorial_radius_km = 6378.137;
    double polar_radius_km = 6356.7523142;
    double rotation_rate_rad_s = 7.2921158553e-5;
    double mu_km3_s2 = 398600.4418;
    double j2 = 1.08262668e-3;

    constexpr double j2_squared() const { return j2 * j2; }

    constexpr bool valid() const {
        return equatorial_radius_km > polar_radius_km && polar_radius_km > 0.0 &&
               rotation_rate_rad_s > 0.0 && mu_km3_s2 > 0.0 && j2 >= 0.0 && j2 < 0.01;
    }
};

inline constexpr EarthConstants kWgs84{};

/// Radius of the reference spheroid at latitude `lat` [rad], in km.
inline double geodetic_radius(double lat, const EarthConstants& earth = kWgs84) {
    const double ra = earth.equatorial_radius_km;
    const double rb = earth.polar_radius_km;
    const double c = std::cos(lat);
    const double s = std::sin(lat);
    const double num = (ra * ra * c) * (ra * ra * c) + (rb * rb * s) * (rb * rb * s);
    const double den = (ra * c) * (ra * c) + (rb * s) * (rb * s);
    return std::sqrt(num / den);
}

/// Wraps an angle into [-π, π).
inline double wrap_pi(double angle) {
    double w = std::fmod(angle + kPi, kTwoPi);
    if (w < 0.0) {
        w += kTwoPi;
    }
    // fmod can return exactly 2π after the correction above for tiny negatives
    if (w >= kTwoPi) {
        w -= kTwoPi;
    }
    return w - kPi;
}

/// Wraps an angle into [0, 2π).
inline double wrap_two_pi(double angle) {
    double w = std::fmod(angle, kTwoPi);
    if (w < 0.0) {
        w += kTwoPi;
    }
    if (w >= kTwoPi) {
        w -= kTwoPi;
    }
    return w;
}

} // namespace revisit
