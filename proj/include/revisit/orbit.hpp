#pragma once

// Orbital elements and the secular J2 rates used to place successive passes.

#include <cmath>
#include <string>

#include "revisit/earth_model.hpp"
#include "revisit/errors.hpp"

namespace revisit {

/// Classical elements of a plane's reference satellite. Angles in radians.
struct OrbitElements {
    double semi_major_axis_km = 0.0;
    double eccentricity = 0.0;
    double inclination = 0.0;
    double raan = 0.0;
    double arg_perigee = 0.0;
    double true_anomaly = 0.0;

    static OrbitElements circular(double altitude_km, double inclination,
                                  const EarthConstants& earth = kWgs84) {
        OrbitElements el;
        el.semi_major_axis_km = earth.equatorial_radius_km + altitude_km;
        el.inclination = inclination;
        return el;
    }

    double semi_latus_rectum() const {
        return semi_major_axis_km * (1.0 - eccentricity * eccentricity);
    }
};

/// Throws ConfigError if the elements describe an orbit that cannot be used.
inline void validate(const OrbitElements& el, const EarthConstants& earth = kWgs84) {
    if (!(el.eccentricity >= 0.0 && el.eccentricity < 1.0)) {
        throw ConfigError("eccentricity must lie in [0, 1), got " + std::to_string(el.eccentricity));
    }
    if (!(el.inclination >= 0.0 && el.inclination <= kPi)) {
        throw ConfigError("inclination must lie in [0, 180] deg, got " +
                          std::to_string(rad2deg(el.inclination)));
    }
    if (!(el.semi_major_axis_km * (1.0 - el.eccentricity) > earth.polar_radius_km)) {
        throw ConfigError("perigee radius " +
                          std::to_string(el.semi_major_axis_km * (1.0 - el.eccentricity)) +
                          " km is below the Earth's surface");
    }
}

/// Which expansion of the J2 nodal period to use.
///
/// `Standard` is the textbook first-order expansion with (Ra/p)^2. `LinearRatio`
/// keeps a single Ra/p factor. Only `Standard` reproduces the reference
/// validation tables, so it is the default; the other form is kept for
/// comparison runs.
enum class NodalPeriodForm { Standard, LinearRatio };

inline double mean_motion(double a_km, const EarthConstants& earth = kWgs84) {
    return std::sqrt(earth.mu_km3_s2 / (a_km * a_km * a_km));
}

/// Two-body period [s] for semi-major axis `a_km`.
inline double keplerian_period(double a_km, const EarthConstants& earth = kWgs84) {
    return kTwoPi * std::sqrt(a_km * a_km * a_km / earth.mu_km3_s2);
}

/// Time between successive ascending-node crossings under secular J2 [s].
inline double nodal_period(double a_km, double e, double inc,
                           NodalPeriodForm form = NodalPeriodForm::Standard,
                           const EarthConstants& earth = kWgs84) {
    const double p = a_km * (1.0 - e * e);
    const double ratio = earth.equatorial_radius_km / p;
    const double scale = form == NodalPeriodForm::Standard ? ratio * ratio : ratio;
    const double s2 = std::sin(inc) * std::sin(inc);
    const double bracket = std::sqrt(1.0 - e * e) * (2.0 - 3.0 * s2) + (4.0 - 5.0 * s2);
    return keplerian_period(a_km, earth) / (1.0 + 0.75 * earth.j2 * scale * bracket);
}

/// Secular regression rate of the ascending node [rad/s], J2 and J2² terms.
inline double raan_drift_rate(double a_km, double e, double inc,
                              const EarthConstants& earth = kWgs84) {
    const double n = mean_motion(a_km, earth);
    const double p = a_km * (1.0 - e * e);
    const double r2 = (earth.equatorial_radius_km / p) * (earth.equatorial_radius_km / p);
    const double ci = std::cos(inc);
    const double s2 = std::sin(inc) * std::sin(inc);
    const double first = -1.5 * n * earth.j2 * r2 * ci;
    const double second = 3.0 / 32.0 * n * earth.j2_squared() * r2 * r2 * ci *
                          (12.0 - 4.0 * e * e - (80.0 + 5.0 * e * e) * s2);
    return first + second;
}

/// Secular rate of the argument of perigee [rad/s], first order in J2.
inline double arg_perigee_rate(double a_km, double e, double inc,
                               const EarthConstants& earth = kWgs84) {
    const double n = mean_motion(a_km, earth);
    const double p = a_km * (1.0 - e * e);
    const double r2 = (earth.equatorial_radius_km / p) * (earth.equatorial_radius_km / p);
    const double s2 = std::sin(inc) * std::sin(inc);
    return 0.75 * n * earth.j2 * r2 * (4.0 - 5.0 * s2);
}

/// Secular mean-anomaly rate [rad/s], mean motion plus the first-order J2 term.
inline double mean_anomaly_rate(double a_km, double e, double inc,
                                const EarthConstants& earth = kWgs84) {
    const double n = mean_motion(a_km, earth);
    const double p = a_km * (1.0 - e * e);
    const double r2 = (earth.equatorial_radius_km / p) * (earth.equatorial_radius_km / p);
    const double s2 = std::sin(inc) * std::sin(inc);
    return n * (1.0 + 0.75 * earth.j2 * r2 * std::sqrt(1.0 - e * e) * (2.0 - 3.0 * s2));
}

/// Longitude shift of successive node crossings [rad/rev]; negative is westward.
inline double ground_track_shift(double nodal_period_s, double raan_rate,
                                 const EarthConstants& earth = kWgs84) {
    return nodal_period_s * (-earth.rotation_rate_rad_s + raan_rate);
}

inline constexpr double kTropicalYearDays = 365.2421897;

/// Mean apparent motion of the Sun [rad/s].
inline constexpr double sun_synchronous_rate() {
    return kTwoPi / (kTropicalYearDays * kSecondsPerDay);
}

/// Inclination [rad] that makes the node drift match the mean solar rate.
///
/// Bisection on (π/2, π]; the drift rate is monotone there for LEO.
inline double sso_inclination(double a_km, double e, const EarthConstants& earth = kWgs84) {
    if (!(e >= 0.0 && e < 1.0)) {
        throw ConfigError("eccentricity must lie in [0, 1)");
    }
    if (!(a_km * (1.0 - e) > earth.polar_radius_km)) {
        throw ConfigError("orbit intersects the Earth");
    }
    const double target = sun_synchronous_rate();
    auto residual = [&](double inc) { return raan_drift_rate(a_km, e, inc, earth) - target; };
    double lo = 0.5 * kPi;
    double hi = kPi;
    if (residual(hi) < 0.0) {
        throw NoSunSynchronousSolution("no sun-synchronous inclination exists for a = " +
                                       std::to_string(a_km) + " km");
    }
    for (int iter = 0; iter < 200 && hi - lo > 1e-15; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (residual(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace revisit
