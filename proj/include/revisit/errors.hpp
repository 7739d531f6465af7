#pragma once

#include <stdexcept>
#include <string>

namespace revisit {

/// Base class for all errors raised by the revisit library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The orbit ground track never reaches the requested latitude (|φ| > i).
class LatitudeUnreachable : public Error {
public:
    using Error::Error;
};

/// The footprint reaches over the pole at the target latitude, so the
/// longitude half-width is undefined.
class PoleOverlap : public Error {
public:
    using Error::Error;
};

/// No retrograde inclination makes the orbit sun-synchronous.
class NoSunSynchronousSolution : public Error {
public:
    using Error::Error;
};

/// Newton iteration on Kepler's equation failed to converge.
class KeplerNonConvergence : public Error {
public:
    using Error::Error;
};

/// Invalid user configuration (bad ranges, conflicting options).
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace revisit
