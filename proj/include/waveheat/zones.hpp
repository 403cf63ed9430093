#pragma once

// Zone classification of the spectral parameter z = mu_k |lambda| and the key
// decay function rho(z) = z^2 / (1 + z^3), whose z^{-1} branch at large z is
// the signature of regularity loss.

#include <stdexcept>
#include <string>

namespace waveheat {

enum class Zone { Small, Bounded, Large };

inline const char* zone_name(Zone z) {
    switch (z) {
        case Zone::Small: return "small";
        case Zone::Bounded: return "bounded";
        case Zone::Large: return "large";
    }
    return "?";
}

// Default split thresholds. The asymptotic expansions are comfortably valid
// for z below 0.1 and above 10; all rate checks are required to be
// insensitive to doubling or halving these.
inline constexpr double kDefaultEps = 0.1;
inline constexpr double kDefaultN = 10.0;

struct ZonePoint {
    double z;
    Zone zone;
    double eps;
    double big_n;
};

inline double rho(double z) {
    if (!(z > 0.0)) throw std::domain_error("rho: requires z > 0");
    return z * z / (1.0 + z * z * z);
}

inline ZonePoint classify(double z, double eps = kDefaultEps, double big_n = kDefaultN) {
    if (!(z > 0.0)) throw std::domain_error("classify: requires z > 0");
    if (!(eps > 0.0) || !(eps < big_n))
        throw std::invalid_argument("classify: thresholds must satisfy 0 < eps < N");
    Zone tag = z < eps ? Zone::Small : (z > big_n ? Zone::Large : Zone::Bounded);
    return {z, tag, eps, big_n};
}

}  // namespace waveheat
