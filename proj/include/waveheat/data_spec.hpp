#pragma once

// Phase-space data specifications. Data live directly in phase space as
// diagonal coefficient families W0(lambda)_{k,l} = w0(mu_k|lambda|) delta_{k,l} v:
// an L1-class datum is emulated by a uniformly bounded profile, an Hs-class
// datum by a profile whose s-weighted square is summable over the grid
// window. Profiles depend on k only through mu_k, which is what lets the
// k-sum collapse onto level multiplicities.

#include <cmath>
#include <stdexcept>
#include <string>

#include "waveheat/matrix3.hpp"

namespace waveheat {

struct SpectralDataSpec {
    enum class Class { L1Like, HsLike };

    Class cls = Class::L1Like;
    int s = 0;  // regularity order (HsLike only)
    int n = 1;  // dimension; fixes the decay exponent of the Hs profile
    Vec3 v{{1.0, 0.0, 0.0}};  // fixed unit vector carrying the data

    static SpectralDataSpec l1like(int n) {
        SpectralDataSpec d;
        d.cls = Class::L1Like;
        d.n = n;
        return d;
    }

    // Profile w0(z) = min(1, z^{-(s+1+n)/2}): the borderline-summable Hs
    // emulation, so the large-zone loss mechanism is exercised at its sharp
    // rate while the s-weighted square norm stays finite on the capped
    // lambda window.
    static SpectralDataSpec hs_like(int n, int s) {
        if (s < 0) throw std::invalid_argument("hs_like: s must be >= 0");
        SpectralDataSpec d;
        d.cls = Class::HsLike;
        d.n = n;
        d.s = s;
        return d;
    }

    double profile(double z) const {
        if (cls == Class::L1Like) return 1.0;
        if (z <= 1.0) return 1.0;
        return std::pow(z, -0.5 * static_cast<double>(s + 1 + n));
    }

    std::string name() const {
        if (cls == Class::L1Like) return "l1like";
        return "hslike(s=" + std::to_string(s) + ")";
    }
};

}  // namespace waveheat
