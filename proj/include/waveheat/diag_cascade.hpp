#pragma once

// Step-identity verification for both cascades. Each identity is checked two
// ways: as an exact zero in the rational half-power ring, and numerically at
// a given z (max absolute entry of the defect matrix).

#include <string>
#include <vector>

#include "waveheat/cascade_large.hpp"
#include "waveheat/cascade_small.hpp"
#include "waveheat/zones.hpp"

namespace waveheat {

struct StepIdentityCheck {
    std::string name;
    bool exact = false;      // holds exactly in the rational ring
    double max_abs = 0.0;    // numeric defect at the sampled z
};

struct StepIdentityReport {
    double z = 0.0;
    Zone zone = Zone::Small;
    std::vector<StepIdentityCheck> checks;

    double worst() const {
        double w = 0.0;
        for (const auto& c : checks) w = std::max(w, c.max_abs);
        return w;
    }
    bool all_exact() const {
        for (const auto& c : checks)
            if (!c.exact) return false;
        return true;
    }
};

namespace detail {
inline StepIdentityCheck check_identity(const std::string& name, const ZPolyMat3& lhs,
                                        const ZPolyMat3& rhs, double z) {
    ZPolyMat3 defect = lhs - rhs;
    StepIdentityCheck c;
    c.name = name;
    c.exact = defect.is_zero();
    c.max_abs = defect.eval(z).max_abs();
    return c;
}
}  // namespace detail

// The four small-zone identities (commutator steps against Lambda0) or the
// four large-zone ones (against Lambda~0 z resp. Lambda~1 sqrt(z)).
inline StepIdentityReport verify_step_identities(double z, Zone zone) {
    using namespace cascade;
    StepIdentityReport rep;
    rep.z = z;
    rep.zone = zone;
    if (zone == Zone::Small) {
        rep.checks.push_back(detail::check_identity(
            "A1^(1) sqrt(z) - [N2,L0] = 0", shift(A1_1(), CRat(1), 1) - commutator(N2(), Lambda0()),
            ZPolyMat3{}, z));
        rep.checks.push_back(detail::check_identity(
            "A1^(2) z - [N3,L0] = L2 z", A1_2_z() - commutator(N3(), Lambda0()), Lambda2_z(), z));
        rep.checks.push_back(detail::check_identity(
            "A1^(3) z^1.5 - [N4,L0] = 0", A1_3_z32() - commutator(N4(), Lambda0()), ZPolyMat3{}, z));
        rep.checks.push_back(detail::check_identity(
            "A1^(4) z^2 - [N5,L0] = L4 z^2", A1_4_z2() - commutator(N5(), Lambda0()), Lambda4_z2(), z));
    } else if (zone == Zone::Large) {
        rep.checks.push_back(detail::check_identity(
            "A~0^(1) - [N~2,L~0] z = 0", Al0_1() - commutator(Nl2(), Ll0_z()), ZPolyMat3{}, z));
        rep.checks.push_back(detail::check_identity(
            "A~-1 z^-0.5 - [N~3,L~0] z = 0", Al_m1() - commutator(Nl3(), Ll0_z()), ZPolyMat3{}, z));
        rep.checks.push_back(detail::check_identity(
            "A~-2 z^-1 - [N~4,L~0] z = A~-3 z^-1", Al_m2() - commutator(Nl4(), Ll0_z()), Al_m3(), z));
        rep.checks.push_back(detail::check_identity(
            "A~-3 z^-1 - [N~5,L~1] sqrt(z) = L~4 z^-1",
            Al_m3() - commutator(Nl5(), Ll1_sqrtz()), Ll4_zinv(), z));
    } else {
        throw std::invalid_argument("verify_step_identities: zone must be small or large");
    }
    return rep;
}

}  // namespace waveheat
