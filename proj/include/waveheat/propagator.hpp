#pragma once

// Exact phase-space evolution W(t) = exp(-A(z) t) W0, component extraction
// rows, and the measured pointwise decay rate normalized by the key function.

#include <span>
#include <vector>

#include "waveheat/expm.hpp"
#include "waveheat/matrix3.hpp"
#include "waveheat/system_matrix.hpp"
#include "waveheat/zones.hpp"

namespace waveheat {

using StateVector3 = Vec3;

inline StateVector3 propagate(double z, double t, const StateVector3& w0) {
    if (!(z > 0.0)) throw std::domain_error("propagate: requires z > 0");
    return expm_neg(assemble_A(z), t) * w0;
}

struct Components {
    Complex sqrtz_u;  // sqrt(z) * u-hat
    Complex dt_u;     // d_t u-hat
    Complex theta;    // theta-hat
};

// Extraction rows for the "+" sign convention of the ansatz:
// W = (d_t u + sqrt(z) u, d_t u - sqrt(z) u, theta).
inline Components extract_components(const StateVector3& w) {
    return {0.5 * (w[0] - w[1]), 0.5 * (w[0] + w[1]), w[2]};
}

// c_star = min over the grid of (min_j Re lambda_j(z)) / rho(z). This is the
// sharp exponential rate in units of the key function; it must be positive,
// tends to 1 as z -> 0 and to 1/2 as z -> infinity.
inline double pointwise_rate(std::span<const double> z_grid) {
    if (z_grid.empty()) throw std::invalid_argument("pointwise_rate: empty grid");
    double c_star = std::numeric_limits<double>::infinity();
    for (double z : z_grid) {
        double ratio = eigenvalues(z).min_real() / rho(z);
        c_star = std::min(c_star, ratio);
    }
    if (!(c_star > 0.0))
        throw NumericalError("pointwise_rate: non-positive rate contradicts spectral positivity");
    return c_star;
}

// max over t_grid of ||exp(-A(z) t)||_op * exp(+c_star rho(z) t); bounded by
// a moderate constant when the pointwise estimate holds with rate c_star.
inline double verify_operator_bound(double z, std::span<const double> t_grid, double c_star) {
    if (t_grid.empty()) throw std::invalid_argument("verify_operator_bound: empty grid");
    Mat3 A = assemble_A(z);
    const double r = rho(z);
    double worst = 0.0;
    for (double t : t_grid) {
        double v = operator_norm(expm_neg(A, t)) * std::exp(c_star * r * t);
        if (!std::isfinite(v)) throw NumericalError("verify_operator_bound: unbounded growth");
        worst = std::max(worst, v);
    }
    return worst;
}

inline std::vector<double> log_grid(double lo, double hi, int points) {
    if (!(lo > 0.0) || !(hi > lo) || points < 2)
        throw std::invalid_argument("log_grid: need 0 < lo < hi and at least 2 points");
    std::vector<double> g(static_cast<std::size_t>(points));
    double llo = std::log10(lo), lhi = std::log10(hi);
    for (int i = 0; i < points; ++i)
        g[static_cast<std::size_t>(i)] =
            std::pow(10.0, llo + (lhi - llo) * static_cast<double>(i) / (points - 1));
    return g;
}

inline std::vector<double> linear_grid(double lo, double hi, int points) {
    if (!(hi > lo) || points < 2)
        throw std::invalid_argument("linear_grid: need lo < hi and at least 2 points");
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        g[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
    return g;
}

}  // namespace waveheat
