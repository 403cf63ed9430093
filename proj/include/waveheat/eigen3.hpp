#pragma once

// Eigenvalues of A(z) as the roots of the characteristic cubic, polished by
// Newton iteration, with branch labels matched by continuity in z between the
// two asymptotic regimes.
//
// Branch bookkeeping: the stored order is the small-zone one,
//   branch 1 -> the root near z^2 as z -> 0 (continues to z - 1/z),
//   branch 2 -> the root near +i        (continues to +i sqrt(z) + 1/(2z)),
//   branch 3 -> the root near -i        (continues to -i sqrt(z) + 1/(2z)).
// The large-zone labelling is the permutation (3, 1, 2) of this order.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "waveheat/matrix3.hpp"
#include "waveheat/system_matrix.hpp"

namespace waveheat {

struct EigenTriple {
    double z = 0.0;
    // small-zone branch order; see header comment
    std::array<Complex, 3> lam{};

    Complex branch_small(int j) const { return lam[static_cast<std::size_t>(j - 1)]; }
    Complex branch_large(int j) const {
        static constexpr std::array<std::size_t, 3> map = {1, 2, 0};  // large j -> small index
        return lam[map[static_cast<std::size_t>(j - 1)]];
    }
    double min_real() const {
        return std::min({lam[0].real(), lam[1].real(), lam[2].real()});
    }
};

// Leading small-zone truncations (through order z^2).
inline Complex mu_eig_small(int j, double z) {
    switch (j) {
        case 1: return Complex(z * z, 0.0);
        case 2: return Complex(0.0, 1.0) + Complex(0.5, 0.5) * z + Complex(-0.5, -0.25) * (z * z);
        case 3: return Complex(0.0, -1.0) + Complex(0.5, -0.5) * z + Complex(-0.5, 0.25) * (z * z);
    }
    throw std::invalid_argument("mu_eig_small: branch must be 1, 2 or 3");
}

// Leading large-zone truncations (through order 1/z).
inline Complex nu_eig_large(int j, double z) {
    const double h = std::sqrt(z);
    switch (j) {
        case 1: return Complex(0.5 / z, h);
        case 2: return Complex(0.5 / z, -h);
        case 3: return Complex(z - 1.0 / z, 0.0);
    }
    throw std::invalid_argument("nu_eig_large: branch must be 1, 2 or 3");
}

namespace detail {

// Roots of the monic cubic l^3 + a l^2 + b l + c by the depressed-cubic
// formula in complex arithmetic.
inline std::array<Complex, 3> cubic_roots_monic(Complex a, Complex b, Complex c) {
    const Complex shift = a / 3.0;
    const Complex p = b - a * a / 3.0;
    const Complex q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    const Complex disc = q * q / 4.0 + p * p * p / 27.0;
    Complex sq = std::sqrt(disc);
    Complex u3 = -q / 2.0 + sq;
    if (std::abs(u3) < std::abs(-q / 2.0 - sq)) u3 = -q / 2.0 - sq;
    Complex u = std::pow(u3, 1.0 / 3.0);
    std::array<Complex, 3> roots;
    const Complex w(-0.5, std::sqrt(3.0) / 2.0);
    Complex uk = u;
    for (int k = 0; k < 3; ++k) {
        Complex y = (std::abs(uk) > 0.0) ? uk - p / (3.0 * uk) : Complex(0.0, 0.0);
        roots[static_cast<std::size_t>(k)] = y - shift;
        uk *= w;
    }
    return roots;
}

inline Complex newton_polish(double z, Complex lambda, int steps) {
    for (int i = 0; i < steps; ++i) {
        Complex d = char_poly_derivative(z, lambda);
        if (std::abs(d) == 0.0) break;
        lambda -= char_poly_eval(z, lambda) / d;
    }
    return lambda;
}

// Choose the permutation of `roots` minimizing total distance to `ref`.
inline std::array<Complex, 3> match_to(const std::array<Complex, 3>& roots,
                                       const std::array<Complex, 3>& ref) {
    static constexpr std::array<std::array<std::size_t, 3>, 6> perms = {{
        {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    double best = -1.0;
    std::array<Complex, 3> out = roots;
    for (const auto& p : perms) {
        double cost = std::abs(roots[p[0]] - ref[0]) + std::abs(roots[p[1]] - ref[1]) +
                      std::abs(roots[p[2]] - ref[2]);
        if (best < 0.0 || cost < best) {
            best = cost;
            out = {roots[p[0]], roots[p[1]], roots[p[2]]};
        }
    }
    return out;
}

inline std::array<Complex, 3> raw_roots(double z) {
    // monic form of -l^3 + z l^2 - (1+z) l + z^2
    auto roots = cubic_roots_monic(Complex(-z), Complex(1.0 + z), Complex(-z * z));
    // The smallest-magnitude root is refined through the Vieta product, which
    // avoids the precision loss of the closed form when the roots differ by
    // many orders of magnitude.
    std::size_t small = 0;
    for (std::size_t i = 1; i < 3; ++i)
        if (std::abs(roots[i]) < std::abs(roots[small])) small = i;
    Complex others = roots[(small + 1) % 3] * roots[(small + 2) % 3];
    if (std::abs(others) > 0.0) roots[small] = Complex(z * z, 0.0) / others;
    for (auto& r : roots) r = newton_polish(z, r, 2);
    return roots;
}

// Reference table of labelled triples on a fixed log grid, built once by
// continuity tracking from the small-z anchor and checked against the
// large-z anchor.
struct BranchTable {
    std::vector<double> log10z;
    std::vector<std::array<Complex, 3>> labelled;

    BranchTable() {
        constexpr double lo = -8.0, hi = 8.0;
        constexpr int per_decade = 16;
        const int count = static_cast<int>((hi - lo) * per_decade) + 1;
        log10z.reserve(static_cast<std::size_t>(count));
        labelled.reserve(static_cast<std::size_t>(count));
        std::array<Complex, 3> prev{};
        for (int i = 0; i < count; ++i) {
            double lz = lo + static_cast<double>(i) / per_decade;
            double z = std::pow(10.0, lz);
            auto roots = raw_roots(z);
            std::array<Complex, 3> ref;
            if (i == 0)
                ref = {mu_eig_small(1, z), mu_eig_small(2, z), mu_eig_small(3, z)};
            else
                ref = prev;
            auto lab = match_to(roots, ref);
            log10z.push_back(lz);
            labelled.push_back(lab);
            prev = lab;
        }
        // anchor consistency at the top of the path
        double zt = std::pow(10.0, hi);
        const auto& top = labelled.back();
        if (std::abs(top[0] - nu_eig_large(3, zt)) > 1e-3 * std::abs(top[0]) ||
            std::abs(top[1] - nu_eig_large(1, zt)) > 1e-3 * std::abs(top[1]) ||
            std::abs(top[2] - nu_eig_large(2, zt)) > 1e-3 * std::abs(top[2]))
            throw NumericalError("branch continuity tracking lost between the two anchors");
    }

    const std::array<Complex, 3>& nearest(double z) const {
        double lz = std::log10(z);
        double lo = log10z.front(), hi = log10z.back();
        double clamped = std::clamp(lz, lo, hi);
        std::size_t idx = static_cast<std::size_t>(
            std::llround((clamped - lo) / (hi - lo) * static_cast<double>(log10z.size() - 1)));
        return labelled[idx];
    }
};

inline const BranchTable& branch_table() {
    static const BranchTable table;
    return table;
}

}  // namespace detail

// Three labelled eigenvalues of A(z). Residuals above 1e-8 (relative) are a
// hard failure.
inline EigenTriple eigenvalues(double z) {
    if (!(z > 0.0)) throw std::domain_error("eigenvalues: requires z > 0");
    auto roots = detail::raw_roots(z);
    for (const auto& r : roots) {
        if (char_poly_relative_residual(z, r) > 1e-8)
            throw NumericalError("eigenvalues: root polishing did not converge at z=" + std::to_string(z));
    }
    EigenTriple t;
    t.z = z;
    t.lam = detail::match_to(roots, detail::branch_table().nearest(z));
    return t;
}

}  // namespace waveheat
