#pragma once

// exp(-A t) for 3x3 complex matrices. The default path diagonalizes A when
// its eigenvalues are well separated; otherwise a degree-13 Pade approximant
// with scaling and squaring takes over, so near-defective matrices are
// handled without assuming diagonalizability.

#include <array>
#include <cmath>

#include "waveheat/eigen3.hpp"
#include "waveheat/matrix3.hpp"

namespace waveheat {

namespace detail {

// Eigenvalues of a general complex 3x3 matrix via its (monic) characteristic
// polynomial.
inline std::array<Complex, 3> general_eigenvalues(const Mat3& A) {
    Complex tr = A.trace();
    Complex c2 = -tr;
    // sum of principal 2x2 minors
    Complex m01 = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
    Complex m02 = A(0, 0) * A(2, 2) - A(0, 2) * A(2, 0);
    Complex m12 = A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1);
    Complex c1 = m01 + m02 + m12;
    Complex c0 = -A.det();
    return cubic_roots_monic(c2, c1, c0);
}

// Eigenvector of A for eigenvalue lambda: the cross product of two rows of
// (A - lambda I) is bilinearly orthogonal to both, hence in the null space
// when the rank is 2. The largest of the three row-pair candidates is used.
inline Vec3 eigenvector(const Mat3& A, Complex lambda) {
    Mat3 B = A - Mat3::diagonal(lambda, lambda, lambda);
    std::array<Vec3, 3> rows;
    for (std::size_t i = 0; i < 3; ++i) rows[i] = {{B(i, 0), B(i, 1), B(i, 2)}};
    auto cross = [](const Vec3& a, const Vec3& b) -> Vec3 {
        return {{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]}};
    };
    Vec3 best{};
    double best_norm = -1.0;
    for (std::size_t i = 0; i < 3; ++i) {
        Vec3 cand = cross(rows[i], rows[(i + 1) % 3]);
        double n = cand.norm();
        if (n > best_norm) {
            best_norm = n;
            best = cand;
        }
    }
    if (best_norm <= 0.0) throw NumericalError("eigenvector: null-space extraction failed");
    return best * (1.0 / best_norm);
}

inline Mat3 expm_eigen_path(const Mat3& A, double t, const std::array<Complex, 3>& lam) {
    Mat3 V;
    for (std::size_t j = 0; j < 3; ++j) {
        Vec3 v = eigenvector(A, lam[j]);
        for (std::size_t i = 0; i < 3; ++i) V(i, j) = v[i];
    }
    Mat3 Vinv = inverse(V);
    Mat3 D = Mat3::diagonal(std::exp(-lam[0] * t), std::exp(-lam[1] * t), std::exp(-lam[2] * t));
    return V * D * Vinv;
}

// Higham's degree-13 Pade approximant with scaling and squaring, applied to
// M = -A t.
inline Mat3 expm_pade13(const Mat3& A, double t) {
    static constexpr std::array<double, 14> b = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
        129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
        1323241920.0,        40840800.0,          960960.0,           16380.0,
        182.0,               1.0};
    constexpr double theta13 = 5.371920351148152;

    Mat3 M = A * Complex(-t, 0.0);
    double nrm = M.one_norm();
    int s = 0;
    if (nrm > theta13) s = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
    if (s > 0) M = M * Complex(std::ldexp(1.0, -s), 0.0);

    Mat3 I = Mat3::identity();
    Mat3 M2 = M * M;
    Mat3 M4 = M2 * M2;
    Mat3 M6 = M2 * M4;
    Mat3 U = M * (M6 * (M6 * b[13] + M4 * b[11] + M2 * b[9]) + M6 * b[7] + M4 * b[5] + M2 * b[3] + I * b[1]);
    Mat3 V = M6 * (M6 * b[12] + M4 * b[10] + M2 * b[8]) + M6 * b[6] + M4 * b[4] + M2 * b[2] + I * b[0];
    Mat3 R = inverse(V - U) * (V + U);
    for (int i = 0; i < s; ++i) R = R * R;
    return R;
}

}  // namespace detail

// Smallest pairwise distance between the eigenvalues of A.
inline double eigenvalue_separation(const Mat3& A) {
    auto lam = detail::general_eigenvalues(A);
    return std::min({std::abs(lam[0] - lam[1]), std::abs(lam[0] - lam[2]), std::abs(lam[1] - lam[2])});
}

// exp(-A t). `verify_paths` additionally cross-checks the two computation
// paths and reports ill-conditioning when they disagree.
inline Mat3 expm_neg(const Mat3& A, double t, bool verify_paths = false) {
    if (!(t >= 0.0)) throw std::domain_error("expm_neg: requires t >= 0");
    if (t == 0.0) return Mat3::identity();

    auto lam = detail::general_eigenvalues(A);
    double sep = std::min({std::abs(lam[0] - lam[1]), std::abs(lam[0] - lam[2]), std::abs(lam[1] - lam[2])});
    bool well_separated = sep > 1e-6 * A.frobenius_norm();

    Mat3 R;
    if (well_separated) {
        R = detail::expm_eigen_path(A, t, lam);
        if (!R.all_finite()) R = detail::expm_pade13(A, t);
    } else {
        R = detail::expm_pade13(A, t);
    }
    if (verify_paths) {
        Mat3 other = well_separated ? detail::expm_pade13(A, t) : R;
        if (well_separated) {
            double diff = (R - other).frobenius_norm();
            double scale = std::max(R.frobenius_norm(), 1e-300);
            if (diff / scale > 1e-6)
                throw NumericalError("expm_neg: eigendecomposition and Pade paths disagree (ill-conditioned)");
        }
    }
    return R;
}

}  // namespace waveheat
