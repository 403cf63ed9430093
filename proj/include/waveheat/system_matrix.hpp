#pragma once

// The 3x3 phase-space system matrix A(z) = A0 + A1 sqrt(z) + A2 z of the
// first-order reduction d_t W + A(z) W = 0, and its characteristic cubic
// det(A - lambda I) = -lambda^3 + z lambda^2 - (1+z) lambda + z^2.

#include <array>

#include "waveheat/matrix3.hpp"
#include "waveheat/zpoly.hpp"

namespace waveheat {

inline Mat3 coeff_A0() {
    Mat3 A;
    A(0, 2) = 1.0;
    A(1, 2) = 1.0;
    A(2, 0) = -0.5;
    A(2, 1) = -0.5;
    return A;
}

inline Mat3 coeff_A1() {
    Mat3 A;
    A(0, 1) = -1.0;
    A(1, 0) = 1.0;
    return A;
}

inline Mat3 coeff_A2() { return Mat3::diagonal(0.0, 0.0, 1.0); }

inline Mat3 assemble_A(double z) {
    if (!(z >= 0.0)) throw std::domain_error("assemble_A: requires z >= 0");
    const double h = std::sqrt(z);
    Mat3 A;
    A(0, 1) = -h;
    A(0, 2) = 1.0;
    A(1, 0) = h;
    A(1, 2) = 1.0;
    A(2, 0) = -0.5;
    A(2, 1) = -0.5;
    A(2, 2) = z;
    return A;
}

// Exact-ring versions, for the cascade identity checks.
inline ZPolyMat3 zpoly_A0() {
    return ZPolyMat3::scaled({CRat(0), CRat(0), CRat(2), CRat(0), CRat(0), CRat(2), CRat(-1), CRat(-1), CRat(0)},
                             CRat(Rational(1, 2)), 0);
}
inline ZPolyMat3 zpoly_A1() {
    return ZPolyMat3::scaled({CRat(0), CRat(-1), CRat(0), CRat(1), CRat(0), CRat(0), CRat(0), CRat(0), CRat(0)},
                             CRat(1), 0);
}
inline ZPolyMat3 zpoly_A2() {
    return ZPolyMat3::scaled({CRat(0), CRat(0), CRat(0), CRat(0), CRat(0), CRat(0), CRat(0), CRat(0), CRat(1)},
                             CRat(1), 0);
}
inline ZPolyMat3 zpoly_A(/* A0 + A1 h + A2 h^2 */) {
    return zpoly_A0() + shift(zpoly_A1(), CRat(1), 1) + shift(zpoly_A2(), CRat(1), 2);
}

// Coefficients (c3, c2, c1, c0) of det(A(z) - lambda I) as a polynomial
// c3 l^3 + c2 l^2 + c1 l + c0.
inline std::array<double, 4> char_poly_coeffs(double z) {
    if (!(z >= 0.0)) throw std::domain_error("char_poly_coeffs: requires z >= 0");
    return {-1.0, z, -(1.0 + z), z * z};
}

inline Complex char_poly_eval(double z, Complex lambda) {
    auto c = char_poly_coeffs(z);
    return ((c[0] * lambda + c[1]) * lambda + c[2]) * lambda + c[3];
}

inline Complex char_poly_derivative(double z, Complex lambda) {
    auto c = char_poly_coeffs(z);
    return (3.0 * c[0] * lambda + 2.0 * c[1]) * lambda + c[2];
}

// Scale-aware relative residual of a candidate root.
inline double char_poly_relative_residual(double z, Complex lambda) {
    auto c = char_poly_coeffs(z);
    double l = std::abs(lambda);
    double scale = l * l * l + std::abs(c[1]) * l * l + std::abs(c[2]) * l + std::abs(c[3]);
    if (scale == 0.0) return std::abs(char_poly_eval(z, lambda));
    return std::abs(char_poly_eval(z, lambda)) / scale;
}

}  // namespace waveheat
