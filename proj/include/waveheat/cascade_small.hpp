#pragma once

// Small-zone diagonalization cascade: the constant conjugation T1 followed by
// four near-identity corrections T_j = I + N_j that push the off-diagonal
// part of the transformed system matrix to order z^{5/2}, leaving the
// diagonal Lambda(z) = Lambda0 + Lambda2 z + Lambda4 z^2.
//
// All matrices are kept exactly as complex rationals times half-integer
// powers of z, so the intermediate step identities can be verified as exact
// algebraic zeros.

#include <array>
#include <string>
#include <vector>

#include "waveheat/matrix3.hpp"
#include "waveheat/system_matrix.hpp"
#include "waveheat/zpoly.hpp"

namespace waveheat {
namespace cascade {

inline const ZPolyMat3& T1() {
    static const ZPolyMat3 m = ZPolyMat3::scaled(
        {CRat(-1), CRat(0, -1), CRat(0, 1), CRat(1), CRat(0, -1), CRat(0, 1), CRat(0), CRat(1), CRat(1)},
        CRat(1), 0);
    return m;
}

inline const ZPolyMat3& T1_inv() {
    static const ZPolyMat3 m = ZPolyMat3::scaled(
        {CRat(-2), CRat(2), CRat(0), CRat(0, 1), CRat(0, 1), CRat(2), CRat(0, -1), CRat(0, -1), CRat(2)},
        CRat(Rational(1, 4)), 0);
    return m;
}

// N2 = (sqrt(z)/2) [[0,-2,-2],[1,0,0],[1,0,0]]
inline const ZPolyMat3& N2() {
    static const ZPolyMat3 m = ZPolyMat3::scaled(
        {CRat(0), CRat(-2), CRat(-2), CRat(1), CRat(0), CRat(0), CRat(1), CRat(0), CRat(0)},
        CRat(Rational(1, 2)), 1);
    return m;
}

// N3 = (z/4) [[0,0,0],[0,0,-1+i],[0,-1-i,0]]
inline const ZPolyMat3& N3() {
    static const ZPolyMat3 m = ZPolyMat3::scaled(
        {CRat(0), CRat(0), CRat(0), CRat(0), CRat(0), CRat(-1, 1), CRat(0), CRat(-1, -1), CRat(0)},
        CRat(Rational(1, 4)), 2);
    return m;
}

// N4 = (z^{3/2}/2) [[0,-2i,2i],[i,0,0],[-i,0,0]]
inline const ZPolyMat3& N4() {
    static const ZPolyMat3 m = ZPolyMat3::scaled(
        {CRat(0), CRat(0, -2), CRat(0, 2), CRat(0, 1), CRat(0), CRat(0), CRat(0, -1), CRat(0), CRat(0)},
        CRat(Rational(1, 2)), 3);
    return m;
}

// N5 = (z^2/8) [[0,0,0],[0,0,1-3i],[0,1+3i,0]]
// The sign of the bracket factor is fixed by the requirement that the
// commutator with Lambda0 cancels the off-diagonal z^2 part exactly; with the
// opposite sign the conjugated system would keep an O(z^2) off-diagonal
// remainder and the cascade would lose its z^{5/2} order.
inline const ZPolyMat3& N5() {
    static const ZPolyMat3 m = ZPolyMat3::scaled(
        {CRat(0), CRat(0), CRat(0), CRat(0), CRat(0), CRat(1, -3), CRat(0), CRat(1, 3), CRat(0)},
        CRat(Rational(1, 8)), 4);
    return m;
}

inline const ZPolyMat3& Lambda0() {
    static const ZPolyMat3 m = ZPolyMat3::diagonal(
        ZHalfPoly{}, ZHalfPoly::monomial(CRat(0, 1), 0), ZHalfPoly::monomial(CRat(0, -1), 0));
    return m;
}

// Lambda2 = diag(0, (1+i)/2, (1-i)/2), carried with one power of z.
inline const ZPolyMat3& Lambda2_z() {
    static const ZPolyMat3 m = ZPolyMat3::diagonal(
        ZHalfPoly{},
        ZHalfPoly::monomial(CRat(Rational(1, 2), Rational(1, 2)), 2),
        ZHalfPoly::monomial(CRat(Rational(1, 2), Rational(-1, 2)), 2));
    return m;
}

// Lambda4 = diag(1, (-2-i)/4, (-2+i)/4), carried with z^2.
inline const ZPolyMat3& Lambda4_z2() {
    static const ZPolyMat3 m = ZPolyMat3::diagonal(
        ZHalfPoly::monomial(CRat(1), 4),
        ZHalfPoly::monomial(CRat(Rational(-1, 2), Rational(-1, 4)), 4),
        ZHalfPoly::monomial(CRat(Rational(-1, 2), Rational(1, 4)), 4));
    return m;
}

inline const ZPolyMat3& Lambda_small() {
    static const ZPolyMat3 m = Lambda0() + Lambda2_z() + Lambda4_z2();
    return m;
}

// Intermediate matrices, derived rather than transcribed: each is defined by
// the algebra of the preceding steps and must coincide with its closed form
// (checked in the tests).
inline const ZPolyMat3& A1_1() {  // T1^{-1} A1 T1
    static const ZPolyMat3 m = T1_inv() * zpoly_A1() * T1();
    return m;
}
inline const ZPolyMat3& A2_1() {  // T1^{-1} A2 T1
    static const ZPolyMat3 m = T1_inv() * zpoly_A2() * T1();
    return m;
}
inline const ZPolyMat3& A1_2_z() {  // A1^{(1)} N2 sqrt(z) + A2^{(1)} z
    static const ZPolyMat3 m = shift(A1_1() * N2(), CRat(1), 1) + shift(A2_1(), CRat(1), 2);
    return m;
}
inline const ZPolyMat3& A1_3_z32() {  // A2^{(1)} N2 z - N2 A1^{(1)} N2 sqrt(z) - N2 A2^{(1)} z
    static const ZPolyMat3 m = shift(A2_1() * N2(), CRat(1), 2) -
                               shift(N2() * A1_1() * N2(), CRat(1), 1) -
                               shift(N2() * A2_1(), CRat(1), 2);
    return m;
}
inline const ZPolyMat3& A1_4_z2() {
    // A1^{(2)} z N3 - N3 Lambda2 z + N2^2 A1^{(1)} N2 sqrt(z)
    //   + N2^2 A2^{(1)} z - N2 A2^{(1)} N2 z
    static const ZPolyMat3 m = A1_2_z() * N3() - N3() * Lambda2_z() +
                               shift(N2() * N2() * A1_1() * N2(), CRat(1), 1) +
                               shift(N2() * N2() * A2_1(), CRat(1), 2) -
                               shift(N2() * A2_1() * N2(), CRat(1), 2);
    return m;
}

}  // namespace cascade

struct CascadeSmall {
    double z = 0.0;
    Mat3 T1, N2, N3, N4, N5;        // T_j = I + N_j for j >= 2
    Mat3 lambda;                    // Lambda(z), diagonal
    std::array<Mat3, 5> T;          // T1..T5 evaluated at z
    std::array<Mat3, 5> T_inv;
};

// Instantiates the small-zone cascade at z. Intended for z < eps, but defined
// for any z >= 0.
inline CascadeSmall build_small(double z) {
    if (!(z >= 0.0)) throw std::domain_error("build_small: requires z >= 0");
    CascadeSmall c;
    c.z = z;
    c.T1 = cascade::T1().eval(z);
    c.N2 = cascade::N2().eval(z);
    c.N3 = cascade::N3().eval(z);
    c.N4 = cascade::N4().eval(z);
    c.N5 = cascade::N5().eval(z);
    c.lambda = cascade::Lambda_small().eval(z);
    c.T = {c.T1, Mat3::identity() + c.N2, Mat3::identity() + c.N3, Mat3::identity() + c.N4,
           Mat3::identity() + c.N5};
    c.T_inv[0] = cascade::T1_inv().eval(z);
    for (std::size_t j = 1; j < 5; ++j) c.T_inv[j] = inverse(c.T[j]);
    return c;
}

// T_int = T5^{-1} T4^{-1} T3^{-1} T2^{-1} T1^{-1}
inline Mat3 transform_small(const CascadeSmall& c) {
    return c.T_inv[4] * c.T_inv[3] * c.T_inv[2] * c.T_inv[1] * c.T_inv[0];
}

// || T_int A(z) T_int^{-1} - Lambda(z) ||_F, the defect of the truncated
// diagonalization; decays like z^{5/2}.
inline double residual_small(double z) {
    CascadeSmall c = build_small(z);
    Mat3 t_int = transform_small(c);
    Mat3 conj = t_int * assemble_A(z) * inverse(t_int);
    return (conj - c.lambda).frobenius_norm();
}

}  // namespace waveheat
