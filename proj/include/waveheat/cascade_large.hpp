#pragma once

// Large-zone diagonalization cascade: block-diagonal constant conjugation
// followed by four corrections carrying negative powers of z, reducing the
// system matrix to Lambda~(z) = Lambda~0 z + Lambda~1 sqrt(z) + Lambda~4 / z
// with an O(z^{-3/2}) defect. Two separate correction matrices are needed at
// the final order because the leading diagonal Lambda~0 has a repeated zero
// entry, so part of the off-diagonal block must be removed against Lambda~1.

#include <array>

#include "waveheat/matrix3.hpp"
#include "waveheat/system_matrix.hpp"
#include "waveheat/zpoly.hpp"

namespace waveheat {
namespace cascade {

inline const ZPolyMat3& Tl1() {
    static const ZPolyMat3 m = ZPolyMat3::scaled(
        {CRat(0, 1), CRat(0, -1), CRat(0), CRat(1), CRat(1), CRat(0), CRat(0), CRat(0), CRat(1)},
        CRat(1), 0);
    return m;
}

inline const ZPolyMat3& Tl1_inv() {
    static const ZPolyMat3 m = ZPolyMat3::scaled(
        {CRat(0, -1), CRat(1), CRat(0), CRat(0, 1), CRat(1), CRat(0), CRat(0), CRat(0), CRat(2)},
        CRat(Rational(1, 2)), 0);
    return m;
}

// Nl2 = (1/(2z)) [[0,0,1-i],[0,0,1+i],[1+i,1-i,0]]
inline const ZPolyMat3& Nl2() {
    static const ZPolyMat3 m = ZPolyMat3::scaled(
        {CRat(0), CRat(0), CRat(1, -1), CRat(0), CRat(0), CRat(1, 1), CRat(1, 1), CRat(1, -1), CRat(0)},
        CRat(Rational(1, 2)), -2);
    return m;
}

// Nl3 = (z^{-3/2}/2) [[0,0,1+i],[0,0,1-i],[-1+i,-1-i,0]]
inline const ZPolyMat3& Nl3() {
    static const ZPolyMat3 m = ZPolyMat3::scaled(
        {CRat(0), CRat(0), CRat(1, 1), CRat(0), CRat(0), CRat(1, -1), CRat(-1, 1), CRat(-1, -1), CRat(0)},
        CRat(Rational(1, 2)), -3);
    return m;
}

// Nl4 = (z^{-2}/2) [[0,0,-1+i],[0,0,-1-i],[-1-i,-1+i,0]]
inline const ZPolyMat3& Nl4() {
    static const ZPolyMat3 m = ZPolyMat3::scaled(
        {CRat(0), CRat(0), CRat(-1, 1), CRat(0), CRat(0), CRat(-1, -1), CRat(-1, -1), CRat(-1, 1), CRat(0)},
        CRat(Rational(1, 2)), -4);
    return m;
}

// Nl5 = (z^{-3/2}/4) [[0,1,0],[1,0,0],[0,0,0]]
inline const ZPolyMat3& Nl5() {
    static const ZPolyMat3 m = ZPolyMat3::scaled(
        {CRat(0), CRat(1), CRat(0), CRat(1), CRat(0), CRat(0), CRat(0), CRat(0), CRat(0)},
        CRat(Rational(1, 4)), -3);
    return m;
}

// Lambda~0 = diag(0,0,1) carried with z
inline const ZPolyMat3& Ll0_z() {
    static const ZPolyMat3 m =
        ZPolyMat3::diagonal(ZHalfPoly{}, ZHalfPoly{}, ZHalfPoly::monomial(CRat(1), 2));
    return m;
}

// Lambda~1 = diag(i,-i,0) carried with sqrt(z)
inline const ZPolyMat3& Ll1_sqrtz() {
    static const ZPolyMat3 m = ZPolyMat3::diagonal(
        ZHalfPoly::monomial(CRat(0, 1), 1), ZHalfPoly::monomial(CRat(0, -1), 1), ZHalfPoly{});
    return m;
}

// Lambda~4 = diag(1/2, 1/2, -1) carried with z^{-1}
inline const ZPolyMat3& Ll4_zinv() {
    static const ZPolyMat3 m = ZPolyMat3::diagonal(
        ZHalfPoly::monomial(CRat(Rational(1, 2)), -2),
        ZHalfPoly::monomial(CRat(Rational(1, 2)), -2),
        ZHalfPoly::monomial(CRat(-1), -2));
    return m;
}

inline const ZPolyMat3& Lambda_large() {
    static const ZPolyMat3 m = Ll0_z() + Ll1_sqrtz() + Ll4_zinv();
    return m;
}

// Derived intermediates (closed forms checked in the tests).
inline const ZPolyMat3& Al0_1() {  // Tl1^{-1} A0 Tl1
    static const ZPolyMat3 m = Tl1_inv() * zpoly_A0() * Tl1();
    return m;
}
inline const ZPolyMat3& Al_m1() {  // [Lambda~1, Nl2] sqrt(z), carries z^{-1/2}
    static const ZPolyMat3 m = commutator(Ll1_sqrtz(), Nl2());
    return m;
}
inline const ZPolyMat3& Al_m2() {  // [Lambda~1, Nl3] sqrt(z) + A~0^{(1)} Nl2, carries z^{-1}
    static const ZPolyMat3 m = commutator(Ll1_sqrtz(), Nl3()) + Al0_1() * Nl2();
    return m;
}
inline const ZPolyMat3& Al_m3() {  // A~_{-2} z^{-1} - [Nl4, Lambda~0] z, carries z^{-1}
    static const ZPolyMat3 m = Al_m2() - commutator(Nl4(), Ll0_z());
    return m;
}

}  // namespace cascade

struct CascadeLarge {
    double z = 0.0;
    Mat3 T1, N2, N3, N4, N5;
    Mat3 lambda;
    std::array<Mat3, 5> T;
    std::array<Mat3, 5> T_inv;
};

inline CascadeLarge build_large(double z) {
    if (!(z > 0.0)) throw std::domain_error("build_large: requires z > 0");
    CascadeLarge c;
    c.z = z;
    c.T1 = cascade::Tl1().eval(z);
    c.N2 = cascade::Nl2().eval(z);
    c.N3 = cascade::Nl3().eval(z);
    c.N4 = cascade::Nl4().eval(z);
    c.N5 = cascade::Nl5().eval(z);
    c.lambda = cascade::Lambda_large().eval(z);
    c.T = {c.T1, Mat3::identity() + c.N2, Mat3::identity() + c.N3, Mat3::identity() + c.N4,
           Mat3::identity() + c.N5};
    c.T_inv[0] = cascade::Tl1_inv().eval(z);
    for (std::size_t j = 1; j < 5; ++j) c.T_inv[j] = inverse(c.T[j]);
    return c;
}

// T_ext = T~5^{-1} T~4^{-1} T~3^{-1} T~2^{-1} T~1^{-1}
inline Mat3 transform_large(const CascadeLarge& c) {
    return c.T_inv[4] * c.T_inv[3] * c.T_inv[2] * c.T_inv[1] * c.T_inv[0];
}

// || T_ext A(z) T_ext^{-1} - Lambda~(z) ||_F; decays like z^{-3/2}.
inline double residual_large(double z) {
    CascadeLarge c = build_large(z);
    Mat3 t_ext = transform_large(c);
    Mat3 conj = t_ext * assemble_A(z) * inverse(t_ext);
    return (conj - c.lambda).frobenius_norm();
}

}  // namespace waveheat
