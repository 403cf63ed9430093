#pragma once

// Dense 3x3 complex matrices and 3-vectors. Everything in the library runs
// through this fixed-size type: the phase-space system is 3x3 per spectral
// parameter, so no general linear algebra backend is needed.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>

namespace waveheat {

using Complex = std::complex<double>;

class NumericalError : public std::runtime_error {
  public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

struct Vec3 {
    std::array<Complex, 3> v{};

    Complex& operator[](std::size_t i) { return v[i]; }
    const Complex& operator[](std::size_t i) const { return v[i]; }

    Vec3 operator+(const Vec3& o) const { return {{v[0] + o.v[0], v[1] + o.v[1], v[2] + o.v[2]}}; }
    Vec3 operator-(const Vec3& o) const { return {{v[0] - o.v[0], v[1] - o.v[1], v[2] - o.v[2]}}; }
    Vec3 operator*(Complex s) const { return {{v[0] * s, v[1] * s, v[2] * s}}; }

    double norm() const {
        return std::sqrt(std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]));
    }
};

inline Complex dot(const Vec3& a, const Vec3& b) {
    // bilinear (unconjugated) dot product
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

// Row-major 3x3 complex matrix.
struct Mat3 {
    std::array<Complex, 9> m{};

    Complex& operator()(std::size_t r, std::size_t c) { return m[3 * r + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return m[3 * r + c]; }

    static Mat3 zero() { return {}; }

    static Mat3 identity() {
        Mat3 I;
        I(0, 0) = I(1, 1) = I(2, 2) = 1.0;
        return I;
    }

    static Mat3 diagonal(Complex a, Complex b, Complex c) {
        Mat3 D;
        D(0, 0) = a;
        D(1, 1) = b;
        D(2, 2) = c;
        return D;
    }

    Mat3 operator+(const Mat3& o) const {
        Mat3 r;
        for (std::size_t i = 0; i < 9; ++i) r.m[i] = m[i] + o.m[i];
        return r;
    }
    Mat3 operator-(const Mat3& o) const {
        Mat3 r;
        for (std::size_t i = 0; i < 9; ++i) r.m[i] = m[i] - o.m[i];
        return r;
    }
    Mat3 operator*(Complex s) const {
        Mat3 r;
        for (std::size_t i = 0; i < 9; ++i) r.m[i] = m[i] * s;
        return r;
    }
    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                r(i, j) = (*this)(i, 0) * o(0, j) + (*this)(i, 1) * o(1, j) + (*this)(i, 2) * o(2, j);
        return r;
    }
    Vec3 operator*(const Vec3& x) const {
        Vec3 r;
        for (std::size_t i = 0; i < 3; ++i)
            r[i] = (*this)(i, 0) * x[0] + (*this)(i, 1) * x[1] + (*this)(i, 2) * x[2];
        return r;
    }

    Mat3 transpose() const {
        Mat3 r;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
        return r;
    }

    Mat3 adjoint() const {
        Mat3 r;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) r(i, j) = std::conj((*this)(j, i));
        return r;
    }

    Complex trace() const { return m[0] + m[4] + m[8]; }

    Complex det() const {
        const Mat3& a = *this;
        return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
               a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
               a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& e : m) s += std::norm(e);
        return std::sqrt(s);
    }

    double max_abs() const {
        double s = 0.0;
        for (const auto& e : m) s = std::max(s, std::abs(e));
        return s;
    }

    // 1-norm (max absolute column sum), used by the exponential scaling logic.
    double one_norm() const {
        double best = 0.0;
        for (std::size_t j = 0; j < 3; ++j) {
            double col = std::abs((*this)(0, j)) + std::abs((*this)(1, j)) + std::abs((*this)(2, j));
            best = std::max(best, col);
        }
        return best;
    }

    bool all_finite() const {
        for (const auto& e : m)
            if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) return false;
        return true;
    }
};

inline Mat3 operator*(Complex s, const Mat3& A) { return A * s; }

// Inverse via the adjugate. Throws when the matrix is numerically singular
// relative to its scale.
inline Mat3 inverse(const Mat3& A) {
    Complex d = A.det();
    double scale = A.frobenius_norm();
    if (std::abs(d) <= 1e-14 * scale * scale * scale + 1e-300)
        throw NumericalError("inverse: singular 3x3 matrix");
    Mat3 adj;
    adj(0, 0) = A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1);
    adj(0, 1) = A(0, 2) * A(2, 1) - A(0, 1) * A(2, 2);
    adj(0, 2) = A(0, 1) * A(1, 2) - A(0, 2) * A(1, 1);
    adj(1, 0) = A(1, 2) * A(2, 0) - A(1, 0) * A(2, 2);
    adj(1, 1) = A(0, 0) * A(2, 2) - A(0, 2) * A(2, 0);
    adj(1, 2) = A(0, 2) * A(1, 0) - A(0, 0) * A(1, 2);
    adj(2, 0) = A(1, 0) * A(2, 1) - A(1, 1) * A(2, 0);
    adj(2, 1) = A(0, 1) * A(2, 0) - A(0, 0) * A(2, 1);
    adj(2, 2) = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
    return adj * (1.0 / d);
}

// Eigenvalues of a Hermitian 3x3 matrix, ascending, by the closed-form
// trigonometric method. Input is assumed Hermitian; only the upper triangle
// and real diagonal are read.
inline std::array<double, 3> hermitian_eigenvalues(const Mat3& A) {
    const double q = (A(0, 0).real() + A(1, 1).real() + A(2, 2).real()) / 3.0;
    Mat3 B = A - Mat3::diagonal(q, q, q);
    double p2 = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) p2 += std::norm(B(i, j));
    double p = std::sqrt(p2 / 6.0);
    if (p < 1e-300) return {q, q, q};
    Mat3 C = B * (1.0 / p);
    double half_det = 0.5 * C.det().real();
    half_det = std::clamp(half_det, -1.0, 1.0);
    const double phi = std::acos(half_det) / 3.0;
    const double two_pi_3 = 2.0943951023931953;
    double e0 = q + 2.0 * p * std::cos(phi);
    double e2 = q + 2.0 * p * std::cos(phi + 2.0 * two_pi_3);
    double e1 = 3.0 * q - e0 - e2;
    if (e2 > e1) std::swap(e2, e1);
    if (e1 > e0) std::swap(e1, e0);
    if (e2 > e1) std::swap(e2, e1);
    return {e2, e1, e0};
}

// Operator (spectral) norm as the square root of the largest eigenvalue of
// the Gram matrix A^H A; closed form, no iterative SVD.
inline double operator_norm(const Mat3& A) {
    Mat3 G = A.adjoint() * A;
    auto ev = hermitian_eigenvalues(G);
    return std::sqrt(std::max(0.0, ev[2]));
}

}  // namespace waveheat
