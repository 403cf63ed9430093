#pragma once

// Exact matrix algebra for the diagonalization cascades. Every cascade matrix
// has entries of the form (complex rational) * z^{j/2} with small j, so a
// Laurent polynomial in h = sqrt(z) over complex rationals represents them
// exactly. Products and commutators stay inside this ring, which lets the
// step identities be verified as exact zero matrices instead of to a float
// tolerance.

#include <array>
#include <cstdint>
#include <numeric>
#include <stdexcept>

#include "waveheat/matrix3.hpp"

namespace waveheat {

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n) : num(n), den(1) {}
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { reduce(); }

    void reduce() {
        if (den == 0) throw std::domain_error("Rational: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    Rational operator+(const Rational& o) const { return Rational(num * o.den + o.num * den, den * o.den); }
    Rational operator-(const Rational& o) const { return Rational(num * o.den - o.num * den, den * o.den); }
    Rational operator*(const Rational& o) const { return Rational(num * o.num, den * o.den); }
    Rational operator-() const { return Rational(-num, den); }
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool is_zero() const { return num == 0; }
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct CRat {
    Rational re, im;

    CRat() = default;
    CRat(Rational r) : re(r) {}
    CRat(Rational r, Rational i) : re(r), im(i) {}
    CRat(std::int64_t r, std::int64_t i = 0) : re(r), im(i) {}

    CRat operator+(const CRat& o) const { return {re + o.re, im + o.im}; }
    CRat operator-(const CRat& o) const { return {re - o.re, im - o.im}; }
    CRat operator*(const CRat& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
    CRat operator-() const { return {-re, -im}; }
    bool operator==(const CRat& o) const { return re == o.re && im == o.im; }
    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    CRat conj() const { return {re, -im}; }
    Complex to_complex() const { return {re.to_double(), im.to_double()}; }
};

// Laurent polynomial in h = sqrt(z), exponents of h restricted to
// [-kMaxHalfPow, +kMaxHalfPow]. Exponent +2 means one full power of z.
class ZHalfPoly {
  public:
    static constexpr int kMaxHalfPow = 16;
    static constexpr int kSize = 2 * kMaxHalfPow + 1;

    ZHalfPoly() = default;

    // coefficient of h^half_pow
    static ZHalfPoly monomial(CRat c, int half_pow) {
        ZHalfPoly p;
        p.at(half_pow) = c;
        return p;
    }

    CRat& at(int half_pow) {
        check(half_pow);
        return c_[half_pow + kMaxHalfPow];
    }
    const CRat& at(int half_pow) const {
        check(half_pow);
        return c_[half_pow + kMaxHalfPow];
    }

    ZHalfPoly operator+(const ZHalfPoly& o) const {
        ZHalfPoly r;
        for (int i = 0; i < kSize; ++i) r.c_[i] = c_[i] + o.c_[i];
        return r;
    }
    ZHalfPoly operator-(const ZHalfPoly& o) const {
        ZHalfPoly r;
        for (int i = 0; i < kSize; ++i) r.c_[i] = c_[i] - o.c_[i];
        return r;
    }
    ZHalfPoly operator*(const ZHalfPoly& o) const {
        ZHalfPoly r;
        for (int i = -kMaxHalfPow; i <= kMaxHalfPow; ++i) {
            if (at(i).is_zero()) continue;
            for (int j = -kMaxHalfPow; j <= kMaxHalfPow; ++j) {
                if (o.at(j).is_zero()) continue;
                r.at(i + j) = r.at(i + j) + at(i) * o.at(j);
            }
        }
        return r;
    }
    ZHalfPoly operator-() const {
        ZHalfPoly r;
        for (int i = 0; i < kSize; ++i) r.c_[i] = -c_[i];
        return r;
    }
    bool operator==(const ZHalfPoly& o) const {
        for (int i = 0; i < kSize; ++i)
            if (!(c_[i] == o.c_[i])) return false;
        return true;
    }
    bool is_zero() const {
        for (const auto& c : c_)
            if (!c.is_zero()) return false;
        return true;
    }

    Complex eval(double z) const {
        double h = std::sqrt(z);
        Complex s = 0.0;
        for (int k = -kMaxHalfPow; k <= kMaxHalfPow; ++k) {
            const CRat& c = at(k);
            if (c.is_zero()) continue;
            s += c.to_complex() * std::pow(h, k);
        }
        return s;
    }

  private:
    static void check(int half_pow) {
        if (half_pow < -kMaxHalfPow || half_pow > kMaxHalfPow)
            throw std::out_of_range("ZHalfPoly: exponent outside tracked range");
    }
    std::array<CRat, kSize> c_{};
};

// 3x3 matrix over the exact half-power ring.
struct ZPolyMat3 {
    std::array<ZHalfPoly, 9> m{};

    ZHalfPoly& operator()(std::size_t r, std::size_t c) { return m[3 * r + c]; }
    const ZHalfPoly& operator()(std::size_t r, std::size_t c) const { return m[3 * r + c]; }

    // constant matrix from complex-rational entries, all scaled by
    // scale * h^half_pow
    static ZPolyMat3 scaled(const std::array<CRat, 9>& entries, CRat scale, int half_pow) {
        ZPolyMat3 r;
        for (std::size_t i = 0; i < 9; ++i)
            r.m[i] = ZHalfPoly::monomial(entries[i] * scale, half_pow);
        return r;
    }

    static ZPolyMat3 identity() {
        ZPolyMat3 r;
        r(0, 0) = r(1, 1) = r(2, 2) = ZHalfPoly::monomial(CRat(1), 0);
        return r;
    }

    static ZPolyMat3 diagonal(ZHalfPoly a, ZHalfPoly b, ZHalfPoly c) {
        ZPolyMat3 r;
        r(0, 0) = a;
        r(1, 1) = b;
        r(2, 2) = c;
        return r;
    }

    ZPolyMat3 operator+(const ZPolyMat3& o) const {
        ZPolyMat3 r;
        for (std::size_t i = 0; i < 9; ++i) r.m[i] = m[i] + o.m[i];
        return r;
    }
    ZPolyMat3 operator-(const ZPolyMat3& o) const {
        ZPolyMat3 r;
        for (std::size_t i = 0; i < 9; ++i) r.m[i] = m[i] - o.m[i];
        return r;
    }
    ZPolyMat3 operator*(const ZPolyMat3& o) const {
        ZPolyMat3 r;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                r(i, j) = (*this)(i, 0) * o(0, j) + (*this)(i, 1) * o(1, j) + (*this)(i, 2) * o(2, j);
        return r;
    }
    ZPolyMat3 operator-() const {
        ZPolyMat3 r;
        for (std::size_t i = 0; i < 9; ++i) r.m[i] = -m[i];
        return r;
    }
    bool operator==(const ZPolyMat3& o) const {
        for (std::size_t i = 0; i < 9; ++i)
            if (!(m[i] == o.m[i])) return false;
        return true;
    }
    bool is_zero() const {
        for (const auto& e : m)
            if (!e.is_zero()) return false;
        return true;
    }

    Mat3 eval(double z) const {
        Mat3 r;
        for (std::size_t i = 0; i < 9; ++i) r.m[i] = m[i].eval(z);
        return r;
    }
};

inline ZPolyMat3 commutator(const ZPolyMat3& a, const ZPolyMat3& b) { return a * b - b * a; }

// multiply the whole matrix by c * h^half_pow
inline ZPolyMat3 shift(const ZPolyMat3& a, CRat c, int half_pow) {
    ZPolyMat3 r;
    ZHalfPoly mono = ZHalfPoly::monomial(c, half_pow);
    for (std::size_t i = 0; i < 9; ++i) r.m[i] = a.m[i] * mono;
    return r;
}

}  // namespace waveheat
