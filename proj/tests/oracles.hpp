#pragma once

// Test-only oracles, independent of the library code paths they check:
// an adaptive Dormand-Prince integrator for the phase-space ODE systems and
// brute-force combinatorial enumeration.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracles {

using Cx = std::complex<double>;

template <std::size_t N>
using State = std::array<Cx, N>;

template <std::size_t N>
double state_norm(const State<N>& s) {
    double v = 0.0;
    for (const auto& c : s) v += std::norm(c);
    return std::sqrt(v);
}

// Dormand-Prince 5(4) with PI-free step control, integrating y' = f(t, y)
// from 0 to t_end.
template <std::size_t N, class F>
State<N> rk45(const F& f, State<N> y, double t_end, double tol = 1e-11) {
    if (t_end == 0.0) return y;
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    double t = 0.0;
    double h = t_end / 100.0;
    State<N> k1 = f(t, y);
    int guard = 0;
    while (t < t_end) {
        if (++guard > 20'000'000) throw std::runtime_error("rk45: step limit exceeded");
        if (t + h > t_end) h = t_end - t;
        State<N> y2;
        for (std::size_t i = 0; i < N; ++i) y2[i] = y[i] + h * (a21 * k1[i]);
        State<N> k2 = f(t + c2 * h, y2);
        State<N> y3;
        for (std::size_t i = 0; i < N; ++i) y3[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        State<N> k3 = f(t + c3 * h, y3);
        State<N> y4;
        for (std::size_t i = 0; i < N; ++i)
            y4[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        State<N> k4 = f(t + c4 * h, y4);
        State<N> y5;
        for (std::size_t i = 0; i < N; ++i)
            y5[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        State<N> k5 = f(t + c5 * h, y5);
        State<N> y6;
        for (std::size_t i = 0; i < N; ++i)
            y6[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        State<N> k6 = f(t + h, y6);
        State<N> y_new;
        for (std::size_t i = 0; i < N; ++i)
            y_new[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        State<N> k7 = f(t + h, y_new);
        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            Cx e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            err += std::norm(e);
        }
        err = std::sqrt(err);
        double scale = tol * (1.0 + state_norm(y));
        if (err <= scale) {
            t += h;
            y = y_new;
            k1 = k7;  // FSAL
        }
        double factor = 0.9 * std::pow(scale / (err + 1e-300), 0.2);
        h *= std::min(4.0, std::max(0.2, factor));
    }
    return y;
}

// number of n-tuples of non-negative integers summing to m, by enumeration
inline std::uint64_t count_multiindices_brute(std::uint64_t m, int n) {
    if (n == 1) return 1;
    std::uint64_t total = 0;
    for (std::uint64_t first = 0; first <= m; ++first)
        total += count_multiindices_brute(m - first, n - 1);
    return total;
}

}  // namespace oracles
