#pragma once

// Multi-index bookkeeping for the Hermite basis: harmonic-oscillator
// eigenvalues mu_k = 2|k| + n, level multiplicities, and convergent weighted
// sums over all multi-indices.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace waveheat {

struct MultiIndex {
    std::vector<std::uint32_t> k;  // entries k_j >= 0
    int n = 1;                     // spatial dimension, n >= 1

    MultiIndex(std::vector<std::uint32_t> entries, int dim) : k(std::move(entries)), n(dim) {
        if (n < 1) throw std::invalid_argument("MultiIndex: dimension must be >= 1");
        if (k.size() != static_cast<std::size_t>(n))
            throw std::invalid_argument("MultiIndex: entry count must equal the dimension");
    }

    std::uint64_t order() const {
        std::uint64_t s = 0;
        for (auto e : k) s += e;
        return s;
    }
};

// Harmonic-oscillator eigenvalue mu_k = 2|k| + n.
inline std::uint64_t mu_of(const MultiIndex& k) { return 2 * k.order() + static_cast<std::uint64_t>(k.n); }

inline std::uint64_t mu_of(std::uint64_t order, int n) { return 2 * order + static_cast<std::uint64_t>(n); }

// Number of multi-indices k in N^n with |k| = m, i.e. binomial(m+n-1, n-1).
// Overflow is detected and reported.
inline std::uint64_t multiindex_count(std::uint64_t m, int n) {
    if (n < 1) throw std::invalid_argument("multiindex_count: dimension must be >= 1");
    // binomial(m+n-1, n-1) with the smaller of the two symmetric choices
    std::uint64_t kk = static_cast<std::uint64_t>(n) - 1;
    if (kk > m) {
        // binomial(m+n-1, n-1) = binomial(m+n-1, m)
        std::uint64_t top = m + kk;
        kk = top - kk;
    }
    unsigned __int128 result = 1;
    for (std::uint64_t i = 1; i <= kk; ++i) {
        result = result * (m + static_cast<std::uint64_t>(n) - kk - 1 + i);
        result /= i;
        if (result > static_cast<unsigned __int128>(UINT64_MAX))
            throw std::overflow_error("multiindex_count: result exceeds 64-bit range for m=" +
                                      std::to_string(m) + ", n=" + std::to_string(n));
    }
    return static_cast<std::uint64_t>(result);
}

struct TailSum {
    double value = 0.0;       // partial sum over |k| <= M
    double tail_bound = 0.0;  // rigorous upper bound on the neglected tail
};

namespace detail {
inline double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}
}  // namespace detail

// Upper bound on sum_{m > M} count(m,n) (2m+n)^{-p} by integral comparison:
// count(m,n) <= (m+n-1)^{n-1}/(n-1)! <= (2m+n)^{n-1}/(n-1)!, and the
// resulting (2x+n)^{n-1-p} is decreasing, so the sum is bounded by the
// integral from M, giving (2M+n)^{n-p} / (2 (p-n) (n-1)!).
inline double mu_weight_tail_bound(int n, double p, std::uint64_t M) {
    if (p <= n) throw std::domain_error("mu_weight_tail_bound: requires p > n");
    double base = 2.0 * static_cast<double>(M) + n;
    return std::pow(base, static_cast<double>(n) - p) / (2.0 * (p - n) * detail::factorial(n - 1));
}

// Partial sum of sum_{k in N^n} mu_k^{-p} collapsed over levels |k| = m,
// together with a rigorous tail bound. Diverges for p <= n.
inline TailSum tail_weight_sum(int n, double p, std::uint64_t M) {
    if (n < 1) throw std::invalid_argument("tail_weight_sum: dimension must be >= 1");
    if (p <= static_cast<double>(n))
        throw std::domain_error("tail_weight_sum: sum diverges for p <= n");
    TailSum r;
    for (std::uint64_t m = 0; m <= M; ++m) {
        double count = static_cast<double>(multiindex_count(m, n));
        double mu = static_cast<double>(2 * m + static_cast<std::uint64_t>(n));
        r.value += count * std::pow(mu, -p);
    }
    r.tail_bound = mu_weight_tail_bound(n, p, M);
    return r;
}

// Smallest truncation M for which the tail bound drops below
// rel_tol * partial_sum. Solved from the closed-form bound, with the partial
// sum estimated from below by a short prefix (an under-estimate only makes
// the returned M larger, keeping the guarantee).
inline std::uint64_t auto_truncation(int n, double p, double rel_tol, std::uint64_t max_M = 500'000'000) {
    if (p <= static_cast<double>(n))
        throw std::domain_error("auto_truncation: sum diverges for p <= n");
    double partial = 0.0;
    for (std::uint64_t m = 0; m <= 64; ++m)
        partial += static_cast<double>(multiindex_count(m, n)) *
                   std::pow(static_cast<double>(2 * m + static_cast<std::uint64_t>(n)), -p);
    const double target = rel_tol * partial;
    // (2M+n)^{n-p} / (2 (p-n) (n-1)!) < target
    double rhs = target * 2.0 * (p - n) * detail::factorial(n - 1);
    double base = std::pow(rhs, 1.0 / (static_cast<double>(n) - p));
    double M = (base - static_cast<double>(n)) / 2.0 + 1.0;
    if (!(M > 0.0)) return 1;
    if (M > static_cast<double>(max_M)) return max_M;
    return static_cast<std::uint64_t>(M);
}

}  // namespace waveheat
