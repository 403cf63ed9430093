#pragma once

// Log-spaced quadrature over the spectral half-line and the collapsed
// multi-index sum. Data specs depend on k only through z = mu_k lambda and
// share one spectral support window in z (level k's lambda-support is the
// level-scaled interval [z_lo/mu_k, z_hi/mu_k]), so the double integral-sum
//     c_n  sum_k  int G(mu_k lambda) |lambda|^n dlambda
// collapses per level |k| = m via the substitution z = mu_k lambda to
//     c_n  ( sum_m count(m,n) mu_m^{-(n+1)} )  int G(z) z^n dz.
// The level sum converges; its truncation M is chosen so the rigorous tail
// bound falls below 1e-8 of the partial sum.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include "waveheat/data_spec.hpp"
#include "waveheat/multiindex.hpp"
#include "waveheat/zones.hpp"

namespace waveheat {

struct QuadratureGrid {
    int n = 1;
    // z-support window of the data, written as the lambda-window of the
    // lowest level (mu_0 = n): z ranges over [n lambda_min, n lambda_max]
    double lambda_min = 1e-5;
    double lambda_max = 1e3;
    int points_per_decade = 32;
    std::uint64_t kmax = 0;  // level truncation; 0 = automatic via the tail criterion
    double eps = kDefaultEps;
    double big_n = kDefaultN;

    void validate() const {
        if (n < 1) throw std::invalid_argument("QuadratureGrid: n must be >= 1");
        if (!(lambda_min > 0.0) || !(lambda_max > lambda_min))
            throw std::invalid_argument("QuadratureGrid: need 0 < lambda_min < lambda_max");
        if (points_per_decade < 4)
            throw std::invalid_argument("QuadratureGrid: points_per_decade must be >= 4");
        if (!(eps > 0.0) || !(eps < big_n))
            throw std::invalid_argument("QuadratureGrid: need 0 < eps < N");
    }
};

// deterministic pairwise reduction
inline double pairwise_sum(std::span<const double> x) {
    if (x.size() <= 4) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    }
    std::size_t half = x.size() / 2;
    return pairwise_sum(x.subspan(0, half)) + pairwise_sum(x.subspan(half));
}

struct ZoneEnergies {
    double e_int = 0.0;
    double e_bdd = 0.0;
    double e_ext = 0.0;
    double total() const { return e_int + e_bdd + e_ext; }
};

class SpectralQuadrature {
  public:
    explicit SpectralQuadrature(const QuadratureGrid& grid) : grid_(grid) {
        grid_.validate();
        build_nodes();
        build_level_sum();
    }

    const QuadratureGrid& grid() const { return grid_; }
    const std::vector<double>& nodes() const { return nodes_; }
    double level_sum() const { return level_sum_; }      // sum_m count(m,n) mu^{-(n+1)}
    double level_tail_bound() const { return tail_bound_; }
    std::uint64_t kmax_used() const { return kmax_used_; }

    // Plancherel constant c_n = (2 pi)^{-(3n+1)}
    double plancherel_constant() const {
        return std::pow(2.0 * 3.14159265358979323846, -(3.0 * grid_.n + 1.0));
    }

    // Assemble the three zone energies at time t.
    //   integrand(j, z) -> squared pointwise factor at node j (the data
    //   profile, measure and level weights are applied here; the propagator
    //   part is the caller's).
    template <class F>
    ZoneEnergies assemble(const F& integrand, const SpectralDataSpec& data, int weight_r) const {
        std::vector<double> node_val(nodes_.size());
        for (std::size_t j = 0; j < nodes_.size(); ++j) {
            double z = nodes_[j];
            double w0 = data.profile(z);
            node_val[j] = integrand(j, z) * w0 * w0 * std::pow(z, static_cast<double>(weight_r)) *
                          std::pow(z, static_cast<double>(grid_.n));
        }
        // trapezoid in ln z: segment integral = (dlog/2)(f_a z_a + f_b z_b)
        std::vector<double> seg_int, seg_bdd, seg_ext;
        seg_int.reserve(nodes_.size());
        seg_bdd.reserve(nodes_.size());
        seg_ext.reserve(nodes_.size());
        for (std::size_t j = 0; j + 1 < nodes_.size(); ++j) {
            double za = nodes_[j], zb = nodes_[j + 1];
            double piece = 0.5 * (std::log(zb) - std::log(za)) * (node_val[j] * za + node_val[j + 1] * zb);
            double mid = std::sqrt(za * zb);
            if (mid < grid_.eps)
                seg_int.push_back(piece);
            else if (mid > grid_.big_n)
                seg_ext.push_back(piece);
            else
                seg_bdd.push_back(piece);
        }
        const double scale = plancherel_constant() * level_sum_;
        ZoneEnergies e;
        e.e_int = scale * pairwise_sum(seg_int);
        e.e_bdd = scale * pairwise_sum(seg_bdd);
        e.e_ext = scale * pairwise_sum(seg_ext);
        return e;
    }

  private:
    void build_nodes() {
        const int n = grid_.n;
        const double z_lo = static_cast<double>(n) * grid_.lambda_min;
        const double z_hi = static_cast<double>(n) * grid_.lambda_max;
        const double ppd = grid_.points_per_decade;
        long j_lo = static_cast<long>(std::ceil(std::log10(z_lo) * ppd - 1e-9));
        long j_hi = static_cast<long>(std::floor(std::log10(z_hi) * ppd + 1e-9));
        nodes_.clear();
        nodes_.push_back(z_lo);
        for (long j = j_lo; j <= j_hi; ++j)
            nodes_.push_back(std::pow(10.0, static_cast<double>(j) / ppd));
        nodes_.push_back(z_hi);
        // zone boundaries must be nodes so no segment straddles a zone
        if (grid_.eps > z_lo && grid_.eps < z_hi) nodes_.push_back(grid_.eps);
        if (grid_.big_n > z_lo && grid_.big_n < z_hi) nodes_.push_back(grid_.big_n);
        std::sort(nodes_.begin(), nodes_.end());
        std::vector<double> dedup;
        dedup.reserve(nodes_.size());
        for (double z : nodes_) {
            if (dedup.empty() || z > dedup.back() * (1.0 + 1e-12)) dedup.push_back(z);
        }
        nodes_ = std::move(dedup);
        if (nodes_.size() < 2) throw std::invalid_argument("SpectralQuadrature: degenerate z window");
    }

    static double streamed_level_sum(int n, std::uint64_t kmax) {
        // memoized: the sum is deterministic in (n, kmax) and the stream over
        // ~1e8 levels is the dominant construction cost for n = 3
        static std::mutex mu;
        static std::map<std::pair<int, std::uint64_t>, double> cache;
        {
            std::lock_guard<std::mutex> lock(mu);
            auto it = cache.find({n, kmax});
            if (it != cache.end()) return it->second;
        }
        double sum = 0.0;
        double count = 1.0;  // count(m,n) via count(m) = count(m-1) (m+n-1)/m
        for (std::uint64_t m = 0; m <= kmax; ++m) {
            if (m > 0)
                count *= static_cast<double>(m + static_cast<std::uint64_t>(n) - 1) /
                         static_cast<double>(m);
            double inv = 1.0 / static_cast<double>(2 * m + static_cast<std::uint64_t>(n));
            double w = inv;
            for (int q = 0; q < n; ++q) w *= inv;
            sum += count * w;
        }
        std::lock_guard<std::mutex> lock(mu);
        cache.insert({{n, kmax}, sum});
        return sum;
    }

    void build_level_sum() {
        const int n = grid_.n;
        const double p = static_cast<double>(n + 1);
        kmax_used_ = grid_.kmax > 0 ? grid_.kmax : auto_truncation(n, p, 1e-8);
        level_sum_ = streamed_level_sum(n, kmax_used_);
        tail_bound_ = mu_weight_tail_bound(n, p, kmax_used_);
    }

    QuadratureGrid grid_;
    std::vector<double> nodes_;
    double level_sum_ = 0.0;
    double tail_bound_ = 0.0;
    std::uint64_t kmax_used_ = 0;
};

}  // namespace waveheat
