#pragma once

// Euclidean cross-check: the same 3x3 system driven by z = |xi|^2 on a radial
// frequency grid with measure |xi|^{n-1} d|xi|. The key function becomes
// rho~(|xi|) = |xi|^4 / (1 + |xi|^6) = rho(|xi|^2), and L1-class data below
// |xi| = 1 decay with norm rate -(n/4)(1/m - 1/2) - r/4 at m = 1.

#include <functional>
#include <string>
#include <vector>

#include "waveheat/plancherel.hpp"
#include "waveheat/propagator.hpp"
#include "waveheat/slope_fit.hpp"
#include "waveheat/zones.hpp"

namespace waveheat {

inline double rho_tilde(double xi_abs) {
    if (!(xi_abs > 0.0)) throw std::domain_error("rho_tilde: requires |xi| > 0");
    double x2 = xi_abs * xi_abs;
    return rho(x2);
}

struct EuclidGrid {
    int n = 2;
    int r = 0;  // derivative weight order
    double xi_min = 1e-4;
    double xi_max = 1.0;  // m = 1 class data supported below |xi| = 1
    int points_per_decade = 32;

    void validate() const {
        if (n < 1) throw std::invalid_argument("EuclidGrid: n must be >= 1");
        if (r < 0) throw std::invalid_argument("EuclidGrid: r must be >= 0");
        if (!(xi_min > 0.0) || !(xi_max > xi_min))
            throw std::invalid_argument("EuclidGrid: need 0 < xi_min < xi_max");
        if (points_per_decade < 4)
            throw std::invalid_argument("EuclidGrid: points_per_decade must be >= 4");
    }
};

struct EuclidEnergies {
    double e_int = 0.0, e_bdd = 0.0, e_ext = 0.0;
    double total() const { return e_int + e_bdd + e_ext; }
};

class EuclidAssembler {
  public:
    // `profile` is an optional radial data profile w0(z) with z = xi^2
    // (defaults to the bounded m = 1 class, w0 = 1).
    EuclidAssembler(const EuclidGrid& grid, Vec3 v = {{1.0, 0.0, 0.0}},
                    double eps = kDefaultEps, double big_n = kDefaultN,
                    std::function<double(double)> profile = {})
        : grid_(grid), v_(v), eps_(eps), big_n_(big_n), profile_(std::move(profile)) {
        grid_.validate();
        build_nodes();
        props_.reserve(nodes_.size());
        for (double xi : nodes_) props_.push_back(NodePropagator::at(xi * xi));
    }

    const std::vector<double>& nodes() const { return nodes_; }

    EuclidEnergies at(double t) const {
        std::vector<double> val(nodes_.size());
        for (std::size_t j = 0; j < nodes_.size(); ++j) {
            double xi = nodes_[j];
            Vec3 w = props_[j].apply(t, v_);
            double w0 = profile_ ? profile_(xi * xi) : 1.0;
            val[j] = w.norm() * w.norm() * w0 * w0 * std::pow(xi, 2.0 * grid_.r) *
                     std::pow(xi, static_cast<double>(grid_.n - 1));
        }
        std::vector<double> seg_int, seg_bdd, seg_ext;
        for (std::size_t j = 0; j + 1 < nodes_.size(); ++j) {
            double a = nodes_[j], b = nodes_[j + 1];
            double piece = 0.5 * (std::log(b) - std::log(a)) * (val[j] * a + val[j + 1] * b);
            double zmid = a * b;  // z at the geometric midpoint is (sqrt(ab))^2
            if (zmid < eps_)
                seg_int.push_back(piece);
            else if (zmid > big_n_)
                seg_ext.push_back(piece);
            else
                seg_bdd.push_back(piece);
        }
        EuclidEnergies e;
        e.e_int = pairwise_sum(seg_int);
        e.e_bdd = pairwise_sum(seg_bdd);
        e.e_ext = pairwise_sum(seg_ext);
        return e;
    }

    std::vector<EuclidEnergies> sweep(std::span<const double> t_grid, int threads = 1) const {
        std::vector<EuclidEnergies> out(t_grid.size());
        parallel_for(t_grid.size(), threads, [&](std::size_t i) { out[i] = at(t_grid[i]); });
        return out;
    }

  private:
    void build_nodes() {
        const double ppd = grid_.points_per_decade;
        long j_lo = static_cast<long>(std::ceil(std::log10(grid_.xi_min) * ppd - 1e-9));
        long j_hi = static_cast<long>(std::floor(std::log10(grid_.xi_max) * ppd + 1e-9));
        nodes_.push_back(grid_.xi_min);
        for (long j = j_lo; j <= j_hi; ++j) nodes_.push_back(std::pow(10.0, static_cast<double>(j) / ppd));
        nodes_.push_back(grid_.xi_max);
        // zone boundaries in xi: z = xi^2
        double xi_eps = std::sqrt(eps_), xi_n = std::sqrt(big_n_);
        if (xi_eps > grid_.xi_min && xi_eps < grid_.xi_max) nodes_.push_back(xi_eps);
        if (xi_n > grid_.xi_min && xi_n < grid_.xi_max) nodes_.push_back(xi_n);
        std::sort(nodes_.begin(), nodes_.end());
        std::vector<double> dedup;
        for (double x : nodes_)
            if (dedup.empty() || x > dedup.back() * (1.0 + 1e-12)) dedup.push_back(x);
        nodes_ = std::move(dedup);
        if (nodes_.size() < 2) throw std::invalid_argument("EuclidAssembler: degenerate xi window");
    }

    EuclidGrid grid_;
    Vec3 v_;
    double eps_, big_n_;
    std::function<double(double)> profile_;
    std::vector<double> nodes_;
    std::vector<NodePropagator> props_;
};

struct EuclidRateResult {
    std::vector<double> t_grid;
    std::vector<EuclidEnergies> energies;
    SlopeFit fit;
    double norm_slope = 0.0;
};

// m = 1 endpoint experiment: bounded data on |xi| < 1, squared slope against
// -n/4 - r/2 (norm exponent -n/8 - r/4).
inline ExperimentReport euclid_experiment(int n, int r, EuclidGrid grid, const RateWindow& window = {},
                                          int threads = 1) {
    if (n < 1 || r < 0) throw std::invalid_argument("euclid_experiment: need n >= 1, r >= 0");
    grid.n = n;
    grid.r = r;
    ExperimentReport rep;
    rep.name = "euclid";

    ZoneRateResult zr;
    zr.zone = "small";
    zr.t_grid = log_grid(window.t_min, window.t_max, window.t_points);
    EuclidAssembler asmb(grid);
    auto es = asmb.sweep(zr.t_grid, threads);
    zr.energies.reserve(es.size());
    zr.curve.fit_t_min = window.t_min;
    zr.curve.fit_t_max = window.t_max;
    for (std::size_t i = 0; i < es.size(); ++i) {
        zr.energies.push_back({es[i].e_int, es[i].e_bdd, es[i].e_ext});
        zr.curve.samples.push_back({zr.t_grid[i], es[i].total()});
    }
    zr.fit = slope_fit(zr.curve.samples, window.t_min, window.t_max);
    zr.curve.fitted_slope = zr.fit.slope;
    zr.norm_slope = 0.5 * zr.fit.slope;
    double expected = -static_cast<double>(n) / 8.0 - static_cast<double>(r) / 4.0;
    zr.checks.push_back(
        check_abs("euclid norm slope (expected -n/8 - r/4 at m=1)", expected, zr.norm_slope, 0.03));
    rep.fold(zr);
    rep.zones.push_back(std::move(zr));
    rep.finalize();
    return rep;
}

}  // namespace waveheat
