#pragma once

// Squared L2 energy assembly over the three spectral zones and the decay-rate
// experiments against the energy estimate: interior zone gives the
// (1+t)^{-Q/4} squared rate for L1-class data, the bounded zone decays
// exponentially, and the exterior zone realizes the regularity-loss rate
// (1+t)^{-s} for Hs-class data.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "waveheat/data_spec.hpp"
#include "waveheat/eigen3.hpp"
#include "waveheat/expm.hpp"
#include "waveheat/parallel.hpp"
#include "waveheat/propagator.hpp"
#include "waveheat/quadrature.hpp"
#include "waveheat/report.hpp"
#include "waveheat/slope_fit.hpp"

namespace waveheat {

// Optimal regularity balancing the two terms of the energy estimate:
// s = floor((n+1)/2).
inline int balanced_regularity(int n) {
    if (n < 1) throw std::invalid_argument("balanced_regularity: n must be >= 1");
    return (n + 1) / 2;
}

// Cached spectral decomposition of A(z) at one node, so a t-sweep reuses the
// eigenvectors.
struct NodePropagator {
    Mat3 V, Vinv;
    std::array<Complex, 3> lam;

    static NodePropagator at(double z) {
        NodePropagator p;
        auto trip = eigenvalues(z);
        p.lam = trip.lam;
        for (std::size_t j = 0; j < 3; ++j) {
            Vec3 v = detail::eigenvector(assemble_A(z), p.lam[j]);
            for (std::size_t i = 0; i < 3; ++i) p.V(i, j) = v[i];
        }
        p.Vinv = inverse(p.V);
        return p;
    }

    Vec3 apply(double t, const Vec3& x) const {
        if (t == 0.0) return x;
        Vec3 y = Vinv * x;
        for (std::size_t j = 0; j < 3; ++j) y[j] *= std::exp(-lam[j] * t);
        return V * y;
    }

    Mat3 matrix(double t) const {
        if (t == 0.0) return Mat3::identity();
        Mat3 D = Mat3::diagonal(std::exp(-lam[0] * t), std::exp(-lam[1] * t), std::exp(-lam[2] * t));
        return V * D * Vinv;
    }
};

// One-shot three-zone energy at time t (builds the quadrature; sweeps reuse
// a DecayAssembler instead).
inline ZoneEnergies energy(double t, const SpectralDataSpec& data, const QuadratureGrid& grid,
                           int weight_r = 0) {
    if (!(t >= 0.0)) throw std::domain_error("energy: requires t >= 0");
    SpectralQuadrature quad(grid);
    std::vector<NodePropagator> props;
    props.reserve(quad.nodes().size());
    for (double z : quad.nodes()) props.push_back(NodePropagator::at(z));
    return quad.assemble(
        [&](std::size_t j, double) {
            Vec3 w = props[j].apply(t, data.v);
            return w.norm() * w.norm();
        },
        data, weight_r);
}

class DecayAssembler {
  public:
    DecayAssembler(const QuadratureGrid& grid, SpectralDataSpec data, int weight_r = 0)
        : quad_(grid), data_(std::move(data)), weight_r_(weight_r) {
        props_.reserve(quad_.nodes().size());
        for (double z : quad_.nodes()) props_.push_back(NodePropagator::at(z));
    }

    const SpectralQuadrature& quadrature() const { return quad_; }

    ZoneEnergies at(double t) const {
        return quad_.assemble(
            [&](std::size_t j, double) {
                Vec3 w = props_[j].apply(t, data_.v);
                return w.norm() * w.norm();
            },
            data_, weight_r_);
    }

    std::vector<ZoneEnergies> sweep(std::span<const double> t_grid, int threads = 1) const {
        std::vector<ZoneEnergies> out(t_grid.size());
        parallel_for(t_grid.size(), threads, [&](std::size_t i) { out[i] = at(t_grid[i]); });
        return out;
    }

  private:
    SpectralQuadrature quad_;
    SpectralDataSpec data_;
    int weight_r_;
    std::vector<NodePropagator> props_;
};

// Quadrature adequacy probe: recompute with doubled points per decade and
// doubled level truncation, at the two window ends and the geometric middle.
// Every part's change is measured against the total energy at that time (an
// exponentially dead part carries no information at its own scale), and the
// fitted part is additionally held to 1% relative to itself across the
// window.
struct RefinementCheck {
    double fitted_change = 0.0;  // fitted part relative to itself
    double gated_change = 0.0;   // all parts relative to the total
    bool pass(double tol = 0.01) const {
        return gated_change < tol && fitted_change < tol;
    }
    double worst() const { return std::max(fitted_change, gated_change); }
};

inline RefinementCheck refinement_check(const SpectralDataSpec& data, const QuadratureGrid& grid,
                                        int weight_r, Zone fitted, double t_min, double t_max) {
    QuadratureGrid fine = grid;
    fine.points_per_decade *= 2;
    SpectralQuadrature probe(grid);
    fine.kmax = 2 * probe.kmax_used();
    auto part = [](const ZoneEnergies& e, Zone zn) {
        return zn == Zone::Small ? e.e_int : (zn == Zone::Large ? e.e_ext : e.e_bdd);
    };
    RefinementCheck out;
    const double t_mid = std::sqrt(t_min * t_max);
    for (double t : {t_min, t_mid, t_max}) {
        ZoneEnergies coarse = energy(t, data, grid, weight_r);
        ZoneEnergies refined = energy(t, data, fine, weight_r);
        double total = std::max({coarse.total(), refined.total(), 1e-300});
        for (Zone zn : {Zone::Small, Zone::Bounded, Zone::Large}) {
            double a = part(coarse, zn), b = part(refined, zn);
            out.gated_change = std::max(out.gated_change, std::abs(a - b) / total);
            if (zn == fitted && std::max(std::abs(a), std::abs(b)) > 0.0)
                out.fitted_change = std::max(out.fitted_change,
                                             std::abs(a - b) / std::max(std::abs(a), std::abs(b)));
        }
    }
    return out;
}

struct ZoneRateResult {
    std::string zone;
    std::vector<double> t_grid;
    std::vector<ZoneEnergies> energies;
    EnergyCurve curve;             // fitted part's samples and slope
    SlopeFit fit;                  // squared-energy fit (log-log or exp rate)
    double norm_slope = 0.0;       // fit.slope / 2 for power-law zones
    std::vector<CheckResult> checks;
};

struct ExperimentReport {
    std::string name;
    std::vector<ZoneRateResult> zones;
    std::vector<CheckResult> checks;  // flattened over zones plus global gates
    bool pass = true;

    void fold(const ZoneRateResult& zr) {
        for (const auto& c : zr.checks) checks.push_back(c);
    }
    void finalize() { pass = all_pass(checks); }
};

struct RateWindow {
    double t_min = 1e2;
    double t_max = 1e4;
    int t_points = 25;
};

namespace detail_plancherel {

inline EnergyCurve zone_curve(const std::vector<double>& ts, const std::vector<ZoneEnergies>& es,
                              Zone zone, double t_min, double t_max) {
    EnergyCurve c;
    c.samples.reserve(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        double v = zone == Zone::Small ? es[i].e_int : (zone == Zone::Large ? es[i].e_ext : es[i].e_bdd);
        c.samples.push_back({ts[i], v});
    }
    c.fit_t_min = t_min;
    c.fit_t_max = t_max;
    return c;
}

}  // namespace detail_plancherel

// Zone-resolved verification of the main energy estimate for dimension n and
// regularity s:
//   small zone, L1-class data  -> squared slope -Q/4 (norm -Q/8),
//   large zone, Hs-class data  -> squared slope -s (norm -s/2),
//   bounded zone               -> exponential with positive fitted rate.
inline ExperimentReport energy_rate_experiment(int n, int s, QuadratureGrid base_grid,
                                            const RateWindow& window = {}, int threads = 1,
                                            bool convergence_check = true,
                                            const std::string& zone_filter = "all") {
    if (n < 1 || s < 0) throw std::invalid_argument("energy_rate_experiment: need n >= 1, s >= 0");
    base_grid.n = n;
    const double Q = 2.0 * n + 2.0;
    ExperimentReport rep;
    rep.name = "energy-rates";

    auto want = [&](const char* z) { return zone_filter == "all" || zone_filter == z; };

    if (want("small")) {
        ZoneRateResult zr;
        zr.zone = "small";
        zr.t_grid = log_grid(window.t_min, window.t_max, window.t_points);
        DecayAssembler asmb(base_grid, SpectralDataSpec::l1like(n));
        zr.energies = asmb.sweep(zr.t_grid, threads);
        zr.curve = detail_plancherel::zone_curve(zr.t_grid, zr.energies, Zone::Small, window.t_min,
                                                 window.t_max);
        zr.fit = slope_fit(zr.curve.samples, window.t_min, window.t_max);
        zr.curve.fitted_slope = zr.fit.slope;
        zr.norm_slope = 0.5 * zr.fit.slope;
        zr.checks.push_back(check_abs("small-zone norm slope (expected -Q/8)", -Q / 8.0,
                                      zr.norm_slope, 0.05));
        if (convergence_check) {
            auto rc = refinement_check(SpectralDataSpec::l1like(n), base_grid, 0, Zone::Small,
                                       window.t_min, window.t_max);
            zr.checks.push_back(
                check_le("small-zone quadrature refinement change", 0.01, rc.worst()));
        }
        rep.fold(zr);
        rep.zones.push_back(std::move(zr));
    }

    if (want("large")) {
        ZoneRateResult zr;
        zr.zone = "large";
        zr.t_grid = log_grid(window.t_min, window.t_max, window.t_points);
        QuadratureGrid g = base_grid;
        // the loss mechanism needs spectral content well above the fit window
        g.lambda_max = std::max(g.lambda_max, 100.0 * window.t_max / n);
        DecayAssembler asmb(g, SpectralDataSpec::hs_like(n, s));
        zr.energies = asmb.sweep(zr.t_grid, threads);
        zr.curve = detail_plancherel::zone_curve(zr.t_grid, zr.energies, Zone::Large, window.t_min,
                                                 window.t_max);
        zr.fit = slope_fit(zr.curve.samples, window.t_min, window.t_max);
        zr.curve.fitted_slope = zr.fit.slope;
        zr.norm_slope = 0.5 * zr.fit.slope;
        zr.checks.push_back(check_abs("large-zone norm slope (expected -s/2)",
                                      -0.5 * static_cast<double>(s), zr.norm_slope, 0.05));
        if (convergence_check) {
            auto rc = refinement_check(SpectralDataSpec::hs_like(n, s), g, 0, Zone::Large,
                                       window.t_min, window.t_max);
            zr.checks.push_back(
                check_le("large-zone quadrature refinement change", 0.01, rc.worst()));
        }
        rep.fold(zr);
        rep.zones.push_back(std::move(zr));
    }

    if (want("bounded")) {
        ZoneRateResult zr;
        zr.zone = "bounded";
        zr.t_grid = linear_grid(0.0, 200.0, 41);
        DecayAssembler asmb(base_grid, SpectralDataSpec::l1like(n));
        zr.energies = asmb.sweep(zr.t_grid, threads);
        zr.curve = detail_plancherel::zone_curve(zr.t_grid, zr.energies, Zone::Bounded, 50.0, 200.0);
        zr.fit = exp_rate_fit(zr.curve.samples, 50.0, 200.0);
        zr.curve.fitted_slope = -zr.fit.slope;
        zr.checks.push_back(
            check_ge("bounded-zone fitted exponential rate positive", 1e-4, zr.fit.slope));
        rep.fold(zr);
        rep.zones.push_back(std::move(zr));
    }

    rep.finalize();
    return rep;
}

// sup_{z > N} z^{-s} exp(-t/z), the scalar core of the large-zone loss
// mechanism; bounded by (s/e)^s t^{-s} once t/N exceeds s.
inline double loss_mechanism_sup(int s, double t, double big_n, int grid_points = 4000) {
    double sup = 0.0;
    auto zs = log_grid(big_n, std::max(1e4 * t, 1e6), grid_points);
    for (double z : zs) sup = std::max(sup, std::pow(z, -s) * std::exp(-t / z));
    return sup;
}

}  // namespace waveheat
