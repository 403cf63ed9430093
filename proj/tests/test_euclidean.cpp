#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "waveheat/euclidean.hpp"
#include "waveheat/expm.hpp"

using namespace waveheat;

TEST_CASE("euclidean key function") {
    CHECK(rho_tilde(1.0) == Catch::Approx(0.5).epsilon(1e-15));
    CHECK(rho_tilde(10.0) == Catch::Approx(1e4 / (1.0 + 1e6)).epsilon(1e-12));
    CHECK(std::abs(rho_tilde(10.0) - 1e-2) < 2e-4);
    CHECK_THROWS_AS(rho_tilde(0.0), std::domain_error);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.01, 50.0);
    for (int trial = 0; trial < 20; ++trial) {
        double x = u(rng);
        CHECK(std::abs(rho_tilde(x) - rho(x * x)) <= 1e-15 * rho(x * x));
    }
}

TEST_CASE("euclid energy at t = 0 equals the data norm") {
    EuclidGrid g;
    g.n = 2;
    g.xi_min = 1e-3;
    g.xi_max = 1.0;
    g.points_per_decade = 256;
    EuclidAssembler asmb(g);
    double e0 = asmb.at(0.0).total();
    // int_0^1 xi^{n-1} dxi restricted to [xi_min, 1], data vector is a unit
    // vector so the squared norm factor is 1
    double expect = (1.0 - std::pow(g.xi_min, 2.0)) / 2.0;
    CHECK(e0 == Catch::Approx(expect).epsilon(1e-4));
}

TEST_CASE("shared matrix path equals a standalone reassembly") {
    EuclidGrid g;
    g.n = 3;
    g.r = 1;
    g.xi_min = 1e-2;
    g.xi_max = 1.0;
    g.points_per_decade = 12;
    EuclidAssembler asmb(g);
    for (double t : {0.0, 0.5, 5.0, 50.0}) {
        double shared = asmb.at(t).total();
        // direct loop over the same nodes using the generic exponential
        const auto& xs = asmb.nodes();
        std::vector<double> val(xs.size());
        for (std::size_t j = 0; j < xs.size(); ++j) {
            Vec3 w = expm_neg(assemble_A(xs[j] * xs[j]), t) * Vec3{{1.0, 0.0, 0.0}};
            val[j] = w.norm() * w.norm() * std::pow(xs[j], 2.0 * g.r + g.n - 1);
        }
        double direct = 0.0;
        for (std::size_t j = 0; j + 1 < xs.size(); ++j)
            direct += 0.5 * (std::log(xs[j + 1]) - std::log(xs[j])) *
                      (val[j] * xs[j] + val[j + 1] * xs[j + 1]);
        CHECK(shared == Catch::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("m = 1 decay rates") {
    EuclidGrid g;
    g.points_per_decade = 24;
    RateWindow w;
    w.t_min = 1e3;
    w.t_max = 1e5;
    w.t_points = 17;

    auto r20 = euclid_experiment(2, 0, g, w, 2);
    CHECK(std::abs(r20.zones[0].norm_slope - (-0.25)) < 0.03);

    auto r11 = euclid_experiment(1, 1, g, w, 2);
    CHECK(std::abs(r11.zones[0].norm_slope - (-0.375)) < 0.03);
}

TEST_CASE("large-frequency regularity loss matches the shared mechanism") {
    // H^s-type radial weight above the large-zone edge: squared slope -s
    const int n = 1, s = 1;
    EuclidGrid g;
    g.n = n;
    g.xi_min = std::sqrt(10.0);
    g.xi_max = 3e3;
    g.points_per_decade = 24;
    auto profile = [&](double z) {
        return std::pow(z, -0.5 * (s + 0.5 * n));  // z^{n/2 - 1} |w0|^2 = z^{-s-1}
    };
    EuclidAssembler asmb(g, {{1.0, 0.0, 0.0}}, kDefaultEps, kDefaultN, profile);
    std::vector<CurveSample> curve;
    for (double t : log_grid(1e2, 1e4, 17)) curve.push_back({t, asmb.at(t).total()});
    double slope = slope_fit(curve, 1e2, 1e4).slope;
    CHECK(std::abs(slope - (-1.0 * s)) < 0.1);
}

TEST_CASE("grid validation") {
    EuclidGrid g;
    g.xi_min = -1.0;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    CHECK_THROWS_AS(euclid_experiment(0, 0, EuclidGrid{}), std::invalid_argument);
}
