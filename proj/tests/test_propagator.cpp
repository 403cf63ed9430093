#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "waveheat/propagator.hpp"
#include "waveheat/slope_fit.hpp"

using namespace waveheat;

namespace {
Complex rand_complex(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return {u(rng), u(rng)};
}
}  // namespace

TEST_CASE("propagate at t = 0 returns the data") {
    Vec3 w0{{Complex(1, 2), Complex(-0.5, 0), Complex(0, 3)}};
    Vec3 w = propagate(2.0, 0.0, w0);
    CHECK((w - w0).norm() == 0.0);
}

TEST_CASE("propagate agrees with the adaptive ODE oracle") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> logz(-3.0, 3.0), ts(0.0, 5.0);
    for (int trial = 0; trial < 100; ++trial) {
        double z = std::pow(10.0, logz(rng));
        double t = ts(rng);
        Mat3 A = assemble_A(z);
        oracles::State<3> w0 = {rand_complex(rng), rand_complex(rng), rand_complex(rng)};
        auto rhs = [&](double, const oracles::State<3>& y) {
            oracles::State<3> d;
            for (int i = 0; i < 3; ++i)
                d[i] = -(A(i, 0) * y[0] + A(i, 1) * y[1] + A(i, 2) * y[2]);
            return d;
        };
        auto ref = oracles::rk45<3>(rhs, w0, t);
        Vec3 got = propagate(z, t, {{w0[0], w0[1], w0[2]}});
        double err = std::sqrt(std::norm(got[0] - ref[0]) + std::norm(got[1] - ref[1]) +
                               std::norm(got[2] - ref[2]));
        CHECK(err < 1e-8);
    }
}

TEST_CASE("propagate semigroup law") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> logz(-4.0, 4.0), ts(0.0, 3.0);
    for (int trial = 0; trial < 40; ++trial) {
        double z = std::pow(10.0, logz(rng));
        double t = ts(rng), s = ts(rng);
        Vec3 w0{{rand_complex(rng), rand_complex(rng), rand_complex(rng)}};
        Vec3 two_step = propagate(z, s, propagate(z, t, w0));
        Vec3 one_step = propagate(z, t + s, w0);
        CHECK((two_step - one_step).norm() <= 1e-9 * std::max(1.0, one_step.norm()));
    }
}

TEST_CASE("reconstruction from the scalar second-order system") {
    // solve the (u, du, theta) system with the oracle and build the ansatz
    // vector; it must match the matrix evolution of the same data
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> logz(-2.0, 2.0), ts(0.2, 4.0);
    for (int trial = 0; trial < 30; ++trial) {
        double z = std::pow(10.0, logz(rng));
        double sq = std::sqrt(z);
        double t = ts(rng);
        Complex u0 = rand_complex(rng), u1 = rand_complex(rng), th0 = rand_complex(rng);
        auto rhs = [&](double, const oracles::State<3>& y) {
            // y = (u, du, theta):  u' = du, du' = -z u - theta, theta' = du - z theta
            return oracles::State<3>{y[1], -z * y[0] - y[2], y[1] - z * y[2]};
        };
        auto scalar = oracles::rk45<3>(rhs, {u0, u1, th0}, t);
        Vec3 from_scalar{{scalar[1] + sq * scalar[0], scalar[1] - sq * scalar[0], scalar[2]}};
        Vec3 w0{{u1 + sq * u0, u1 - sq * u0, th0}};
        Vec3 from_matrix = propagate(z, t, w0);
        CHECK((from_scalar - from_matrix).norm() < 1e-8);
    }
}

TEST_CASE("component extraction rows") {
    auto c1 = extract_components({{1.0, -1.0, 0.0}});
    CHECK(std::abs(c1.sqrtz_u - Complex(1.0)) == 0.0);
    CHECK(std::abs(c1.dt_u) == 0.0);
    CHECK(std::abs(c1.theta) == 0.0);
    auto c2 = extract_components({{1.0, 1.0, 0.0}});
    CHECK(std::abs(c2.dt_u - Complex(1.0)) == 0.0);
    CHECK(std::abs(c2.sqrtz_u) == 0.0);
    auto c3 = extract_components({{0.0, 0.0, 5.0}});
    CHECK(std::abs(c3.theta - Complex(5.0)) == 0.0);
}

TEST_CASE("pointwise rate and its asymptotic limits") {
    auto zs = log_grid(1e-5, 1e5, 81);
    double c_star = pointwise_rate(zs);
    CHECK(c_star >= 0.1);
    CHECK(c_star > 0.0);

    double lo = eigenvalues(1e-5).min_real() / rho(1e-5);
    double hi = eigenvalues(1e5).min_real() / rho(1e5);
    CHECK(std::abs(lo - 1.0) < 0.05);
    CHECK(std::abs(hi - 0.5) < 0.025);
}

TEST_CASE("operator-norm ratio stays bounded") {
    auto zs = log_grid(1e-5, 1e5, 41);
    double c_star = pointwise_rate(zs);

    // identity at t = 0
    auto t0 = linear_grid(0.0, 1.0, 2);
    CHECK(verify_operator_bound(1.0, std::span(t0.data(), 1), c_star) == Catch::Approx(1.0));

    for (double z : {1e-3, 0.5, 5.0, 1e3}) {
        auto ts = linear_grid(0.0, 50.0 / rho(z), 26);
        CHECK(verify_operator_bound(z, ts, c_star) <= 100.0);
    }
}

TEST_CASE("norm bound with a single global constant") {
    std::mt19937_64 rng(8);
    auto zs = log_grid(1e-4, 1e4, 33);
    double c_star = pointwise_rate(zs);
    double worst = 0.0;
    for (double z : zs) {
        Vec3 w0{{rand_complex(rng), rand_complex(rng), rand_complex(rng)}};
        for (double t : {0.5 / rho(z), 2.0 / rho(z), 10.0 / rho(z)}) {
            double ratio = propagate(z, t, w0).norm() /
                           (std::exp(-c_star * rho(z) * t) * w0.norm());
            worst = std::max(worst, ratio);
        }
    }
    CHECK(worst <= 100.0);
}

TEST_CASE("bounded-zone evolution decays exponentially") {
    std::mt19937_64 rng(4);
    Vec3 w0{{rand_complex(rng), rand_complex(rng), rand_complex(rng)}};
    for (double z : {0.1, 1.0, 10.0}) {
        std::vector<CurveSample> curve;
        for (double t : linear_grid(0.0, 80.0, 33))
            curve.push_back({t, propagate(z, t, w0).norm()});
        double rate = exp_rate_fit(curve, 20.0, 80.0).slope;
        CHECK(rate > 0.0);
        // at least the zone-wide spectral floor
        double floor = eigenvalues(z).min_real();
        CHECK(rate >= 0.5 * floor);
    }
}

TEST_CASE("preconditions are enforced") {
    CHECK_THROWS_AS(propagate(0.0, 1.0, Vec3{}), std::domain_error);
    CHECK_THROWS_AS(propagate(1.0, -1.0, Vec3{}), std::domain_error);
    std::vector<double> empty;
    CHECK_THROWS_AS(pointwise_rate(empty), std::invalid_argument);
}
