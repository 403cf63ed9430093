#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "waveheat/eigen3.hpp"
#include "waveheat/expm.hpp"
#include "waveheat/propagator.hpp"
#include "waveheat/system_matrix.hpp"

using namespace waveheat;

namespace {
Complex rand_complex(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return {u(rng), u(rng)};
}
}  // namespace

TEST_CASE("system matrix assembly") {
    Mat3 a0 = assemble_A(0.0);
    CHECK((a0 - coeff_A0()).max_abs() == 0.0);

    Mat3 a1 = assemble_A(1.0);
    CHECK(a1(0, 1) == Complex(-1.0));
    CHECK(a1(2, 2) == Complex(1.0));

    Mat3 a4 = assemble_A(4.0);
    CHECK(a4(1, 0) == Complex(2.0));
    CHECK(a4(2, 0) == Complex(-0.5));
    CHECK_THROWS_AS(assemble_A(-1.0), std::domain_error);
}

TEST_CASE("identity and zero matrix contracts") {
    std::mt19937_64 rng(11);
    Mat3 M;
    for (auto& e : M.m) e = rand_complex(rng);
    CHECK(((Mat3::identity() * M) - M).max_abs() == 0.0);
    CHECK(((Mat3::zero() + M) - M).max_abs() == 0.0);
}

TEST_CASE("characteristic cubic coefficients") {
    auto c0 = char_poly_coeffs(0.0);
    CHECK(c0 == std::array<double, 4>{-1.0, 0.0, -1.0, 0.0});
    auto c1 = char_poly_coeffs(1.0);
    CHECK(c1 == std::array<double, 4>{-1.0, 1.0, -2.0, 1.0});

    // determinant evaluated directly agrees with the closed form at random
    // probe points
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> logz(-5.0, 5.0);
    for (int trial = 0; trial < 40; ++trial) {
        double z = std::pow(10.0, logz(rng));
        for (int j = 0; j < 5; ++j) {
            Complex l = rand_complex(rng) * 3.0;
            Mat3 B = assemble_A(z) - Mat3::diagonal(l, l, l);
            Complex direct = B.det();
            Complex poly = char_poly_eval(z, l);
            CHECK(std::abs(direct - poly) <= 1e-10 * std::max(1.0, std::abs(poly)));
        }
    }
}

TEST_CASE("eigenvalues approach the z -> 0 spectrum {0, i, -i}") {
    auto e = eigenvalues(1e-10);
    CHECK(std::abs(e.branch_small(1)) < 1e-18);
    CHECK(std::abs(e.branch_small(2) - Complex(0, 1)) < 1e-9);
    CHECK(std::abs(e.branch_small(3) - Complex(0, -1)) < 1e-9);
}

TEST_CASE("eigenvalue asymptotics in both zones") {
    auto e_small = eigenvalues(1e-4);
    CHECK(std::abs(e_small.branch_small(1) - Complex(1e-8)) < 0.02 * 1e-8);

    auto e_large = eigenvalues(1e4);
    double z = 1e4;
    CHECK(std::abs(e_large.branch_large(3) - Complex(z - 1.0 / z)) <= 10.0 * std::pow(z, -1.5));
}

TEST_CASE("Vieta identities on the log grid") {
    for (double z : log_grid(1e-6, 1e6, 60)) {
        auto e = eigenvalues(z);
        Complex sum = e.lam[0] + e.lam[1] + e.lam[2];
        Complex pair = e.lam[0] * e.lam[1] + e.lam[0] * e.lam[2] + e.lam[1] * e.lam[2];
        Complex prod = e.lam[0] * e.lam[1] * e.lam[2];
        CHECK(std::abs(sum - Complex(z)) <= 1e-9 * std::max(1.0, z));
        CHECK(std::abs(pair - Complex(1.0 + z)) <= 1e-9 * (1.0 + z));
        CHECK(std::abs(prod - Complex(z * z)) <= 1e-9 * std::max(1e-300, z * z));
    }
}

TEST_CASE("spectrum is closed under conjugation and strictly stable") {
    for (double z : log_grid(1e-5, 1e5, 60)) {
        auto e = eigenvalues(z);
        for (const auto& l : e.lam) {
            if (std::abs(l.imag()) < 1e-12) continue;
            bool has_conj = false;
            for (const auto& m : e.lam)
                if (std::abs(m - std::conj(l)) <= 1e-9 * std::max(1.0, std::abs(l))) has_conj = true;
            CHECK(has_conj);
        }
        CHECK(e.min_real() > 0.0);
    }
}

TEST_CASE("branch labels agree with stepwise continuity tracking") {
    // walk the grid and carry labels by nearest assignment; the labelled
    // output must never deviate from the walk
    auto grid = log_grid(1e-7, 1e7, 241);
    std::array<Complex, 3> carried = eigenvalues(grid.front()).lam;
    for (double z : grid) {
        auto labelled = eigenvalues(z).lam;
        auto walked = detail::match_to(labelled, carried);
        for (int j = 0; j < 3; ++j)
            CHECK(std::abs(walked[static_cast<std::size_t>(j)] - labelled[static_cast<std::size_t>(j)]) == 0.0);
        carried = labelled;
    }
}

TEST_CASE("exponential at t = 0 is the exact identity") {
    Mat3 A = assemble_A(3.7);
    CHECK((expm_neg(A, 0.0) - Mat3::identity()).max_abs() == 0.0);
}

TEST_CASE("exponential of the diagonal part") {
    double z = 2.5, t = 1.3;
    Mat3 A = coeff_A2() * Complex(z);
    Mat3 E = expm_neg(A, t);
    CHECK(std::abs(E(2, 2) - std::exp(Complex(-z * t))) < 1e-14);
    CHECK(std::abs(E(0, 0) - Complex(1.0)) < 1e-14);
    CHECK(std::abs(E(1, 1) - Complex(1.0)) < 1e-14);
    CHECK(std::abs(E(0, 1)) < 1e-14);
}

TEST_CASE("semigroup property of the exponential") {
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> logz(-4.0, 4.0), ts(0.0, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        double z = std::pow(10.0, logz(rng));
        double s1 = ts(rng), s2 = ts(rng);
        Mat3 A = assemble_A(z);
        Mat3 lhs = expm_neg(A, s1) * expm_neg(A, s2);
        Mat3 rhs = expm_neg(A, s1 + s2);
        double scale = std::max(rhs.frobenius_norm(), 1e-30);
        CHECK((lhs - rhs).frobenius_norm() <= 1e-9 * std::max(1.0, scale));
    }
}

TEST_CASE("eigendecomposition and Pade paths agree") {
    std::mt19937_64 rng(321);
    std::uniform_real_distribution<double> logz(-3.0, 3.0), ts(0.0, 2.0);
    for (int trial = 0; trial < 30; ++trial) {
        double z = std::pow(10.0, logz(rng));
        double t = ts(rng);
        CHECK_NOTHROW(expm_neg(assemble_A(z), t, /*verify_paths=*/true));
    }
}

TEST_CASE("exponential matches the adaptive ODE oracle") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> logz(-3.0, 3.0), ts(0.0, 4.0);
    for (int trial = 0; trial < 25; ++trial) {
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
        Vec3 got = expm_neg(A, t) * Vec3{{w0[0], w0[1], w0[2]}};
        double err = std::sqrt(std::norm(got[0] - ref[0]) + std::norm(got[1] - ref[1]) +
                               std::norm(got[2] - ref[2]));
        CHECK(err < 1e-8);
    }
}

TEST_CASE("operator norm from the Gram matrix closed form") {
    // diagonal case has a known answer
    Mat3 D = Mat3::diagonal(Complex(0, 3.0), Complex(2.0), Complex(-1.0));
    CHECK(operator_norm(D) == Catch::Approx(3.0).epsilon(1e-12));
    // invariance under scaling
    std::mt19937_64 rng(5);
    Mat3 M;
    for (auto& e : M.m) e = rand_complex(rng);
    CHECK(operator_norm(M * Complex(2.0)) == Catch::Approx(2.0 * operator_norm(M)).epsilon(1e-10));
    // bounds the induced action on random vectors
    double on = operator_norm(M);
    for (int trial = 0; trial < 20; ++trial) {
        Vec3 v{{rand_complex(rng), rand_complex(rng), rand_complex(rng)}};
        CHECK((M * v).norm() <= on * v.norm() * (1.0 + 1e-12));
    }
}

TEST_CASE("defective matrices take the Pade path and stay accurate") {
    // Jordan block: not diagonalizable, exp(-At) has the closed form
    // e^{-t} [[1, -t, t^2/2], [0, 1, -t], [0, 0, 1]]
    Mat3 J;
    J(0, 0) = J(1, 1) = J(2, 2) = 1.0;
    J(0, 1) = J(1, 2) = 1.0;
    CHECK(eigenvalue_separation(J) < 1e-6 * J.frobenius_norm());
    for (double t : {0.3, 1.0, 4.0}) {
        Mat3 E = expm_neg(J, t);
        double et = std::exp(-t);
        Mat3 ref;
        ref(0, 0) = ref(1, 1) = ref(2, 2) = et;
        ref(0, 1) = ref(1, 2) = -t * et;
        ref(0, 2) = 0.5 * t * t * et;
        CHECK((E - ref).frobenius_norm() <= 1e-12 * std::max(1.0, ref.frobenius_norm()));
    }
}

TEST_CASE("singular matrices are reported") {
    Mat3 S;  // rank 1
    S(0, 0) = 1.0;
    S(0, 1) = 2.0;
    CHECK_THROWS_AS(inverse(S), NumericalError);
}
