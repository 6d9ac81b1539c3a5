#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "meixner/jacobi.hpp"
#include "meixner/nc_partitions.hpp"

using namespace meixner;
using namespace std::complex_literals;

namespace {

// Closed-form Cauchy transform of the standard semicircle, branch with
// G(z) ~ 1/z at infinity.
std::complex<double> semicircle_cauchy(std::complex<double> z) {
    std::complex<double> root = std::sqrt(z * z - 4.0);
    if (std::abs(z - root) > std::abs(z + root)) root = -root;
    return (z - root) / 2.0;
}

MeixnerParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> a(-2.0, 2.0);
    std::uniform_real_distribution<double> b(0.0, 3.0);
    auto positive = [&] {
        double v = 0.0;
        while (v == 0.0) v = b(rng);
        return v;
    };
    return {a(rng), a(rng), positive(), positive()};
}

}  // namespace

TEST_CASE("meixner_to_jacobi builds constant tails") {
    const auto semi = meixner_to_jacobi({0, 0, 1, 1});
    for (std::size_t n = 1; n <= 6; ++n) {
        CHECK(semi.alpha(n) == 0.0);
        CHECK(semi.beta(n) == 1.0);
    }

    const auto j = meixner_to_jacobi({0.3, -1.2, 2.0, 0.5});
    CHECK(j.alpha(1) == 0.3);
    CHECK(j.beta(1) == 2.0);
    for (std::size_t n = 2; n <= 8; ++n) {
        CHECK(j.alpha(n) == -1.2);
        CHECK(j.beta(n) == 0.5);
    }
}

TEST_CASE("termination rule") {
    SUBCASE("b2 = 0 keeps alpha_2 and zeroes the rest") {
        const auto j = meixner_to_jacobi({0.7, 1.5, 2.0, 0.0});
        CHECK(j.alpha(1) == 0.7);
        CHECK(j.alpha(2) == 1.5);
        CHECK(j.beta(1) == 2.0);
        CHECK(j.beta(2) == 0.0);
        for (std::size_t n = 3; n <= 6; ++n) {
            CHECK(j.alpha(n) == 0.0);
            CHECK(j.beta(n) == 0.0);
        }
        CHECK(j.termination_level() == 2u);
    }
    SUBCASE("b1 = 0 is the Dirac mass") {
        const auto j = meixner_to_jacobi({5, 7, 0, 3});
        CHECK(j.alpha(1) == 5.0);
        for (std::size_t n = 2; n <= 5; ++n) CHECK(j.alpha(n) == 0.0);
        for (std::size_t n = 1; n <= 5; ++n) CHECK(j.beta(n) == 0.0);
    }
    SUBCASE("zero tail after a non-zero head") {
        const JacobiParams j({1, 2, 3}, 4, {1, 1, 1}, 0);
        CHECK(j.alpha(4) == 4.0);
        CHECK(j.beta(4) == 0.0);
        CHECK(j.alpha(5) == 0.0);
        CHECK(j.termination_level() == 4u);
    }
    SUBCASE("arbitrary head length") {
        const JacobiParams j({1, 2, 3}, 4, {0.5, 0.0, 9.0}, 7);
        CHECK(j.alpha(3) == 0.0);
        CHECK(j.beta(3) == 0.0);
        CHECK(j.alpha(10) == 0.0);
    }
}

TEST_CASE("invalid Jacobi input") {
    CHECK_THROWS_AS(JacobiParams({}, 0, {}, 0), std::invalid_argument);
    CHECK_THROWS_AS(JacobiParams({0, 0}, 0, {1}, 1), std::invalid_argument);
    CHECK_THROWS_AS(JacobiParams({0}, 0, {-1}, 1), std::invalid_argument);
    CHECK_THROWS_AS(meixner_to_jacobi({0, 0, 1, -0.5}), std::invalid_argument);
    CHECK_THROWS_AS(meixner_to_jacobi({NAN, 0, 1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(meixner_to_jacobi({0, 0, 1, 1}).alpha(0), std::out_of_range);
}

TEST_CASE("cauchy_transform of the semicircle matches the closed form") {
    const auto j = meixner_to_jacobi({0, 0, 1, 1});
    const std::complex<double> z = 2.0i;
    const auto g = cauchy_transform(j, z, 60);
    CHECK(std::abs(g - semicircle_cauchy(z)) < 1e-9);
    CHECK(g.imag() == doctest::Approx(1.0 - std::numbers::sqrt2).epsilon(1e-12));

    for (std::complex<double> w : {0.5 + 0.1i, -3.0 + 2.0i, 1.9 + 0.01i, 10.0 + 0.0i})
        CHECK(std::abs(cauchy_transform(j, w, 3) - semicircle_cauchy(w)) < 1e-12);
}

TEST_CASE("cauchy_transform asymptotics and sign") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const auto j = meixner_to_jacobi(random_params(rng));
        const std::complex<double> z = 1e6i;
        CHECK(std::abs(cauchy_transform(j, z, 30) * z - 1.0) < 1e-5);
        CHECK(cauchy_transform(j, 0.3 + 0.7i, 30).imag() <= 0.0);
    }
}

TEST_CASE("cauchy_transform of a Dirac mass terminates") {
    const auto j = meixner_to_jacobi({1.5, 9, 0, 4});
    for (std::complex<double> z : {2.0 + 1.0i, -1.0 + 0.5i, 0.0 + 3.0i})
        CHECK(std::abs(cauchy_transform(j, z, 10) - 1.0 / (z - 1.5)) < 1e-15);
}

TEST_CASE("cauchy_transform depth is irrelevant past the head") {
    const auto j = meixner_to_jacobi({0.4, -0.3, 1.7, 0.6});
    const std::complex<double> z = 0.2 + 0.9i;
    const auto reference = cauchy_transform(j, z, 2);
    for (int depth : {3, 5, 30})
        CHECK(std::abs(cauchy_transform(j, z, depth) - reference) < 1e-14);
}

TEST_CASE("cauchy_transform rejects bad input") {
    const auto j = meixner_to_jacobi({0, 0, 1, 1});
    CHECK_THROWS_AS(cauchy_transform(j, 1.0i, 0), std::invalid_argument);
    CHECK_THROWS_AS(cauchy_transform(j, 0.5, 10), std::domain_error);
    CHECK_NOTHROW(cauchy_transform(j, 7.0, 10));
}

TEST_CASE("Cauchy transform agrees with the moment series") {
    // Tail of sum_{m > 18} M_m z^{-m-1} is bounded by (R/|z|)^19 / (|z| - R).
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> a(-0.5, 0.5);
    std::uniform_real_distribution<double> b(0.05, 1.0);
    const std::complex<double> z = 3.0 + 3.0i;
    for (int trial = 0; trial < 25; ++trial) {
        const MeixnerParams p{a(rng), a(rng), b(rng), b(rng)};
        const auto j = meixner_to_jacobi(p);
        const double radius = j.support_radius();
        REQUIRE(radius < std::abs(z));
        const auto moments = moments_tridiagonal(j, 18);
        std::complex<double> series = 0.0;
        for (int m = 0; m <= 18; ++m) series += moments.moments[static_cast<std::size_t>(m)] / std::pow(z, m + 1);
        const double bound = std::pow(radius / std::abs(z), 19) / (std::abs(z) - radius);
        CHECK(std::abs(cauchy_transform(j, z, 40) - series) <= bound + 1e-14);
    }
}

TEST_CASE("density_eval reduces to the Wigner semicircle") {
    const MeixnerParams semi{0, 0, 1, 1};
    CHECK(density_eval(semi, 0.0) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-14));
    CHECK(density_eval(semi, 2.0) == 0.0);
    CHECK(density_eval(semi, -2.0) == 0.0);
    CHECK(density_eval(semi, 3.5) == 0.0);
    for (double x = -1.9; x < 1.9; x += 0.1)
        CHECK(density_eval(semi, x) == doctest::Approx(std::sqrt(4 - x * x) / (2 * std::numbers::pi)).epsilon(1e-13));
}

TEST_CASE("density_eval preconditions") {
    CHECK_THROWS_AS(density_eval({0.5, 0, 1, 1}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(density_eval({0, 0, 2, 1}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(density_eval({0, 0, 1, 0}, 0.0), std::invalid_argument);
}

TEST_CASE("density_eval is non-negative on its support") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> a(-2.0, 2.0);
    std::uniform_real_distribution<double> b(0.05, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        const MeixnerParams p{0, a(rng), 1, b(rng)};
        const auto [lo, hi] = density_support(p);
        for (int i = 0; i <= 200; ++i) CHECK(density_eval(p, lo + (hi - lo) * i / 200.0) >= 0.0);
    }
}

TEST_CASE("density quadrature reproduces the combinatorial moments") {
    for (const MeixnerParams& p : {MeixnerParams{0, 0, 1, 1}, MeixnerParams{0, 0.5, 1, 1.5},
                                   MeixnerParams{0, -0.3, 1, 0.8}, MeixnerParams{0, 0.5, 1, 1}}) {
        const auto quad = density_moments(p, 6);
        if (quad.has_atoms) continue;
        const auto comb = moments_combinatorial(meixner_to_jacobi(p), 6);
        for (int m = 0; m <= 6; ++m)
            CHECK(quad.table.moments[static_cast<std::size_t>(m)] ==
                  doctest::Approx(comb.moments[static_cast<std::size_t>(m)]).epsilon(1e-10));
    }
    CHECK(density_moments({0, 0, 1, 1}, 0).mass == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("a denominator root at the support edge is allowed") {
    // Free Poisson type: (1 - x) vanishes at the right edge of [-3, 1].
    const MeixnerParams p{0, -1, 1, 1};
    CHECK(std::isfinite(density_eval(p, 0.999)));
    CHECK(density_eval(p, 1.0) == 0.0);
    const auto quad = density_moments(p, 6);
    CHECK_FALSE(quad.has_atoms);
    const auto comb = moments_combinatorial(meixner_to_jacobi(p), 6);
    for (int m = 0; m <= 6; ++m)
        CHECK(quad.table.moments[static_cast<std::size_t>(m)] ==
              doctest::Approx(comb.moments[static_cast<std::size_t>(m)]).epsilon(1e-10));
}

TEST_CASE("density mass deficit flags atoms") {
    // b2 small with a2 large pushes mass into an atom.
    const auto quad = density_moments({0, 2.0, 1, 0.2}, 2);
    CHECK(quad.has_atoms);
    CHECK(quad.mass < 0.999);
}

TEST_CASE("moments_tridiagonal") {
    const auto semi = moments_tridiagonal(meixner_to_jacobi({0, 0, 1, 1}), 6);
    CHECK(semi.method == MomentMethod::tridiagonal);
    CHECK(semi.moments == std::vector<double>{1, 0, 1, 0, 2, 0, 5});

    const MeixnerParams p{0.7, -0.4, 1.3, 2.1};
    const auto t = moments_tridiagonal(meixner_to_jacobi(p), 1);
    CHECK(t.moments[0] == 1.0);
    CHECK(t.moments[1] == p.a1);

    // Kesten: the two non-crossing pairings of [4] have depths (1,1) and (1,2).
    const double b1 = 1.7, b2 = 0.45;
    const auto k = moments_tridiagonal(meixner_to_jacobi({0, 0, b1, b2}), 4);
    CHECK(k.moments[4] == doctest::Approx(b1 * b1 + b1 * b2).epsilon(1e-15));
    CHECK_THROWS_AS(moments_tridiagonal(meixner_to_jacobi(p), -1), std::invalid_argument);
}

TEST_CASE("tridiagonal and combinatorial routes agree on random parameters") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const auto j = meixner_to_jacobi(random_params(rng));
        const auto tri = moments_tridiagonal(j, 10);
        const auto comb = moments_combinatorial(j, 10);
        for (int m = 0; m <= 10; ++m) {
            const double a = tri.moments[static_cast<std::size_t>(m)];
            const double c = comb.moments[static_cast<std::size_t>(m)];
            CHECK(std::abs(a - c) <= 1e-9 * std::max(1.0, std::abs(c)));
        }
    }
}

TEST_CASE("Hankel matrices of moments are positive semidefinite") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const auto moments = moments_tridiagonal(meixner_to_jacobi(random_params(rng)), 10).moments;
        Eigen::Matrix<double, 6, 6> hankel;
        for (int i = 0; i < 6; ++i)
            for (int k = 0; k < 6; ++k) hankel(i, k) = moments[static_cast<std::size_t>(i + k)];
        const Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> solver(hankel);
        const double scale = std::max(1.0, solver.eigenvalues().cwiseAbs().maxCoeff());
        CHECK(solver.eigenvalues().minCoeff() >= -1e-9 * scale);
    }
}
