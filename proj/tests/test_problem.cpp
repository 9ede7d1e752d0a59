#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>

#include "alphapred/problem.hpp"
#include "alphapred/quadrature.hpp"
#include "alphapred/rng.hpp"

using namespace alphapred;
using Eigen::VectorXd;

namespace {

VectorXd random_vec(SplitMix64& rng, int d, double scale) {
    VectorXd v(d);
    for (int i = 0; i < d; ++i) v[i] = scale * rng.normal();
    return v;
}

// 1-D alpha-divergence between N(m1, v1) and N(m2, v2) by quadrature;
// f_alpha(q/p) p expanded to p - q^{1-beta} p^beta over beta(1-beta), which
// never overflows in the tails
double alpha_div_1d_quad(double m1, double v1, double m2, double v2, double alpha) {
    const double sd = std::sqrt(std::max(v1, v2));
    const double lo = std::min(m1, m2) - 42.0 * sd;
    const double hi = std::max(m1, m2) + 42.0 * sd;
    const double beta = 0.5 * (1.0 - alpha);
    auto integrand = [&](double y) {
        const double lp = gaussian_logpdf_sq((y - m1) * (y - m1), v1, 1);
        const double lq = gaussian_logpdf_sq((y - m2) * (y - m2), v2, 1);
        return (std::exp(lp) - std::exp((1.0 - beta) * lq + beta * lp)) /
               (beta * (1.0 - beta));
    };
    return adaptive_quad(integrand, lo, hi, 1e-13).value;
}

// int phi^beta(y - m1, v1) phi^{1-beta}(y - m2, v2) dy in one dimension
double interp_integral_1d(double m1, double v1, double m2, double v2, double beta) {
    const double sd = std::sqrt(std::max(v1, v2));
    const double lo = std::min(m1, m2) - 42.0 * sd;
    const double hi = std::max(m1, m2) + 42.0 * sd;
    auto integrand = [&](double y) {
        const double lp = gaussian_logpdf_sq((y - m1) * (y - m1), v1, 1);
        const double lq = gaussian_logpdf_sq((y - m2) * (y - m2), v2, 1);
        return std::exp(beta * lp + (1.0 - beta) * lq);
    };
    return adaptive_quad(integrand, lo, hi, 1e-13).value;
}

}  // namespace

TEST_CASE("derive_constants: direct substitution") {
    auto k = derive_constants({3, 1.0, 1.0, 0.0});
    CHECK(k.beta == 0.5);
    CHECK(k.gamma == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(k.xi * k.xi == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(k.v_star == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_FALSE(k.kappa.has_value());  // 1/beta = 2 is an integer
}

TEST_CASE("derive_constants: kappa and c_beta for non-integer 1/beta") {
    auto k = derive_constants({3, 1.0, 1.0, 0.2});
    REQUIRE(k.kappa.has_value());
    CHECK(*k.kappa == 3);  // 1/beta = 2.5
    CHECK(*k.c_beta == doctest::Approx(0.75).epsilon(1e-14));

    // integer detection tolerates the floating representation of alpha = 1/3
    auto k3 = derive_constants({5, 1.0, 1.0, 1.0 / 3.0});
    CHECK_FALSE(k3.kappa.has_value());
}

TEST_CASE("derive_constants: alpha -> -1 limits") {
    const ProblemSpec spec{4, 2.0, 3.0, -1.0};
    auto k = derive_constants(spec);
    const double v_star = 2.0 * 3.0 / 5.0;
    CHECK(k.beta == 1.0);
    CHECK(k.gamma == doctest::Approx(v_star / spec.vx).epsilon(1e-14));
    CHECK(k.xi * k.xi == doctest::Approx(spec.vx - v_star).epsilon(1e-14));
}

TEST_CASE("derive_constants invariants over a sweep") {
    SplitMix64 rng(11);
    for (int i = 0; i < 300; ++i) {
        ProblemSpec spec;
        spec.d = 3 + static_cast<int>(rng.next() % 8);
        spec.vx = 0.1 + 3.0 * rng.uniform01();
        spec.vy = 0.1 + 3.0 * rng.uniform01();
        spec.alpha = -0.999 + 1.998 * rng.uniform01();
        auto k = derive_constants(spec);
        CHECK(k.beta > 0.0);
        CHECK(k.beta < 1.0);
        CHECK(k.gamma > 0.0);
        CHECK(k.gamma < 1.0);
        CHECK(k.v_star < std::min(spec.vx, spec.vy));
        // xi^2 = beta^2 vx^2 gamma / vy exactly
        const double rhs = k.beta * k.beta * spec.vx * spec.vx * k.gamma / spec.vy;
        CHECK(k.xi * k.xi == doctest::Approx(rhs).epsilon(1e-13));
        if (k.kappa) {
            CHECK(*k.c_beta > 0.5);
            CHECK(*k.c_beta < 1.0);
            CHECK(*k.kappa > 1.0 / k.beta);
            CHECK(*k.kappa - 1 < 1.0 / k.beta);
        }
        // prefactor 1/(beta(1-beta)) finite
        CHECK(std::isfinite(1.0 / (k.beta * (1.0 - k.beta))));
    }
}

TEST_CASE("derive_constants is pure") {
    const ProblemSpec spec{5, 0.7, 1.9, 0.37};
    auto a = derive_constants(spec);
    auto b = derive_constants(spec);
    CHECK(a.beta == b.beta);
    CHECK(a.gamma == b.gamma);
    CHECK(a.xi == b.xi);
    CHECK(a.v_star == b.v_star);
    CHECK(a.c_beta == b.c_beta);
}

TEST_CASE("derive_constants rejects invalid specs") {
    CHECK_THROWS_AS(derive_constants({3, 1.0, 1.0, 1.5}), std::invalid_argument);
    CHECK_THROWS_AS(derive_constants({3, 1.0, 1.0, -1.5}), std::invalid_argument);
    CHECK_THROWS_AS(derive_constants({3, 0.0, 1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(derive_constants({3, 1.0, -2.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(derive_constants({2, 1.0, 1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("f_alpha generator") {
    for (double a : {-1.0, -0.5, 0.0, 0.7, 1.0}) CHECK(f_alpha(1.0, a) == 0.0);
    CHECK(f_alpha(4.0, 0.0) == doctest::Approx(-4.0).epsilon(1e-15));
    CHECK(f_alpha(std::exp(1.0), -1.0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK_THROWS_AS(f_alpha(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(f_alpha(-1.0, 0.5), std::invalid_argument);
}

TEST_CASE("gaussian_logpdf reference values and symmetry") {
    VectorXd z0 = VectorXd::Zero(2);
    CHECK(gaussian_logpdf(z0, 1.0) == doctest::Approx(-std::log(kTwoPi)).epsilon(1e-15));

    VectorXd u(3);
    u << 1.0, 1.0, 0.0;  // ||u||^2 = 2
    CHECK(gaussian_logpdf(u, 1.0) ==
          doctest::Approx(-1.5 * std::log(kTwoPi) - 1.0).epsilon(1e-15));
    CHECK(gaussian_logpdf(u, 1.0) == gaussian_logpdf((-u).eval(), 1.0));

    // no underflow in the log domain for ||u||^2 up to 1e6
    CHECK(std::isfinite(gaussian_logpdf_sq(1e6, 1.0, 50)));
    CHECK_THROWS_AS(gaussian_logpdf(u, 0.0), std::invalid_argument);
}

TEST_CASE("alpha_div_gaussians: zero at identical pairs, nonnegative overall") {
    SplitMix64 rng(5);
    for (int i = 0; i < 1000; ++i) {
        const int d = 1 + static_cast<int>(rng.next() % 6);
        VectorXd m1 = random_vec(rng, d, 2.0);
        VectorXd m2 = random_vec(rng, d, 2.0);
        const double v1 = 0.2 + 2.0 * rng.uniform01();
        const double v2 = 0.2 + 2.0 * rng.uniform01();
        const double alpha = -0.95 + 1.9 * rng.uniform01();
        CHECK(alpha_div_gaussians(m1, v1, m1, v1, alpha) == 0.0);
        CHECK(alpha_div_gaussians(m1, v1, m2, v2, alpha) >= 0.0);
    }
}

TEST_CASE("alpha_div_gaussians vs 1-D quadrature oracle") {
    // equal means, d = 1
    const double direct = alpha_div_1d_quad(0.0, 1.0, 0.0, 2.0, 0.0);
    VectorXd a(1), b(1);
    a << 0.0;
    b << 0.0;
    CHECK(alpha_div_gaussians(a, 1.0, b, 2.0, 0.0) ==
          doctest::Approx(direct).epsilon(1e-10));

    // a few more (mean, variance, alpha) combinations
    SplitMix64 rng(17);
    for (int i = 0; i < 10; ++i) {
        const double m2 = 2.0 * rng.normal();
        const double v1 = 0.4 + rng.uniform01();
        const double v2 = 0.4 + rng.uniform01();
        const double alpha = -0.9 + 1.8 * rng.uniform01();
        VectorXd mu1(1), mu2(1);
        mu1 << 0.0;
        mu2 << m2;
        CHECK(alpha_div_gaussians(mu1, v1, mu2, v2, alpha) ==
              doctest::Approx(alpha_div_1d_quad(0.0, v1, m2, v2, alpha)).epsilon(1e-10));
    }
}

TEST_CASE("alpha_div_gaussians d=3 offset means vs Fubini quadrature oracle") {
    // ||mu1 - mu2|| = 1 along e1; the integral of p^beta q^{1-beta} factorizes
    // across coordinates, each factor integrated numerically
    const double v1 = 1.0, v2 = 1.0, alpha = 0.0, beta = 0.5;
    const double i_off = interp_integral_1d(0.0, v1, 1.0, v2, beta);
    const double i_cen = interp_integral_1d(0.0, v1, 0.0, v2, beta);
    const double oracle = (1.0 - i_off * i_cen * i_cen) / (beta * (1.0 - beta));
    VectorXd mu1 = VectorXd::Zero(3);
    VectorXd mu2 = VectorXd::Zero(3);
    mu2[0] = 1.0;
    CHECK(alpha_div_gaussians(mu1, v1, mu2, v2, alpha) ==
          doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("completing-squares identity at 100 random tuples") {
    SplitMix64 rng(23);
    for (int i = 0; i < 100; ++i) {
        const int d = 3 + static_cast<int>(rng.next() % 4);
        VectorXd x = random_vec(rng, d, 3.0);
        VectorXd y = random_vec(rng, d, 3.0);
        VectorXd mu = random_vec(rng, d, 3.0);
        ProblemSpec spec;
        spec.d = d;
        spec.vx = 0.3 + 2.0 * rng.uniform01();
        spec.vy = 0.3 + 2.0 * rng.uniform01();
        spec.alpha = -0.95 + 1.9 * rng.uniform01();
        auto k = derive_constants(spec);
        const double lhs = gaussian_logpdf((x - mu).eval(), spec.vx) +
                           k.beta * gaussian_logpdf((y - mu).eval(), spec.vy);
        const VectorXd w = k.gamma * x + (1.0 - k.gamma) * y - mu;
        const double rhs = 0.5 * (1.0 - k.beta) * d * std::log(k.gamma) +
                           gaussian_logpdf(w, spec.vx * k.gamma) +
                           k.beta * gaussian_logpdf((y - x).eval(), spec.vy / k.gamma);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}
