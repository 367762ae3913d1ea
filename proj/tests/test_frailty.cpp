#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "frailtyid/frailty.hpp"
#include "oracles.hpp"

using namespace fid;

TEST_CASE("laplace transform values") {
    CHECK(laplace_deriv(1.0, 0.0, 0) == doctest::Approx(1.0));
    CHECK(laplace_deriv(0.0, 2.0, 1) == doctest::Approx(-std::exp(-2.0)));
    // int omega^2 e^{-omega} f_Gamma(omega; 1, 1) domega with shape = rate = 1
    CHECK(laplace_deriv(1.0, 1.0, 2) == doctest::Approx(0.25));
}

TEST_CASE("laplace derivatives match gamma-density quadrature") {
    for (double theta : {0.5, 1.0, 2.0}) {
        for (double s : {0.1, 1.0, 5.0}) {
            for (int q = 0; q <= 3; ++q) {
                const double closed = std::abs(laplace_deriv(theta, s, q));
                const double quad = oracle::gamma_lt_deriv_quadrature(theta, s, q);
                CHECK(closed == doctest::Approx(quad).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("complete monotonicity and decay") {
    for (double theta : {0.0, 0.25, 1.0, 2.0, 5.0}) {
        for (int q = 0; q <= 4; ++q) {
            double prev = std::numeric_limits<double>::infinity();
            for (double s = 0.0; s <= 20.0; s += 0.5) {
                const double v = laplace_deriv(theta, s, q);
                CHECK(((q % 2 == 0 && v > 0.0) || (q % 2 == 1 && v < 0.0)));
                const double mag = std::abs(v);
                CHECK(mag < prev);
                prev = mag;
            }
        }
    }
}

TEST_CASE("derivative order consistency via finite differences") {
    const double h = 1e-5;
    for (double theta : {0.0, 0.25, 1.0, 2.0, 5.0}) {
        for (int q = 0; q <= 3; ++q) {
            for (double s = 0.5; s <= 20.0; s += 1.5) {
                const double fd =
                    (laplace_deriv(theta, s + h, q) - laplace_deriv(theta, s - h, q)) / (2.0 * h);
                const double an = laplace_deriv(theta, s, q + 1);
                CHECK(fd == doctest::Approx(an).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("psi examples and round trips") {
    CHECK(psi(2.0, 1.0) == doctest::Approx(0.0));
    // root-solve phi(x) = 0.5 at theta = 1
    const double root = oracle::bisect(
        [](double x) { return laplace_deriv(1.0, x, 0) - 0.5; }, 0.0, 100.0, 1e-13);
    CHECK(psi(1.0, 0.5) == doctest::Approx(root).epsilon(1e-9));
    CHECK(psi(1.0, 0.5) == doctest::Approx(1.0));
    for (double theta : {0.0, 0.5, 2.0}) {
        for (double s : {0.1, 1.0, 5.0}) {
            CHECK(psi(theta, laplace_deriv(theta, s, 0)) == doctest::Approx(s).epsilon(1e-10));
        }
    }
    CHECK_THROWS_AS(psi(1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(psi(1.0, 1.5), std::domain_error);
}

TEST_CASE("xi examples and round trips") {
    CHECK(xi(1.0, 1.0) == doctest::Approx(0.0));
    // root-solve -phi^(1)(x) = 0.25 at theta = 1, i.e. (1+x)^{-2} = 0.25
    const double root = oracle::bisect(
        [](double x) { return -laplace_deriv(1.0, x, 1) - 0.25; }, 0.0, 100.0, 1e-13);
    CHECK(xi(1.0, 0.25) == doctest::Approx(root).epsilon(1e-9));
    CHECK(xi(1.0, 0.25) == doctest::Approx(1.0));
    for (double theta : {0.5, 1.0, 2.0}) {
        for (double s : {0.1, 1.0, 5.0}) {
            CHECK(xi(theta, -laplace_deriv(theta, s, 1)) == doctest::Approx(s).epsilon(1e-10));
        }
    }
}

TEST_CASE("alpha star against the general inverse-transform forms") {
    CHECK(alpha_star_1k(0.0, 0.7, 3.0) == doctest::Approx(std::exp(0.7)));
    CHECK(alpha_star_1k(1.0, 0.0, 0.5) == doctest::Approx(std::exp(0.5)));
    CHECK(alpha_star_1k(2.0, 1.0, 0.25) == doctest::Approx(std::exp(1.5)));
    CHECK(alpha_star_23(0.0, 0.3, 2.0) == doctest::Approx(std::exp(0.3)));
    CHECK(alpha_star_23(1.0, 0.0, 1.0) == doctest::Approx(std::exp(0.5) / 2.0));
    CHECK(alpha_star_23(2.0, 0.5, 0.6) ==
          doctest::Approx(std::exp(0.5) * std::exp(0.4) / 3.0).epsilon(1e-9));

    // gamma shortcut vs direct evaluation through psi'/xi'
    for (double theta : {0.25, 1.0, 2.0}) {
        for (double lp : {-0.5, 0.0, 1.0}) {
            for (double H : {0.1, 0.7, 2.0}) {
                const double u = std::exp(-H);
                const double general_1k = -psi_deriv(theta, u) * u * std::exp(lp);
                CHECK(alpha_star_1k(theta, lp, H) == doctest::Approx(general_1k).epsilon(1e-10));
                const double general_23 = -xi_deriv(theta, u) * u * std::exp(lp);
                CHECK(alpha_star_23(theta, lp, H) == doctest::Approx(general_23).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("posterior frailty expectations") {
    CHECK(posterior_expectation_F1(0.0, 1, 5.0) == doctest::Approx(1.0));
    CHECK(posterior_expectation_F1(1.0, 1, 0.5) == doctest::Approx(2.0 / 1.5));
    // ratio -phi^(1)(1)/phi(1) at theta = 2
    const double ratio = -laplace_deriv(2.0, 1.0, 1) / laplace_deriv(2.0, 1.0, 0);
    CHECK(posterior_expectation_F1(2.0, 0, 1.0) == doctest::Approx(ratio).epsilon(1e-12));
    CHECK(posterior_expectation_F1(2.0, 0, 1.0) == doctest::Approx(1.0 / 3.0));

    CHECK(posterior_expectation_F2(0.0, 0, 0.3) == doctest::Approx(1.0));
    CHECK(posterior_expectation_F2(1.0, 0, 1.0) == doctest::Approx(1.0));
    // ratio of phi^(3)/phi^(2) magnitudes at theta = 2, s = 0.8
    const double r2 = -laplace_deriv(2.0, 0.8, 3) / laplace_deriv(2.0, 0.8, 2);
    CHECK(posterior_expectation_F2(2.0, 1, 0.8) == doctest::Approx(r2).epsilon(1e-12));
    CHECK(posterior_expectation_F2(2.0, 1, 0.8) == doctest::Approx(2.5 / 1.3));
}

TEST_CASE("continuity at theta = 0") {
    const double eps = 1e-8;
    for (double s : {0.1, 1.0, 5.0, 15.0}) {
        for (int q = 0; q <= 3; ++q) {
            CHECK(laplace_deriv(eps, s, q) ==
                  doctest::Approx(laplace_deriv(0.0, s, q)).epsilon(1e-5));
        }
        CHECK(psi(eps, std::exp(-s)) == doctest::Approx(psi(0.0, std::exp(-s))).epsilon(1e-5));
        CHECK(xi(eps, std::exp(-s)) == doctest::Approx(xi(0.0, std::exp(-s))).epsilon(1e-5));
    }
    CHECK(alpha_star_1k(eps, 0.3, 2.0) == doctest::Approx(alpha_star_1k(0.0, 0.3, 2.0)).epsilon(1e-5));
    CHECK(alpha_star_23(eps, 0.3, 2.0) == doctest::Approx(alpha_star_23(0.0, 0.3, 2.0)).epsilon(1e-5));
    CHECK(posterior_expectation_F1(eps, 1, 2.0) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(posterior_expectation_F2(eps, 1, 2.0) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(laplace_deriv(-0.5, 1.0, 0), std::domain_error);
    CHECK_THROWS_AS(laplace_deriv(1.0, -1.0, 0), std::domain_error);
}

TEST_CASE("frailty family interface dispatches to gamma forms") {
    GammaFrailty fam(1.5);
    const FrailtyFamily& base = fam;
    CHECK(base.theta() == doctest::Approx(1.5));
    CHECK(base.log_laplace_deriv(2.0, 1) == doctest::Approx(log_laplace_deriv(1.5, 2.0, 1)));
    CHECK(base.psi(0.7) == doctest::Approx(psi(1.5, 0.7)));
    CHECK(base.xi(0.7) == doctest::Approx(xi(1.5, 0.7)));
    CHECK(base.posterior_f1(1, 0.4) == doctest::Approx(posterior_expectation_F1(1.5, 1, 0.4)));
    CHECK(base.posterior_f2(0, 0.4) == doctest::Approx(posterior_expectation_F2(1.5, 0, 0.4)));
}
