#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bt/quad.hpp"

using namespace bt;
using doctest::Approx;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("adaptive quadrature on analytic integrals") {
    auto r1 = quad::integrate_1d([](double x) { return x * x * x; }, 0.0, 1.0);
    CHECK(r1.value == Approx(0.25).epsilon(1e-14));

    auto r2 = quad::integrate_1d([](double x) { return std::sin(x); }, 0.0, kPi);
    CHECK(r2.value == Approx(2.0).epsilon(1e-13));

    auto r3 = quad::integrate_1d([](double x) { return std::cos(50.0 * x); }, 0.0, 1.0);
    CHECK(r3.value == Approx(std::sin(50.0) / 50.0).epsilon(1e-11));

    // Integrable endpoint singularity. Bisection toward x = 0 gains only half a
    // digit per level, so ask for what depth 60 can actually deliver.
    quad::QuadratureSpec loose;
    loose.rel_tol = 1e-9;
    auto r4 = quad::integrate_1d([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, loose);
    CHECK(r4.value == Approx(2.0).epsilon(1e-8));
}

TEST_CASE("half-line quadrature with compactified tail") {
    auto r1 = quad::integrate_half_line([](double x) { return std::exp(-x); }, 1.0);
    CHECK(r1.value == Approx(1.0).epsilon(1e-13));

    auto r2 = quad::integrate_half_line([](double x) { return std::exp(-x * x); }, 1.0);
    CHECK(r2.value == Approx(0.5 * std::sqrt(kPi)).epsilon(1e-13));

    auto r3 = quad::integrate_half_line([](double x) { return x * x * std::exp(-x * x); }, 2.0);
    CHECK(r3.value == Approx(0.25 * std::sqrt(kPi)).epsilon(1e-13));
}

TEST_CASE("radial magnitude matches hand values") {
    // |e_0(z)| = pi^{-1/2} exp(-|z|^2/2) at n = N = 1.
    quad::BasisDescriptor d{quad::BasisDescriptor::Space::fock, 1, 1, {0}};
    double r = 0.7;
    CHECK(quad::log_magnitude_radial(d, {r}) ==
          Approx(-0.5 * std::log(kPi) - 0.5 * r * r).epsilon(1e-14));

    // |e_1| = pi^{-1/2} r exp(-r^2/2) at N = 1, nu = 1.
    quad::BasisDescriptor d1{quad::BasisDescriptor::Space::fock, 1, 1, {1}};
    CHECK(quad::log_magnitude_radial(d1, {r}) ==
          Approx(-0.5 * std::log(kPi) + std::log(r) - 0.5 * r * r).epsilon(1e-14));
}

TEST_CASE("fock L^p norms by quadrature against hand closed forms") {
    // ||e_1||_4 at n = N = 1:
    //   ||e_1||_4^4 = (1/pi^2) E(4) with E(4) = pi Gamma(3) = 2 pi over N = 1
    //   after the p-scaling; direct evaluation gives 2^{-1/2} pi^{-1/4}.
    quad::BasisDescriptor d{quad::BasisDescriptor::Space::fock, 1, 1, {1}};
    double got = quad::lp_norm_quadrature(d, 4.0);
    CHECK(got == Approx(std::pow(2.0, -0.5) * std::pow(kPi, -0.25)).epsilon(1e-10));

    // p = 2 must return 1 for any state.
    quad::BasisDescriptor d2{quad::BasisDescriptor::Space::fock, 2, 3, {2, 1}};
    CHECK(quad::lp_norm_quadrature(d2, 2.0) == Approx(1.0).epsilon(1e-10));
}

TEST_CASE("cpn L^p norms by quadrature") {
    // n = 1, N = 2, a = (1): Lambda^2 = 3!/(2 pi 1! 1!) = 3/pi, and
    //   ||e_a||_4^4 = 2 pi Lambda^4 * integral r^5 (1+r^2)^{-5} dr
    //              = 2 pi (9/pi^2) (1/24) = 3/(4 pi),
    // so ||e_a||_4 = (3/(4 pi))^{1/4}... computed directly: (3/(5 pi))^{1/4}
    // is the value with the Fubini-Study density 2(1+r^2)^{-2} included:
    //   ||e_a||_4^4 = 2 pi Lambda^4 2 * integral r^5 (1+r^2)^{-6} dr
    //              = 4 pi (9/pi^2) / 60 = 3/(5 pi).
    quad::BasisDescriptor d{quad::BasisDescriptor::Space::cpn, 1, 2, {1}};
    double got = quad::lp_norm_quadrature(d, 4.0);
    CHECK(got == Approx(std::pow(3.0 / (5.0 * kPi), 0.25)).epsilon(1e-10));

    quad::BasisDescriptor d2{quad::BasisDescriptor::Space::cpn, 1, 5, {3}};
    CHECK(quad::lp_norm_quadrature(d2, 2.0) == Approx(1.0).epsilon(1e-10));

    quad::BasisDescriptor d3{quad::BasisDescriptor::Space::cpn, 2, 4, {2, 1}};
    CHECK(quad::lp_norm_quadrature(d3, 2.0) == Approx(1.0).epsilon(1e-8));
}

TEST_CASE("sup search finds the interior maximum") {
    // n = 1, N = 4, nu = 2: sup at r = sqrt(2/4), value
    // N^{1/2} (2!)^{-1/2} pi^{-1/2} (2/e)^{1} with N = 4: 2 sqrt(2)/(e sqrt(pi)).
    quad::BasisDescriptor d{quad::BasisDescriptor::Space::fock, 1, 4, {2}};
    auto res = quad::sup_norm_search(d);
    double expect = std::log(2.0 * std::sqrt(2.0) / (std::exp(1.0) * std::sqrt(kPi)));
    CHECK(res.log_value == Approx(expect).epsilon(1e-9));
    CHECK(res.argmax[0] == Approx(std::sqrt(0.5)).epsilon(1e-4));

    // Generic search interface on a known function.
    auto res2 = quad::sup_norm_search(
        [](const std::vector<double>& x) {
            return -(x[0] - 0.3) * (x[0] - 0.3) - 2.0 * (x[1] - 1.1) * (x[1] - 1.1);
        },
        {0.0, 0.0}, {2.0, 2.0}, {});
    CHECK(std::abs(res2.log_value) <= 1e-8);
    CHECK(res2.argmax[0] == Approx(0.3).epsilon(1e-4));
    CHECK(res2.argmax[1] == Approx(1.1).epsilon(1e-4));
}

TEST_CASE("quadrature inner products discover orthonormality") {
    for (int a = 0; a <= 3; ++a) {
        for (int b = 0; b <= 3; ++b) {
            double fock = quad::fock_inner_product_quadrature(1, 2, {a}, {b});
            CHECK(std::abs(fock - (a == b ? 1.0 : 0.0)) <= 1e-10);
            if (a <= 3 && b <= 3) {
                double cp = quad::cpn_inner_product_quadrature(1, 3, {a}, {b});
                CHECK(std::abs(cp - (a == b ? 1.0 : 0.0)) <= 1e-10);
            }
        }
    }

    // With one power of the height symbol the diagonal is (a+1)/(N+2) at n=1.
    for (int a = 0; a <= 3; ++a) {
        double v = quad::cpn_inner_product_quadrature(1, 3, {a}, {a}, 1);
        CHECK(v == Approx((a + 1.0) / 5.0).epsilon(1e-10));
    }

    // Two-dimensional overlap with distinct indices vanishes by angular sums.
    double cross = quad::fock_inner_product_quadrature(2, 2, {1, 0}, {0, 1});
    CHECK(std::abs(cross) <= 1e-10);
}
