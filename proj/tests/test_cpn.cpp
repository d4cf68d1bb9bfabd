#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bt/cpn.hpp"
#include "bt/quad.hpp"

using namespace bt;
using doctest::Approx;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("Fubini-Study density") {
    CHECK(cpn::fubini_study_weight(1, 0.0) == Approx(2.0).epsilon(1e-15));
    CHECK(cpn::fubini_study_weight(1, 1.0) == Approx(0.5).epsilon(1e-15));
    CHECK(cpn::fubini_study_weight(2, 3.0) == Approx(4.0 / 64.0).epsilon(1e-15));
}

TEST_CASE("chart moment integral against frozen values and quadrature") {
    // a = (1,0), b = 2: 1! 0! (2-1)! / (2^2 (2+2)!) = 1/96.
    CHECK(cpn::lcalcul_integral({1, 0}, 2).value() == Approx(1.0 / 96.0).epsilon(1e-14));
    // n = 1, a = (2), b = 3: 2! 1! / (2 * 4!) = 1/24.
    CHECK(cpn::lcalcul_integral({2}, 3).value() == Approx(1.0 / 24.0).epsilon(1e-14));

    // One-dimensional quadrature oracle for a range of (a, b).
    for (int a = 0; a <= 6; a += 2) {
        for (int b = a; b <= 10; b += 3) {
            auto r = quad::integrate_half_line(
                [&](double t) {
                    return std::pow(t, 2 * a + 1) * std::pow(1.0 + t * t, -double(b + 2));
                },
                1.0 + std::sqrt(double(a)));
            CHECK(cpn::lcalcul_integral({a}, b).value() == Approx(r.value).epsilon(1e-10));
        }
    }

    // Nested two-dimensional oracle for one interior case: a = (2,1), b = 5.
    auto outer = quad::integrate_half_line(
        [&](double r1) {
            auto inner = quad::integrate_half_line(
                [&](double r2) {
                    double s = 1.0 + r1 * r1 + r2 * r2;
                    return std::pow(r2, 3) * std::pow(s, -8.0);
                },
                1.0);
            return std::pow(r1, 5) * inner.value;
        },
        1.5);
    CHECK(cpn::lcalcul_integral({2, 1}, 5).value() == Approx(outer.value).epsilon(1e-9));
}

TEST_CASE("normalizer and radial evaluation") {
    cpn::CPnParams pr{1, 2};
    // Lambda^2 = 3!/(2 pi) = 3/pi for a = (1).
    CHECK(cpn::cpn_log_normalizer(pr, {1}) == Approx(0.5 * std::log(3.0 / kPi)).epsilon(1e-14));

    double r = 0.8;
    double expect = 0.5 * std::log(3.0 / kPi) + std::log(r) - std::log(1.0 + r * r);
    CHECK(cpn::cpn_eval_radial(pr, {1}, {r}).log_abs() == Approx(expect).epsilon(1e-14));
}

TEST_CASE("height symbol matrix elements") {
    cpn::CPnParams pr{1, 3};
    CHECK(cpn::cpn_matrix_element(pr, 1, {2}, {2}).value() == Approx(3.0 / 5.0).epsilon(1e-14));
    CHECK(cpn::cpn_matrix_element(pr, 1, {2}, {1}).is_zero());
    // m = 2: (a1+1)(a1+2)/((N+2)(N+3)) at n = 1.
    CHECK(cpn::cpn_matrix_element(pr, 2, {1}, {1}).value() ==
          Approx(2.0 * 3.0 / (5.0 * 6.0)).epsilon(1e-14));

    CHECK(cpn::cpn_model_eigenvalue(pr, 2) == Approx(3.0 / 5.0).epsilon(1e-15));
    CHECK(cpn::cpn_level_multiplicity(pr, 2) == 1);
    cpn::CPnParams pr2{2, 6};
    CHECK(cpn::cpn_level_multiplicity(pr2, 2) == 5);  // binom(6-2+1, 1)
}

TEST_CASE("sup norms, including the divisor-at-infinity case") {
    cpn::CPnParams pr{1, 2};
    // a = (1): interior max at r = 1 with value Lambda/2.
    auto s1 = cpn::cpn_sup_norm_closed(pr, {1});
    CHECK(s1.value.value() == Approx(0.5 * std::sqrt(3.0 / kPi)).epsilon(1e-13));
    CHECK(s1.argmax[0] == Approx(1.0).epsilon(1e-13));
    CHECK_FALSE(s1.chart_swapped);

    // a = (2) = (N): the sup lives at infinity; the swapped chart reports it.
    auto s2 = cpn::cpn_sup_norm_closed(pr, {2});
    CHECK(s2.chart_swapped);
    CHECK(s2.value.value() == Approx(std::sqrt(3.0 / (2.0 * kPi))).epsilon(1e-13));

    // Against the two-chart numeric search.
    quad::BasisDescriptor d{quad::BasisDescriptor::Space::cpn, 1, 2, {2}};
    auto search = quad::sup_norm_search(d);
    CHECK(search.log_value == Approx(s2.value.log_abs()).epsilon(1e-8));
}

TEST_CASE("closed-form L^p norms") {
    cpn::CPnParams pr{1, 2};
    CHECK(cpn::cpn_lp_norm_closed(pr, 1, LpExponent::finite(4.0)).value() ==
          Approx(std::pow(3.0 / (5.0 * kPi), 0.25)).epsilon(1e-13));

    // p = 2 is the exact log 0 for every level, even at N = 200.
    cpn::CPnParams big{1, 200};
    for (int a1 = 0; a1 <= 200; ++a1)
        CHECK(cpn::cpn_lp_norm_closed(big, a1, LpExponent::finite(2.0)).log_abs() == 0.0);

    // p = inf routes to the closed sup.
    auto v = cpn::cpn_lp_norm_closed(pr, 2, LpExponent::infinity());
    CHECK(v.log_abs() == Approx(cpn::cpn_sup_norm_closed(pr, {2}).value.log_abs()).epsilon(1e-15));
}

TEST_CASE("asymptotic prediction constants") {
    auto pinf = cpn::cpn_asymptotic_prediction(1, LpExponent::infinity(), 100);
    CHECK(pinf.exponent == Approx(0.25).epsilon(1e-15));
    // C_inf = (2^{1/2} pi^{3/2})^{-1/2} = 0.3563525...; the finite-N ratio at
    // N = 4000 lands near 0.35638, still inside the 2 percent band used elsewhere.
    CHECK(std::exp(pinf.log_constant) ==
          Approx(1.0 / std::sqrt(std::sqrt(2.0) * std::pow(kPi, 1.5))).epsilon(1e-12));
    CHECK(pinf.index == MultiIndex{50});

    auto p4 = cpn::cpn_asymptotic_prediction(2, LpExponent::finite(4.0), 101);
    CHECK(p4.exponent == Approx(1.5 * 0.25).epsilon(1e-15));
    CHECK(p4.index == MultiIndex{50, 0});
}
