#pragma once

#include <vector>

#include "bt/log_real.hpp"
#include "bt/lp_exponent.hpp"
#include "bt/multi_index.hpp"

namespace bt::cpn {

// Projective space CP^n in the affine chart w in C^n, quantized at level N.
// Basis states are indexed by a with |a| <= N.
struct CPnParams {
    int n = 1;
    int N = 1;
};

// Density of the volume form against Lebesgue measure on the chart,
// 2^n (1 + |w|^2)^{-(n+1)}, as a function of |w|^2.
double fubini_study_weight(int n, double abs_sq);

// integral over [0,inf)^n of prod_j r_j^{2 a_j + 1} (1 + |r|^2)^{-(b+n+1)} dr
// = a! (b - |a|)! / (2^n (b + n)!).  Requires b >= |a|.
LogReal lcalcul_integral(const MultiIndex& a, int b);

// ln Lambda_a where Lambda_a^2 = (N+n)! / ((2 pi)^n a! (N-|a|)!) normalizes
// e_a(w) = Lambda_a w^a (1 + |w|^2)^{-N/2} to unit L^2 norm.
double cpn_log_normalizer(const CPnParams& pr, const MultiIndex& a);

// |e_a| at the radii |w_j| = r_j.
LogReal cpn_eval_radial(const CPnParams& pr, const MultiIndex& a, const std::vector<double>& r);

// <e_b, T(H^m) e_a> for H = |w_1|^2 / (1 + |w|^2): zero off the diagonal,
// prod_{i=1..m} (a_1 + i) / (N + n + i) on it.
LogReal cpn_matrix_element(const CPnParams& pr, int m, const MultiIndex& a, const MultiIndex& b);

// T(H) eigenvalue (a_1 + 1)/(N + n + 1) and the number of basis indices
// sharing it, binom(N - a_1 + n - 1, n - 1).
double cpn_model_eigenvalue(const CPnParams& pr, int a1);
long long cpn_level_multiplicity(const CPnParams& pr, int a1);

// Global sup of |e_a|.  For |a| < N the maximizer is interior to the chart at
// r_j = sqrt(a_j / (N - |a|)); for |a| = N it sits on the divisor at infinity,
// so the value is computed after inverting through a coordinate with a_j > 0
// (which sends that entry to N - |a|) and argmax is reported in that chart.
struct CPnSup {
    LogReal value;
    std::vector<double> argmax;
    bool chart_swapped = false;
    int swap_axis = -1;
};

CPnSup cpn_sup_norm_closed(const CPnParams& pr, const MultiIndex& a);

// ||e_a||_p for the one-coordinate family a = (a1, 0, ..., 0):
//   ||e_a||_p^p = (2 pi)^n Lambda_a^p Gamma(p a1/2 + 1) Gamma(p (N-a1)/2 + 1)
//                 / Gamma(p N/2 + n + 1).
// Terms are grouped against ln Lambda_a so the p = 2 value is exactly 1.
LogReal cpn_lp_norm_closed(const CPnParams& pr, int a1, LpExponent p);

// Family a(N) = (floor(N/2), 0, ..., 0) and its predicted norm growth
// ||e_{a(N)}||_p ~ C N^{(n - 1/2)(1/2 - 1/p)} with
//   C = (2/p)^{(n-1/2)/p} (pi^{n+1/2} 2^{n-1/2})^{-(1/2 - 1/p)}.
struct CPnPrediction {
    double exponent;
    double log_constant;
    MultiIndex index;
};

CPnPrediction cpn_asymptotic_prediction(int n, LpExponent p, int N);

}  // namespace bt::cpn
