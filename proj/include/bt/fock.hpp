#pragma once

#include <complex>
#include <vector>

#include "bt/log_real.hpp"
#include "bt/lp_exponent.hpp"
#include "bt/multi_index.hpp"

namespace bt::fock {

using ComplexVec = std::vector<std::complex<double>>;

struct FockParams {
    int n = 1;  // complex dimension
    int N = 1;  // inverse semiclassical parameter
};

// Value of the normalized monomial state e_nu at a point, split into a
// log-scale magnitude and a unit-modulus phase so huge N never overflows.
struct EvalResult {
    LogReal magnitude;
    std::complex<double> phase;
};

EvalResult fock_eval(const FockParams& pr, const MultiIndex& nu, const ComplexVec& z);

// Weighted reproducing kernel K(w, z) = (N/pi)^n exp(N w.conj(z)) with both
// Gaussian weights attached; |K| <= (N/pi)^n, so a plain complex suffices.
std::complex<double> bergman_kernel(const FockParams& pr, const ComplexVec& w,
                                    const ComplexVec& z);

// Coefficient c in z^alpha e_nu = c e_{nu+alpha}.
LogReal shift_matrix_element(int N, const MultiIndex& alpha, const MultiIndex& nu);

// <e_rho, T(z^alpha conj(z)^beta) e_nu>; zero unless rho + beta = nu + alpha.
LogReal monomial_matrix_element(int N, const MultiIndex& alpha, const MultiIndex& beta,
                                const MultiIndex& rho, const MultiIndex& nu);

// Diagonal entry of the Toeplitz operator of prod_j |z_j|^{2 m_j}.
LogReal radial_symbol_diagonal(int N, const MultiIndex& m, const MultiIndex& nu);

// T(|z|^2) eigenvalue on the degree-k joint eigenspace, and its dimension.
double harmonic_eigenvalue(int n, int N, int k);
long long harmonic_multiplicity(int n, int k);

// ||e_nu||_p from the moment formula; exact 1 at p = 2, sup value at p = inf.
LogReal fock_lp_norm_closed(const FockParams& pr, const MultiIndex& nu, LpExponent p);

// Coordinates of a maximizer of |e_nu| (radii; any phases attain the sup).
std::vector<double> fock_sup_argmax(const FockParams& pr, const MultiIndex& nu);

// Stirling-envelope form of the same norm.  Exactly equal to the closed form;
// the point is that every coordinate factor is elementary except a remainder
// eps(p, nu_j) trapped in [-1/24, 1/24] for p >= 2 (and identically 0 at p = 2).
struct EnvelopeNorm {
    LogReal value;
    std::vector<double> eps;  // one remainder per coordinate
    double eps_lo = -1.0 / 24.0;
    double eps_hi = 1.0 / 24.0;
};

double envelope_eps(double p, int x);
EnvelopeNorm fock_lp_norm_envelope(const FockParams& pr, const MultiIndex& nu, double p);

// Second differences of ln f_p and ln g on integer arguments, where f_p and g
// are the single-coordinate norm factors for finite p and p = inf.  Convexity
// of these logs is what makes the sharpness ratio bound single out the
// one-coordinate index as the extremizer.
struct ConvexityReport {
    std::vector<double> second_diff_finite;  // x = 1 .. x_max-1
    std::vector<double> second_diff_inf;
    double min_finite = 0.0;
    double min_inf = 0.0;
    bool convex(double tol) const { return min_finite >= -tol && min_inf >= -tol; }
};

ConvexityReport log_convexity_check(double p, int x_max);

// ||e_nu||_p / ||e_{(|nu|,0,...,0)}||_p together with the dimensional bound
// exp(1/24) * (exp(1/12) * sqrt(e / sqrt(2 pi)))^n valid for all p in [2, inf].
struct RatioBound {
    LogReal ratio;
    double bound_log;
    bool holds;
};

RatioBound sharpness_ratio_bound(const FockParams& pr, const MultiIndex& nu, LpExponent p);

// Index family nu(N) = (k/alpha, ..., k/alpha, 0, ...) with k the nearest
// multiple of alpha to lambda*N, and the predicted growth exponent of
// ||e_{nu(N)}||_p in ln N, namely (n - alpha/2) (1/2 - 1/p).
struct AsymptoticPrediction {
    double exponent;
    MultiIndex index;
};

AsymptoticPrediction fock_asymptotic_prediction(int n, double lambda, int alpha, LpExponent p,
                                                int N);

}  // namespace bt::fock
