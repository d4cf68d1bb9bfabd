#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace bt::fbi {

// Uniform real grid x_i = lo + i * step.
struct Axis {
    double lo = 0.0;
    double step = 1.0;
    int count = 0;

    double at(int i) const { return lo + step * i; }
    double hi() const { return at(count - 1); }
};

// Axis spanning [-extent, extent] snapped outward to whole steps, so two axes
// with the same step share a lattice.
Axis symmetric_axis(double extent, double step);

// Complex-valued function sampled on a line grid.
struct SampledFunction1D {
    Axis x;
    std::vector<std::complex<double>> val;
};

// Throws unless boundary samples are below 1e-12 of the peak magnitude.
SampledFunction1D make_sampled(const Axis& x,
                               const std::function<std::complex<double>(double)>& f);

// Orthonormal Hermite functions at two scales: (2 pi)^{1/4} psi_k(sqrt(2 pi) x)
// whose transform lands on the monomial basis states, and N^{1/4} psi_k(sqrt(N) x),
// the Weyl eigenfunctions of x^2 - (1/N^2) d^2/dx^2 with eigenvalue (2k+1)/N.
double hermite_pi_scale(int k, double x);
double hermite_hbar_scale(int k, int N, double x);

// Weighted function on a rectangle of C; val[iy * re.count + ix] at
// z = re.at(ix) + i * im.at(iy).  The weight is stored in the values, so
// plain discrete L^2 over the grid approximates the ambient L^2(C) norm.
struct SampledPhaseSpaceFunction {
    Axis re, im;
    std::vector<std::complex<double>> val;
    std::vector<std::string> warnings;

    std::complex<double>& at(int ix, int iy) { return val[size_t(iy) * re.count + ix]; }
    const std::complex<double>& at(int ix, int iy) const {
        return val[size_t(iy) * re.count + ix];
    }
};

// Transform with Gaussian phase-space weight e^{-N|z|^2/2} (Fock target):
//   (2 N / pi)^... precisely 2^{1/4} (N/pi)^{1/2} e^{-N|z|^2/2} e^{-N z^2/2}
//     * Integral e^{2 sqrt(pi N) x z} e^{-pi x^2} u(x) dx.
// Maps the pi-scale Hermite h_k to the k-th normalized monomial state.
SampledPhaseSpaceFunction fbi_forward_fock(const SampledFunction1D& u, int N, const Axis& re,
                                           const Axis& im);

// Transform with tube weight e^{-N Im(z)^2/2}:
//   2^{-1/2} (N/pi)^{3/4} e^{-N Im(z)^2/2} * Integral e^{-N(z-x)^2/2} u(x) dx.
// Isometric from L^2(R); requires u's axis and `re` to share a lattice.
SampledPhaseSpaceFunction fbi_forward_phi(const SampledFunction1D& u, int N, const Axis& re,
                                          const Axis& im);

// Adjoint of fbi_forward_phi: same kernel conjugated, integrated over the
// grid.  Composing adjoint after forward recovers u (unitarity).
SampledFunction1D fbi_adjoint_phi(const SampledPhaseSpaceFunction& v, int N, const Axis& x);

// Orthogonal projector onto the range of fbi_forward_phi:
//   (N/2pi) e^{-N Im(z)^2/2} Integral e^{-N(z - conj(w))^2/4} e^{-N Im(w)^2/2} v(w) dL(w).
SampledPhaseSpaceFunction pi_phi_project(const SampledPhaseSpaceFunction& v, int N);

// Discrete norms (Riemann sums); p = inf means max |value|.
double lp_norm_line(const SampledFunction1D& u, double p);
double lp_norm_phase_space(const SampledPhaseSpaceFunction& v, double p);
std::complex<double> inner_product_phase_space(const SampledPhaseSpaceFunction& a,
                                               const SampledPhaseSpaceFunction& b);

// Relative residual of the weighted Cauchy-Riemann identity satisfied by each
// transform's output: dbar G + (N z / 2) G = 0 for the Fock weight and
// dbar G + (i N Im(z) / 2) G = 0 for the tube weight.  Eighth-order central
// differences on interior nodes, normalized by sqrt(N) ||G||.
enum class Weight { fock, tube };
double dbar_residual(const SampledPhaseSpaceFunction& g, int N, Weight w);

// Residuals || Pi_phi(f * Bu_k) - (2k+1)/N * Bu_k || / ||Bu_k|| for the
// multiplier f = |z|^2 - 1/N (corrected) and f = |z|^2 (uncorrected).
struct ConjugationResult {
    double corrected;
    double uncorrected;
    double grid_step;
    std::vector<std::string> warnings;
};

ConjugationResult conjugation_residual(int k, int N);

}  // namespace bt::fbi
