#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "bt/cpn.hpp"
#include "bt/fock.hpp"
#include "bt/log_real.hpp"
#include "bt/multi_index.hpp"

namespace bt::spectral {

// Least-squares line through (x, y) with coefficient of determination.
struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

SlopeFit slope_fit(const std::vector<double>& x, const std::vector<double>& y);

// A Toeplitz operator restricted to an explicit finite basis.
struct BasisMatrix {
    std::vector<MultiIndex> basis;
    Eigen::MatrixXd mat;
};

// Symbol term coeff * z^alpha conj(z)^beta; pass conjugate pairs for a real
// symbol so the matrix comes out symmetric.
struct MonomialTerm {
    double coeff;
    MultiIndex alpha;
    MultiIndex beta;
};

// Matrix of sum of monomial terms on the span of {e_nu : |nu| <= kmax}.
BasisMatrix fock_build_matrix(const fock::FockParams& pr,
                              const std::vector<MonomialTerm>& symbol, int kmax);

// T(H^m) on the full level-N basis of CP^n, from the factorial formula and,
// as an independent route, from numerical inner products <e_b, H^m e_a>.
BasisMatrix cpn_build_matrix_exact(const cpn::CPnParams& pr, int m);
BasisMatrix cpn_build_matrix_quadrature(const cpn::CPnParams& pr, int m);

struct EigenSystem {
    std::vector<double> values;  // ascending
    Eigen::MatrixXd vectors;     // columns match values
};

EigenSystem eigendecompose(const Eigen::MatrixXd& m);

// Indices of eigenvalues with |lambda - E| <= C/N.
std::vector<int> window_members(const std::vector<double>& eigenvalues, double E, double C,
                                int N);

// Spectral window of width C/N around E, resolved by exact level enumeration.
// levels holds a_1 (projective case) or the total degree k (Fock case).
struct SpectralWindow {
    double E = 0.0;
    double C = 1.0;
    double C_used = 1.0;  // grown when auto_expand had to widen an empty window
    int n = 1;
    int N = 1;
    bool expanded = false;
    std::vector<int> levels;
    std::vector<long long> mult;

    long long dimension() const;
};

SpectralWindow cpn_window(const cpn::CPnParams& pr, double E, double C,
                          bool auto_expand = false);
SpectralWindow fock_harmonic_window(const fock::FockParams& pr, double E, double C,
                                    bool auto_expand = false);

// Energy localizer rho(N(E - lambda)); rho(0) = 1.  The Fejer shape has a
// triangular Fourier transform supported in [-radius, radius], the Gaussian
// shape trades compact support for faster spectral decay.
struct WindowKernel {
    enum class Shape { fejer, gauss };
    Shape shape = Shape::fejer;
    double radius = 1.0;

    double operator()(double t) const;
};

// Deterministic seeding: same (seed, salt) gives the same draw on every
// platform and thread count.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);
std::vector<std::complex<double>> gaussian_unit_vector(int dim, std::uint64_t seed);

// Random unit-coefficient combination of the window's basis states (one state
// per level; projective line only, where levels are nondegenerate).
struct Quasimode {
    SpectralWindow window;
    std::vector<std::complex<double>> coeff;
};

Quasimode sample_quasimode(const SpectralWindow& win, std::uint64_t seed);

// ln sup |u| over the manifold, by scanning (r, theta) and local refinement.
double quasimode_log_sup(const cpn::CPnParams& pr, const Quasimode& q);

// ln of the |u|^2 mass on the classically forbidden band {H(w) in (h_lo, h_hi)},
// H = |w|^2/(1 + |w|^2).  Cross terms between distinct levels integrate to
// zero on such regions, so the mass is a single-level sum done in log scale.
double quasimode_log_mass(const cpn::CPnParams& pr, const Quasimode& q, double h_lo,
                          double h_hi);

// Diagonal of the rho-localized spectral projector of T(H) on the projective
// line: diag(r) = sum_a rho(N(E - lambda_a)) |e_a(r)|^2, with its sup over r,
// its integral over the manifold by adaptive quadrature, and the exact value
// sum_a rho(N(E - lambda_a)) that orthonormality forces that integral to be.
struct ProjectorDiagonal {
    std::vector<double> r;
    std::vector<double> diag;
    double sup = 0.0;
    double integral = 0.0;
    double sum_rho = 0.0;
};

ProjectorDiagonal projector_diagonal(const cpn::CPnParams& pr, double E,
                                     const WindowKernel& kernel, int grid_pts = 2001);

}  // namespace bt::spectral
