#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "bt/multi_index.hpp"

namespace bt::quad {

struct QuadratureSpec {
    double rel_tol = 1e-12;
    double abs_floor = 1e-15;
    int max_depth = 60;       // bisection depth cap per subinterval
    int max_segments = 40000;
};

struct QuadResult {
    double value;
    double error;  // estimated absolute error
};

// Adaptive Gauss-Kronrod (G7,K15) on [a,b]. Worst-error-first subdivision with
// a fixed, thread-independent order; throws on non-convergence with the worst
// subinterval in the message.
QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                        const QuadratureSpec& spec = {});

// [0, inf): direct integration up to `split`, tangent-compactified tail beyond.
// `split` should sit past the integrand's peak; see default_split.
QuadResult integrate_half_line(const std::function<double(double)>& f, double split,
                               const QuadratureSpec& spec = {});

// Scale-aware split point for peaked radial integrands: 4*sqrt(k/N) + 1 where
// k is the largest index entry involved.
double default_split(int max_index_entry, int N);

// Basis-state descriptor for the oracle paths. The oracle evaluates magnitudes
// from the definitions with plain log sums (factorials by summation), staying
// independent of the closed-form module and its Gamma machinery.
struct BasisDescriptor {
    enum class Space { fock, cpn };
    Space space;
    int n = 1;
    int N = 1;
    MultiIndex index;
};

// log of the state magnitude at radial point r (per-coordinate moduli).
// For cpn this is the metric magnitude Lambda_a * prod r^a_j / (1+|r|^2)^{N/2}.
double log_magnitude_radial(const BasisDescriptor& d, const std::vector<double>& r);

// ||e||_p by quadrature against the correct volume (Lebesgue for fock, the
// Fubini-Study density for cpn). Finite p only; the fock path uses the
// per-coordinate product structure, the cpn path nests n adaptive integrals.
double lp_norm_quadrature(const BasisDescriptor& d, double p, const QuadratureSpec& spec = {});

struct SupResult {
    double log_value;
    std::vector<double> argmax;
};

// Deterministic grid search plus local zoom refinement over a box. log_mag may
// return -inf; seeds are merged into the initial scan.
SupResult sup_norm_search(const std::function<double(const std::vector<double>&)>& log_mag,
                          const std::vector<double>& lo, const std::vector<double>& hi,
                          const std::vector<std::vector<double>>& seeds,
                          int grid_per_dim = 33, int refine_steps = 48);

// Convenience: sup norm of a basis state, seeded at its closed-form critical
// point. For cpn, both the primary chart and the swap sending coordinate 1 to
// infinity are searched, so |a| = N is covered.
SupResult sup_norm_search(const BasisDescriptor& d);

// Inner products by quadrature: angular trapezoid per coordinate (the sums
// discover orthogonality between different monomial frequencies numerically)
// times nested adaptive radial integrals.
double fock_inner_product_quadrature(int n, int N, const MultiIndex& alpha,
                                     const MultiIndex& beta, const QuadratureSpec& spec = {});

// <e_a, H^m e_b> on cpn with H = |w_1|^2/(1+|w|^2); m = 0 gives plain overlaps.
double cpn_inner_product_quadrature(int n, int N, const MultiIndex& a, const MultiIndex& b,
                                    int h_power = 0, const QuadratureSpec& spec = {});

}  // namespace bt::quad
