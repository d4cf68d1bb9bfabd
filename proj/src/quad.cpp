#include "bt/quad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace bt::quad {

namespace {

// Gauss-Kronrod 7-15 nodes and weights (QUADPACK dqk15 coefficients).
constexpr double kXgk[8] = {
    0.99145537112081263921, 0.94910791234275852453, 0.86486442335976907279,
    0.74153118559939443986, 0.58608723546769113029, 0.40584515137739716691,
    0.20778495500789846760, 0.0};
constexpr double kWgk[8] = {
    0.02293532201052922496, 0.06309209262997855329, 0.10479001032225018384,
    0.14065325971552591875, 0.16900472663926790283, 0.19035057806478540991,
    0.20443294007529889241, 0.20948214108472782801};
constexpr double kWg[4] = {
    0.12948496616886969327, 0.27970539148927666790, 0.38183005050511894495,
    0.41795918367346938776};

struct Segment {
    double a, b;
    double value, error;
    int depth;
};

Segment gk15(const std::function<double(double)>& f, double a, double b, int depth) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);

    double fc = f(c);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    double fv[15];
    fv[7] = fc;
    for (int j = 0; j < 7; ++j) {
        double x = h * kXgk[j];
        double f1 = f(c - x);
        double f2 = f(c + x);
        fv[j] = f1;
        fv[14 - j] = f2;
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    double reskh = resk * 0.5;
    double resasc = kWgk[7] * std::fabs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::fabs(fv[j] - reskh) + std::fabs(fv[14 - j] - reskh));
    resasc *= h;

    double err = std::fabs((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    return Segment{a, b, resk * h, err, depth};
}

struct SegmentWorse {
    bool operator()(const Segment& x, const Segment& y) const {
        if (x.error != y.error) return x.error < y.error;
        return x.a > y.a;  // deterministic tie-break by position
    }
};

QuadResult adaptive(const std::function<double(double)>& f,
                    const std::vector<std::pair<double, double>>& initial,
                    const QuadratureSpec& spec) {
    std::priority_queue<Segment, std::vector<Segment>, SegmentWorse> heap;
    double total = 0.0, toterr = 0.0;
    for (auto [a, b] : initial) {
        Segment s = gk15(f, a, b, 0);
        total += s.value;
        toterr += s.error;
        heap.push(s);
    }
    int nseg = int(initial.size());
    double frozen_err = 0.0;  // error carried by segments already at max depth
    Segment worst{};
    while (toterr > std::max(spec.rel_tol * std::fabs(total), spec.abs_floor)) {
        bool ok = !heap.empty() && nseg < spec.max_segments &&
                  frozen_err <= std::max(spec.rel_tol * std::fabs(total), spec.abs_floor);
        if (ok) {
            worst = heap.top();
            heap.pop();
            if (worst.depth >= spec.max_depth) {
                // Unsplittable; park it and let the rest keep refining.
                frozen_err += worst.error;
                continue;
            }
            double mid = 0.5 * (worst.a + worst.b);
            Segment l = gk15(f, worst.a, mid, worst.depth + 1);
            Segment r = gk15(f, mid, worst.b, worst.depth + 1);
            total += l.value + r.value - worst.value;
            toterr += l.error + r.error - worst.error;
            heap.push(l);
            heap.push(r);
            ++nseg;
            continue;
        }
        std::ostringstream os;
        os << "integrate_1d: no convergence; worst subinterval [" << worst.a << ", " << worst.b
           << "] error " << worst.error << " after " << nseg << " segments";
        throw std::runtime_error(os.str());
    }
    return QuadResult{total, toterr};
}

double log_factorial_sum(int k) {
    double s = 0.0;
    for (int i = 2; i <= k; ++i) s += std::log(double(i));
    return s;
}

// ln of the cpn normalizer Lambda_a, assembled from plain log sums.
double log_lambda(int n, int N, const MultiIndex& a) {
    double s = 0.0;
    for (int k = 1; k <= n; ++k) s += std::log(double(N + k));
    s -= n * std::log(2.0 * M_PI);
    s += log_factorial_sum(N) - log_factorial_sum(N - order(a));
    for (int v : a) s -= log_factorial_sum(v);
    return 0.5 * s;
}

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                        const QuadratureSpec& spec) {
    if (!(b > a)) throw std::domain_error("integrate_1d: requires b > a");
    // Pre-split so sharply peaked integrands are seen by the first pass.
    std::vector<std::pair<double, double>> init;
    const int k = 8;
    for (int i = 0; i < k; ++i)
        init.emplace_back(a + (b - a) * i / k, a + (b - a) * (i + 1) / k);
    return adaptive(f, init, spec);
}

QuadResult integrate_half_line(const std::function<double(double)>& f, double split,
                               const QuadratureSpec& spec) {
    if (!(split > 0)) throw std::domain_error("integrate_half_line: requires split > 0");
    QuadResult head = integrate_1d(f, 0.0, split, spec);
    // Tail via r = split + tan(theta); sec^2 Jacobian.
    auto tail_f = [&](double t) {
        double c = std::cos(t);
        double r = split + std::tan(t);
        double v = f(r);
        return v == 0.0 ? 0.0 : v / (c * c);
    };
    QuadResult tail = adaptive(tail_f, {{0.0, 0.8}, {0.8, 1.3}, {1.3, M_PI_2}}, spec);
    return QuadResult{head.value + tail.value, head.error + tail.error};
}

double default_split(int max_index_entry, int N) {
    return 4.0 * std::sqrt(double(std::max(max_index_entry, 0)) / double(N)) + 1.0;
}

double log_magnitude_radial(const BasisDescriptor& d, const std::vector<double>& r) {
    if (int(r.size()) != d.n) throw std::invalid_argument("log_magnitude_radial: dim mismatch");
    if (d.space == BasisDescriptor::Space::fock) {
        double s = 0.0;
        for (int j = 0; j < d.n; ++j) {
            int nu = d.index[j];
            double lr = r[j] > 0 ? std::log(r[j]) : kNegInf;
            double t = 0.5 * (1 + nu) * std::log(double(d.N)) - 0.5 * std::log(M_PI) -
                       0.5 * log_factorial_sum(nu) - 0.5 * d.N * r[j] * r[j];
            s += nu == 0 ? t : t + nu * lr;
            if (nu > 0 && r[j] == 0) return kNegInf;
        }
        return s;
    }
    double s = log_lambda(d.n, d.N, d.index);
    double r2 = 0.0;
    for (int j = 0; j < d.n; ++j) {
        int a = d.index[j];
        if (a > 0) {
            if (r[j] == 0) return kNegInf;
            s += a * std::log(r[j]);
        }
        r2 += r[j] * r[j];
    }
    return s - 0.5 * d.N * std::log1p(r2);
}

namespace {

// Nested radial integration of exp(p*logmag)*weight over [0,inf)^n for cpn.
double cpn_lp_nested(const BasisDescriptor& d, double p, const QuadratureSpec& spec,
                     std::vector<double>& r, int coord) {
    int maxa = *std::max_element(d.index.begin(), d.index.end());
    double split = default_split(int(std::ceil(p * maxa / 2.0)), d.N) + 1.0;
    auto integrand = [&](double rc) {
        r[coord] = rc;
        if (coord + 1 < d.n) return cpn_lp_nested(d, p, spec, r, coord + 1);
        double lm = log_magnitude_radial(d, r);
        if (lm == kNegInf) return 0.0;
        double r2 = 0.0;
        for (double v : r) r2 += v * v;
        // |e|^p * FS density * prod r_j, angular factors (2*pi)^n applied by caller.
        double lg = p * lm + d.n * std::log(2.0) - (d.n + 1) * std::log1p(r2);
        for (double v : r) lg += std::log(v);
        return std::exp(lg);
    };
    QuadratureSpec inner = spec;
    if (coord + 1 < d.n) inner.rel_tol = std::max(spec.rel_tol * 0.1, 1e-13);
    return integrate_half_line(integrand, split, inner).value;
}

}  // namespace

double lp_norm_quadrature(const BasisDescriptor& d, double p, const QuadratureSpec& spec) {
    if (!(p >= 1.0) || std::isinf(p))
        throw std::domain_error("lp_norm_quadrature: finite p >= 1 required");
    if (d.space == BasisDescriptor::Space::fock) {
        // Product structure: one radial integral per coordinate.
        double lg_sum = 0.0;
        for (int j = 0; j < d.n; ++j) {
            int nu = d.index[j];
            BasisDescriptor one{BasisDescriptor::Space::fock, 1, d.N, {nu}};
            auto f = [&](double r) {
                std::vector<double> rv{r};
                double lm = log_magnitude_radial(one, rv);
                return lm == kNegInf || r == 0.0 ? 0.0 : std::exp(p * lm + std::log(r));
            };
            double split = default_split(int(std::ceil(p * nu / 2.0)), d.N);
            double I = integrate_half_line(f, split, spec).value;
            lg_sum += std::log(2.0 * M_PI) + std::log(I);
        }
        return std::exp(lg_sum / p);
    }
    if (d.n > 3) throw std::domain_error("lp_norm_quadrature: cpn nested path limited to n <= 3");
    std::vector<double> r(d.n, 0.0);
    double I = cpn_lp_nested(d, p, spec, r, 0);
    return std::exp((d.n * std::log(2.0 * M_PI) + std::log(I)) / p);
}

SupResult sup_norm_search(const std::function<double(const std::vector<double>&)>& log_mag,
                          const std::vector<double>& lo, const std::vector<double>& hi,
                          const std::vector<std::vector<double>>& seeds,
                          int grid_per_dim, int refine_steps) {
    size_t dim = lo.size();
    if (hi.size() != dim || dim == 0) throw std::invalid_argument("sup_norm_search: bad box");

    double best = kNegInf;
    std::vector<double> best_x(lo);

    auto consider = [&](const std::vector<double>& x) {
        double v = log_mag(x);
        if (v > best) {
            best = v;
            best_x = x;
        }
    };

    // Full scan of the product grid.
    std::vector<int> odo(dim, 0);
    std::vector<double> x(dim);
    while (true) {
        for (size_t j = 0; j < dim; ++j)
            x[j] = lo[j] + (hi[j] - lo[j]) * odo[j] / double(grid_per_dim - 1);
        consider(x);
        size_t j = 0;
        while (j < dim && ++odo[j] == grid_per_dim) odo[j++] = 0;
        if (j == dim) break;
    }
    for (const auto& s : seeds)
        if (s.size() == dim) consider(s);

    // Local zoom: shrinking 5^dim stencils centered on the incumbent.
    std::vector<double> radius(dim);
    for (size_t j = 0; j < dim; ++j) radius[j] = (hi[j] - lo[j]) / double(grid_per_dim - 1);
    for (int it = 0; it < refine_steps; ++it) {
        std::vector<double> center = best_x;
        std::vector<int> st(dim, 0);
        while (true) {
            for (size_t j = 0; j < dim; ++j) {
                double v = center[j] + (st[j] - 2) * radius[j] * 0.5;
                x[j] = std::clamp(v, lo[j], hi[j]);
            }
            consider(x);
            size_t j = 0;
            while (j < dim && ++st[j] == 5) st[j++] = 0;
            if (j == dim) break;
        }
        for (size_t j = 0; j < dim; ++j) radius[j] *= 0.45;
    }
    return SupResult{best, best_x};
}

SupResult sup_norm_search(const BasisDescriptor& d) {
    auto fn = [&](const std::vector<double>& r) { return log_magnitude_radial(d, r); };
    int maxa = *std::max_element(d.index.begin(), d.index.end());

    if (d.space == BasisDescriptor::Space::fock) {
        std::vector<double> lo(d.n, 0.0), hi(d.n), seed(d.n);
        for (int j = 0; j < d.n; ++j) {
            seed[j] = std::sqrt(double(d.index[j]) / d.N);
            hi[j] = default_split(maxa, d.N);
        }
        return sup_norm_search(fn, lo, hi, {seed});
    }

    // cpn: search the primary chart, then the chart swapping coordinate 1 to
    // infinity, where the state reappears with first entry N - |a|. Covers the
    // degenerate |a| = N family whose maximizer escapes the primary chart.
    int N = d.N, tot = order(d.index);
    std::vector<double> lo(d.n, 0.0), hi(d.n), seed(d.n);
    for (int j = 0; j < d.n; ++j) {
        double den = std::max(N - tot, 1);
        seed[j] = std::sqrt(d.index[j] / den);
        hi[j] = 4.0 * std::max(seed[j], 1.0) + 1.0;
    }
    SupResult primary = sup_norm_search(fn, lo, hi, {seed});

    BasisDescriptor swapped = d;
    swapped.index[0] = N - tot;
    auto fn2 = [&](const std::vector<double>& r) { return log_magnitude_radial(swapped, r); };
    int tot2 = order(swapped.index);
    for (int j = 0; j < d.n; ++j) {
        double den = std::max(N - tot2, 1);
        seed[j] = std::sqrt(swapped.index[j] / den);
        hi[j] = 4.0 * std::max(seed[j], 1.0) + 1.0;
    }
    SupResult alt = sup_norm_search(fn2, lo, hi, {seed});
    return alt.log_value > primary.log_value ? alt : primary;
}

namespace {

// (1/2pi) * trapezoid of e^{i k theta}; exact zero for k != 0 up to roundoff
// once the node count exceeds |k|.
double angular_factor(int k, int nodes) {
    double re = 0.0;
    for (int m = 0; m < nodes; ++m) re += std::cos(k * (2.0 * M_PI * m / nodes));
    return re / nodes;
}

}  // namespace

double fock_inner_product_quadrature(int n, int N, const MultiIndex& alpha,
                                     const MultiIndex& beta, const QuadratureSpec& spec) {
    double out = 1.0;
    for (int j = 0; j < n; ++j) {
        int a = alpha[j], b = beta[j];
        double ang = angular_factor(b - a, 4 * (std::abs(b - a) + 4));
        double lc = (1.0 + 0.5 * (a + b)) * std::log(double(N)) - std::log(M_PI) -
                    0.5 * (log_factorial_sum(a) + log_factorial_sum(b));
        auto f = [&](double r) {
            if (r == 0.0) return 0.0;
            return std::exp(lc + (a + b + 1) * std::log(r) - N * r * r);
        };
        double I = integrate_half_line(f, default_split(std::max(a, b), N), spec).value;
        out *= 2.0 * M_PI * ang * I;
    }
    return out;
}

namespace {

double cpn_radial_nested(int n, int N, const MultiIndex& a, const MultiIndex& b, int h_power,
                         const QuadratureSpec& spec, std::vector<double>& r, int coord) {
    auto integrand = [&](double rc) {
        r[coord] = rc;
        if (coord + 1 < n) return cpn_radial_nested(n, N, a, b, h_power, spec, r, coord + 1);
        double r2 = 0.0;
        for (double v : r) r2 += v * v;
        double lg = -(N + h_power + n + 1) * std::log1p(r2);
        for (int j = 0; j < n; ++j) {
            if (r[j] == 0.0) return 0.0;
            lg += (a[j] + b[j] + 1 + (j == 0 ? 2 * h_power : 0)) * std::log(r[j]);
        }
        return std::exp(lg);
    };
    QuadratureSpec inner = spec;
    if (coord + 1 < n) inner.rel_tol = std::max(spec.rel_tol * 0.1, 1e-13);
    return integrate_half_line(integrand, 2.5, inner).value;
}

}  // namespace

double cpn_inner_product_quadrature(int n, int N, const MultiIndex& a, const MultiIndex& b,
                                    int h_power, const QuadratureSpec& spec) {
    double ang = 1.0;
    for (int j = 0; j < n; ++j) ang *= angular_factor(b[j] - a[j], 4 * (std::abs(b[j] - a[j]) + 4));
    std::vector<double> r(n, 0.0);
    double radial = cpn_radial_nested(n, N, a, b, h_power, spec, r, 0);
    double lnorm = log_lambda(n, N, a) + log_lambda(n, N, b) +
                   n * std::log(2.0) + n * std::log(2.0 * M_PI);
    return std::exp(lnorm) * ang * radial;
}

}  // namespace bt::quad
