#include "bt/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <stdexcept>

#include "bt/quad.hpp"
#include "bt/special_fn.hpp"

namespace bt::spectral {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t bits_of(double x) {
    std::uint64_t u;
    std::memcpy(&u, &x, sizeof u);
    return u;
}

}  // namespace

SlopeFit slope_fit(const std::vector<double>& x, const std::vector<double>& y) {
    size_t m = x.size();
    if (y.size() != m || m < 2) throw std::invalid_argument("slope_fit: need >= 2 points");
    double sx = 0, sy = 0;
    for (size_t i = 0; i < m; ++i) {
        sx += x[i];
        sy += y[i];
    }
    double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < m; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("slope_fit: degenerate abscissae");
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = syy - fit.slope * sxy;
    fit.r2 = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
    return fit;
}

BasisMatrix fock_build_matrix(const fock::FockParams& pr,
                              const std::vector<MonomialTerm>& symbol, int kmax) {
    BasisMatrix out;
    out.basis = indices_up_to_order(pr.n, kmax);
    int dim = int(out.basis.size());
    out.mat = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            double s = 0.0;
            for (const auto& t : symbol) {
                LogReal e = fock::monomial_matrix_element(pr.N, t.alpha, t.beta, out.basis[i],
                                                          out.basis[j]);
                if (!e.is_zero()) s += t.coeff * e.value();
            }
            out.mat(i, j) = s;
        }
    }
    return out;
}

BasisMatrix cpn_build_matrix_exact(const cpn::CPnParams& pr, int m) {
    BasisMatrix out;
    out.basis = indices_up_to_order(pr.n, pr.N);
    int dim = int(out.basis.size());
    out.mat = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        LogReal e = cpn_matrix_element(pr, m, out.basis[i], out.basis[i]);
        out.mat(i, i) = e.is_zero() ? 0.0 : e.value();
    }
    return out;
}

BasisMatrix cpn_build_matrix_quadrature(const cpn::CPnParams& pr, int m) {
    BasisMatrix out;
    out.basis = indices_up_to_order(pr.n, pr.N);
    int dim = int(out.basis.size());
    out.mat = Eigen::MatrixXd::Zero(dim, dim);
    quad::QuadratureSpec spec;
    spec.rel_tol = 1e-10;
    spec.abs_floor = 1e-14;
    for (int i = 0; i < dim; ++i) {
        for (int j = i; j < dim; ++j) {
            double v =
                quad::cpn_inner_product_quadrature(pr.n, pr.N, out.basis[i], out.basis[j], m, spec);
            out.mat(i, j) = v;
            out.mat(j, i) = v;
        }
    }
    return out;
}

EigenSystem eigendecompose(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("eigendecompose: non-square");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigendecompose: solver failed to converge");
    }
    EigenSystem out;
    out.values.assign(solver.eigenvalues().data(),
                      solver.eigenvalues().data() + solver.eigenvalues().size());
    out.vectors = solver.eigenvectors();
    return out;
}

std::vector<int> window_members(const std::vector<double>& eigenvalues, double E, double C,
                                int N) {
    std::vector<int> out;
    for (int i = 0; i < int(eigenvalues.size()); ++i) {
        if (std::fabs(eigenvalues[i] - E) <= C / N) out.push_back(i);
    }
    return out;
}

long long SpectralWindow::dimension() const {
    long long d = 0;
    for (long long m : mult) d += m;
    return d;
}

SpectralWindow cpn_window(const cpn::CPnParams& pr, double E, double C, bool auto_expand) {
    SpectralWindow win;
    win.E = E;
    win.C = C;
    win.n = pr.n;
    win.N = pr.N;
    double c = C;
    for (int attempt = 0; attempt < 200; ++attempt) {
        for (int a1 = 0; a1 <= pr.N; ++a1) {
            if (std::fabs(cpn_model_eigenvalue(pr, a1) - E) <= c / pr.N) {
                win.levels.push_back(a1);
                win.mult.push_back(cpn_level_multiplicity(pr, a1));
            }
        }
        if (!win.levels.empty() || !auto_expand) break;
        c *= 1.5;
        win.expanded = true;
    }
    if (win.levels.empty() && auto_expand)
        throw std::runtime_error("cpn_window: no level found after widening");
    win.C_used = c;
    return win;
}

SpectralWindow fock_harmonic_window(const fock::FockParams& pr, double E, double C,
                                    bool auto_expand) {
    SpectralWindow win;
    win.E = E;
    win.C = C;
    win.n = pr.n;
    win.N = pr.N;
    double c = C;
    for (int attempt = 0; attempt < 200; ++attempt) {
        int k_hi = int(std::floor(pr.N * E + c)) - pr.n;
        int k_lo = std::max(0, int(std::ceil(pr.N * E - c)) - pr.n);
        for (int k = k_lo; k <= k_hi; ++k) {
            if (std::fabs(fock::harmonic_eigenvalue(pr.n, pr.N, k) - E) <= c / pr.N) {
                win.levels.push_back(k);
                win.mult.push_back(fock::harmonic_multiplicity(pr.n, k));
            }
        }
        if (!win.levels.empty() || !auto_expand) break;
        c *= 1.5;
        win.expanded = true;
    }
    if (win.levels.empty() && auto_expand)
        throw std::runtime_error("fock_harmonic_window: no level found after widening");
    win.C_used = c;
    return win;
}

double WindowKernel::operator()(double t) const {
    if (shape == Shape::gauss) {
        double u = radius * t;
        return std::exp(-0.5 * u * u);
    }
    double u = 0.5 * radius * t;
    if (u == 0.0) return 1.0;
    double s = std::sin(u) / u;
    return s * s;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t s = salt;
    std::uint64_t h = splitmix64(s);
    s = seed ^ h;
    return splitmix64(s);
}

std::vector<std::complex<double>> gaussian_unit_vector(int dim, std::uint64_t seed) {
    if (dim < 1) throw std::invalid_argument("gaussian_unit_vector: dim < 1");
    std::mt19937_64 eng(seed);
    auto uniform = [&]() { return (double(eng() >> 11) + 1.0) * 0x1.0p-53; };  // (0, 1]
    std::vector<std::complex<double>> c(dim);
    double nrm = 0.0;
    for (auto& v : c) {
        double u1 = uniform(), u2 = uniform();
        double rad = std::sqrt(-std::log(u1));
        v = std::polar(rad, 2.0 * kPi * u2);
        nrm += std::norm(v);
    }
    nrm = std::sqrt(nrm);
    for (auto& v : c) v /= nrm;
    return c;
}

Quasimode sample_quasimode(const SpectralWindow& win, std::uint64_t seed) {
    for (long long m : win.mult) {
        if (m != 1) {
            throw std::domain_error("sample_quasimode: degenerate levels not supported");
        }
    }
    std::uint64_t salt = 0x42;
    std::uint64_t tmp = salt;
    salt = splitmix64(tmp) ^ std::uint64_t(win.N);
    salt = mix_seed(salt, std::uint64_t(win.levels.front()));
    salt = mix_seed(salt, std::uint64_t(win.levels.back()));
    salt = mix_seed(salt, bits_of(win.E));
    salt = mix_seed(salt, bits_of(win.C_used));
    Quasimode q;
    q.window = win;
    q.coeff = gaussian_unit_vector(int(win.levels.size()), mix_seed(seed, salt));
    return q;
}

namespace {

// ln |sum_a c_a e_a| at chart radius r and angle theta, terms in log scale.
double quasimode_log_abs(const cpn::CPnParams& pr, const Quasimode& q,
                         const std::vector<double>& log_norm, double r, double theta) {
    if (r <= 0.0) return kNegInf;
    double lr = std::log(r);
    double common = -0.5 * pr.N * std::log1p(r * r);
    double m = kNegInf;
    size_t k = q.window.levels.size();
    std::vector<double> lg(k);
    for (size_t i = 0; i < k; ++i) {
        lg[i] = log_norm[i] + q.window.levels[i] * lr + common;
        m = std::max(m, lg[i]);
    }
    if (m == kNegInf) return kNegInf;
    std::complex<double> s = 0.0;
    for (size_t i = 0; i < k; ++i) {
        s += q.coeff[i] * std::polar(std::exp(lg[i] - m), q.window.levels[i] * theta);
    }
    double a = std::abs(s);
    return a == 0.0 ? kNegInf : m + std::log(a);
}

}  // namespace

double quasimode_log_sup(const cpn::CPnParams& pr, const Quasimode& q) {
    if (pr.n != 1) throw std::domain_error("quasimode_log_sup: implemented for n = 1");
    size_t k = q.window.levels.size();
    std::vector<double> log_norm(k);
    for (size_t i = 0; i < k; ++i) {
        log_norm[i] = cpn_log_normalizer(pr, {q.window.levels[i]});
    }
    double h_min = 1.0, h_max = 0.0;
    for (int a : q.window.levels) {
        h_min = std::min(h_min, double(a) / pr.N);
        h_max = std::max(h_max, double(a) / pr.N);
    }
    double h_lo = std::max(5e-4, h_min - 0.2);
    double h_hi = std::min(1.0 - 5e-4, h_max + 0.2);

    auto eval_h = [&](double h, double theta) {
        h = std::clamp(h, 5e-4, 1.0 - 5e-4);
        return quasimode_log_abs(pr, q, log_norm, std::sqrt(h / (1.0 - h)), theta);
    };

    int span = q.window.levels.back() - q.window.levels.front();
    int n_theta = 16 * (span + 1);
    int n_h = 600;
    double best = kNegInf, best_h = 0.5, best_t = 0.0;
    for (int i = 0; i <= n_h; ++i) {
        double h = h_lo + (h_hi - h_lo) * i / n_h;
        for (int j = 0; j < n_theta; ++j) {
            double t = 2.0 * kPi * j / n_theta;
            double v = eval_h(h, t);
            if (v > best) {
                best = v;
                best_h = h;
                best_t = t;
            }
        }
    }
    // Shrinking 5x5 stencil around the incumbent; theta is periodic, h clamped.
    double rad_h = (h_hi - h_lo) / n_h;
    double rad_t = 2.0 * kPi / n_theta;
    for (int it = 0; it < 45; ++it) {
        double ch = best_h, ct = best_t;
        for (int di = -2; di <= 2; ++di) {
            for (int dj = -2; dj <= 2; ++dj) {
                double h = ch + 0.5 * di * rad_h;
                double t = ct + 0.5 * dj * rad_t;
                double v = eval_h(h, t);
                if (v > best) {
                    best = v;
                    best_h = h;
                    best_t = t;
                }
            }
        }
        rad_h *= 0.45;
        rad_t *= 0.45;
    }
    return best;
}

double quasimode_log_mass(const cpn::CPnParams& pr, const Quasimode& q, double h_lo,
                          double h_hi) {
    if (pr.n != 1) throw std::domain_error("quasimode_log_mass: implemented for n = 1");
    if (!(0.0 <= h_lo && h_lo < h_hi && h_hi <= 1.0)) {
        throw std::domain_error("quasimode_log_mass: need 0 <= h_lo < h_hi <= 1");
    }
    const double r_lo = std::sqrt(h_lo / (1.0 - h_lo));
    const bool unbounded = h_hi >= 1.0;
    const double r_hi = unbounded ? 0.0 : std::sqrt(h_hi / (1.0 - h_hi));
    const int N = pr.N;

    LogReal total;
    for (size_t i = 0; i < q.window.levels.size(); ++i) {
        int a = q.window.levels[i];
        double c2 = std::norm(q.coeff[i]);
        if (c2 == 0.0) continue;
        double ll = cpn_log_normalizer(pr, {a});
        // phi(r) = ln(4 pi) + 2 ln Lambda + (2a+1) ln r - (N+2) ln(1+r^2),
        // maximized over the region at the clamp of the stationary point.
        auto phi = [&](double r) {
            return std::log(4.0 * kPi) + 2.0 * ll + (2.0 * a + 1.0) * std::log(r) -
                   (N + 2.0) * std::log1p(r * r);
        };
        double r_star = std::sqrt((2.0 * a + 1.0) / (2.0 * N + 3.0 - 2.0 * a));
        double r_peak = unbounded ? std::max(r_lo, r_star) : std::clamp(r_star, r_lo, r_hi);
        if (r_peak == 0.0) r_peak = r_hi > 0 ? std::min(r_hi, 1e-3) : 1e-3;
        double phi_max = phi(r_peak);
        auto ratio = [&](double r) {
            if (r <= 0.0) return 0.0;
            double d = phi(r) - phi_max;
            return d < -745.0 ? 0.0 : std::exp(d);
        };
        quad::QuadratureSpec spec;
        spec.rel_tol = 1e-10;
        double integral;
        if (unbounded) {
            integral = quad::integrate_half_line([&](double t) { return ratio(r_lo + t); },
                                                 std::max(1.0, r_star - r_lo + 1.0), spec)
                           .value;
        } else {
            integral = quad::integrate_1d(ratio, r_lo, r_hi, spec).value;
        }
        if (integral <= 0.0) continue;
        total = total + LogReal::from_log(std::log(c2) + phi_max + std::log(integral));
    }
    return total.log_abs();
}

ProjectorDiagonal projector_diagonal(const cpn::CPnParams& pr, double E,
                                     const WindowKernel& kernel, int grid_pts) {
    if (pr.n != 1) throw std::domain_error("projector_diagonal: implemented for n = 1");
    const int N = pr.N;
    std::vector<double> weight(N + 1), log_norm(N + 1);
    ProjectorDiagonal out;
    for (int a = 0; a <= N; ++a) {
        weight[a] = kernel(N * (E - cpn_model_eigenvalue(pr, a)));
        log_norm[a] = cpn_log_normalizer(pr, {a});
        out.sum_rho += weight[a];
    }
    auto diag_at = [&](double r) {
        if (r < 0.0) return 0.0;
        double lr = r > 0.0 ? std::log(r) : kNegInf;
        double common = -double(N) * std::log1p(r * r);
        double s = 0.0;
        for (int a = 0; a <= N; ++a) {
            if (weight[a] == 0.0) continue;
            double lg = 2.0 * log_norm[a] + common + (a == 0 ? 0.0 : 2.0 * a * lr);
            if (a > 0 && r == 0.0) continue;
            if (lg > -745.0) s += weight[a] * std::exp(lg);
        }
        return s;
    };

    out.r.resize(grid_pts);
    out.diag.resize(grid_pts);
    double best_r = 1.0;
    for (int i = 0; i < grid_pts; ++i) {
        double h = (i + 0.5) / grid_pts;
        double r = std::sqrt(h / (1.0 - h));
        out.r[i] = r;
        out.diag[i] = diag_at(r);
        if (out.diag[i] > out.sup) {
            out.sup = out.diag[i];
            best_r = r;
        }
    }
    double rad = best_r * 2.0 / grid_pts + 1e-4;
    for (int it = 0; it < 45; ++it) {
        double c = best_r;
        for (int d = -2; d <= 2; ++d) {
            double r = std::max(0.0, c + 0.5 * d * rad);
            double v = diag_at(r);
            if (v > out.sup) {
                out.sup = v;
                best_r = r;
            }
        }
        rad *= 0.45;
    }

    quad::QuadratureSpec spec;
    spec.rel_tol = 1e-9;
    auto f = [&](double r) { return diag_at(r) * 4.0 * kPi * r / std::pow(1.0 + r * r, 2); };
    out.integral = quad::integrate_half_line(f, 2.0, spec).value;
    return out;
}

}  // namespace bt::spectral
