#include "bt/fbi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bt/parallel.hpp"

namespace bt::fbi {

namespace {

constexpr double kPi = 3.141592653589793238462643383279503;
using cd = std::complex<double>;

// Physicists' Hermite functions psi_k, orthonormal on the line.
double psi(int k, double y) {
    if (k < 0) throw std::invalid_argument("hermite: negative degree");
    double p0 = std::pow(kPi, -0.25) * std::exp(-0.5 * y * y);
    if (k == 0) return p0;
    double p1 = std::sqrt(2.0) * y * p0;
    for (int j = 2; j <= k; ++j) {
        double p2 = std::sqrt(2.0 / j) * y * p1 - std::sqrt((j - 1.0) / j) * p0;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

// Index range [j0, j1] of axis samples inside [lo, hi]; empty when j0 > j1.
std::pair<int, int> axis_window(const Axis& ax, double lo, double hi) {
    int j0 = int(std::ceil((lo - ax.lo) / ax.step - 1e-12));
    int j1 = int(std::floor((hi - ax.lo) / ax.step + 1e-12));
    j0 = std::max(j0, 0);
    j1 = std::min(j1, ax.count - 1);
    return {j0, j1};
}

void check_edges(SampledPhaseSpaceFunction& g) {
    double peak = 0.0;
    for (const auto& v : g.val) peak = std::max(peak, std::abs(v));
    double edge = 0.0;
    int nx = g.re.count, ny = g.im.count;
    for (int ix = 0; ix < nx; ++ix) {
        edge = std::max(edge, std::abs(g.at(ix, 0)));
        edge = std::max(edge, std::abs(g.at(ix, ny - 1)));
    }
    for (int iy = 0; iy < ny; ++iy) {
        edge = std::max(edge, std::abs(g.at(0, iy)));
        edge = std::max(edge, std::abs(g.at(nx - 1, iy)));
    }
    if (edge > 1e-12 * peak) g.warnings.push_back("boundary-leak");
}

void check_spacing(SampledPhaseSpaceFunction& g, int N) {
    double limit = 0.25 / std::sqrt(double(N)) * (1.0 + 1e-9);
    if (g.re.step > limit || g.im.step > limit) g.warnings.push_back("grid-too-coarse");
}

}  // namespace

Axis symmetric_axis(double extent, double step) {
    if (!(extent > 0.0) || !(step > 0.0)) throw std::invalid_argument("symmetric_axis: bad sizes");
    int half = int(std::ceil(extent / step - 1e-12));
    return {-step * half, step, 2 * half + 1};
}

SampledFunction1D make_sampled(const Axis& x, const std::function<cd(double)>& f) {
    if (x.count < 9) throw std::invalid_argument("make_sampled: axis too short");
    SampledFunction1D u;
    u.x = x;
    u.val.resize(x.count);
    double peak = 0.0;
    for (int i = 0; i < x.count; ++i) {
        u.val[i] = f(x.at(i));
        peak = std::max(peak, std::abs(u.val[i]));
    }
    double edge = std::max(std::abs(u.val.front()), std::abs(u.val.back()));
    if (edge > 1e-12 * peak)
        throw std::invalid_argument("make_sampled: boundary samples exceed 1e-12 of peak");
    return u;
}

double hermite_pi_scale(int k, double x) {
    return std::pow(2.0 * kPi, 0.25) * psi(k, std::sqrt(2.0 * kPi) * x);
}

double hermite_hbar_scale(int k, int N, double x) {
    return std::pow(double(N), 0.25) * psi(k, std::sqrt(double(N)) * x);
}

SampledPhaseSpaceFunction fbi_forward_fock(const SampledFunction1D& u, int N, const Axis& re,
                                           const Axis& im) {
    SampledPhaseSpaceFunction g;
    g.re = re;
    g.im = im;
    g.val.assign(size_t(re.count) * im.count, cd{0.0, 0.0});

    const double rpi = std::sqrt(kPi);
    const double rN = std::sqrt(double(N));
    const double s = std::sqrt(kPi * N);
    const double c0 = std::pow(2.0, 0.25) * std::sqrt(N / kPi) * u.x.step;
    // e^{-w^2} below 4e-19 once |w| > 6.5; widen slightly for safety.
    const double half_width = 6.8 / rpi;

    parallel_for(re.count, [&](int ia) {
        double a = re.at(ia);
        double center = rN * a / rpi;
        auto [j0, j1] = axis_window(u.x, center - half_width, center + half_width);
        if (j0 > j1) return;
        int m = j1 - j0 + 1;
        std::vector<cd> mag(m), cur(m), rot(m);
        for (int j = 0; j < m; ++j) {
            double x = u.x.at(j0 + j);
            double arg = rpi * x - rN * a;
            mag[j] = u.val[j0 + j] * std::exp(-arg * arg);
            cur[j] = std::polar(1.0, 2.0 * s * x * im.lo);
            rot[j] = std::polar(1.0, 2.0 * s * x * im.step);
        }
        for (int ib = 0; ib < im.count; ++ib) {
            cd acc{0.0, 0.0};
            for (int j = 0; j < m; ++j) {
                acc += mag[j] * cur[j];
                cur[j] *= rot[j];
            }
            g.at(ia, ib) = c0 * std::polar(1.0, -double(N) * a * im.at(ib)) * acc;
        }
    });

    check_spacing(g, N);
    check_edges(g);
    return g;
}

SampledPhaseSpaceFunction fbi_forward_phi(const SampledFunction1D& u, int N, const Axis& re,
                                          const Axis& im) {
    SampledPhaseSpaceFunction g;
    g.re = re;
    g.im = im;
    g.val.assign(size_t(re.count) * im.count, cd{0.0, 0.0});

    const double rN = std::sqrt(double(N));
    const double c1 = std::pow(2.0, -0.5) * std::pow(N / kPi, 0.75) * u.x.step;
    // e^{-N d^2 / 2} below 3e-20 once d exceeds 9.5 / sqrt(N).
    const double half_width = 9.5 / rN;

    parallel_for(re.count, [&](int ia) {
        double a = re.at(ia);
        auto [j0, j1] = axis_window(u.x, a - half_width, a + half_width);
        if (j0 > j1) return;
        int m = j1 - j0 + 1;
        std::vector<cd> mag(m), cur(m), rot(m);
        for (int j = 0; j < m; ++j) {
            double x = u.x.at(j0 + j);
            double d = a - x;
            mag[j] = u.val[j0 + j] * std::exp(-0.5 * N * d * d);
            cur[j] = std::polar(1.0, double(N) * x * im.lo);
            rot[j] = std::polar(1.0, double(N) * x * im.step);
        }
        for (int ib = 0; ib < im.count; ++ib) {
            cd acc{0.0, 0.0};
            for (int j = 0; j < m; ++j) {
                acc += mag[j] * cur[j];
                cur[j] *= rot[j];
            }
            g.at(ia, ib) = c1 * std::polar(1.0, -double(N) * a * im.at(ib)) * acc;
        }
    });

    check_spacing(g, N);
    check_edges(g);
    return g;
}

SampledFunction1D fbi_adjoint_phi(const SampledPhaseSpaceFunction& v, int N, const Axis& x) {
    SampledFunction1D out;
    out.x = x;
    out.val.assign(x.count, cd{0.0, 0.0});

    const double rN = std::sqrt(double(N));
    const double c2 = std::pow(2.0, -0.5) * std::pow(N / kPi, 0.75) * v.re.step * v.im.step;
    const double half_width = 9.5 / rN;

    parallel_for(x.count, [&](int i) {
        double xv = x.at(i);
        auto [a0, a1] = axis_window(v.re, xv - half_width, xv + half_width);
        cd acc{0.0, 0.0};
        for (int ja = a0; ja <= a1; ++ja) {
            double d = v.re.at(ja) - xv;
            double wa = std::exp(-0.5 * N * d * d);
            cd rot = std::polar(1.0, double(N) * d * v.im.step);
            cd cur = std::polar(1.0, double(N) * d * v.im.lo);
            cd inner{0.0, 0.0};
            for (int jb = 0; jb < v.im.count; ++jb) {
                inner += v.at(ja, jb) * cur;
                cur *= rot;
            }
            acc += wa * inner;
        }
        out.val[i] = c2 * acc;
    });

    return out;
}

SampledPhaseSpaceFunction pi_phi_project(const SampledPhaseSpaceFunction& v, int N) {
    if (v.re.step != v.im.step)
        throw std::invalid_argument("pi_phi_project: axes must share one spacing");
    const double h = v.re.step;
    const int nx = v.re.count, ny = v.im.count;

    SampledPhaseSpaceFunction out;
    out.re = v.re;
    out.im = v.im;
    out.val.assign(v.val.size(), cd{0.0, 0.0});
    out.warnings = v.warnings;

    // e^{-N d^2 / 4} below 5e-19 once d exceeds 13 / sqrt(N).
    const int W = int(std::ceil(13.0 / (std::sqrt(double(N)) * h)));
    std::vector<double> g4(W + 1);
    for (int d = 0; d <= W; ++d) g4[d] = std::exp(-0.25 * N * (d * h) * (d * h));
    const double c = N / (2.0 * kPi) * h * h;

    parallel_for(ny, [&](int iy) {
        double b = v.im.at(iy);
        for (int ix = 0; ix < nx; ++ix) {
            int jx0 = std::max(0, ix - W), jx1 = std::min(nx - 1, ix + W);
            cd acc{0.0, 0.0};
            for (int jy = std::max(0, iy - W); jy <= std::min(ny - 1, iy + W); ++jy) {
                double wy = g4[std::abs(iy - jy)];
                double theta = 0.5 * N * h * (b + v.im.at(jy));
                cd rot = std::polar(1.0, theta);
                cd cur = std::polar(1.0, theta * (jx0 - ix));
                cd inner{0.0, 0.0};
                for (int jx = jx0; jx <= jx1; ++jx) {
                    inner += g4[std::abs(ix - jx)] * cur * v.at(jx, jy);
                    cur *= rot;
                }
                acc += wy * inner;
            }
            out.at(ix, iy) = c * acc;
        }
    });

    return out;
}

double lp_norm_line(const SampledFunction1D& u, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (const auto& v : u.val) m = std::max(m, std::abs(v));
        return m;
    }
    if (!(p > 0.0)) throw std::invalid_argument("lp_norm_line: p must be positive");
    double s = 0.0;
    for (const auto& v : u.val) s += std::pow(std::abs(v), p);
    return std::pow(u.x.step * s, 1.0 / p);
}

double lp_norm_phase_space(const SampledPhaseSpaceFunction& v, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (const auto& z : v.val) m = std::max(m, std::abs(z));
        return m;
    }
    if (!(p > 0.0)) throw std::invalid_argument("lp_norm_phase_space: p must be positive");
    double s = 0.0;
    for (const auto& z : v.val) s += std::pow(std::abs(z), p);
    return std::pow(v.re.step * v.im.step * s, 1.0 / p);
}

cd inner_product_phase_space(const SampledPhaseSpaceFunction& a,
                             const SampledPhaseSpaceFunction& b) {
    if (a.val.size() != b.val.size())
        throw std::invalid_argument("inner_product_phase_space: size mismatch");
    cd s{0.0, 0.0};
    for (size_t i = 0; i < a.val.size(); ++i) s += std::conj(a.val[i]) * b.val[i];
    return a.re.step * a.im.step * s;
}

double dbar_residual(const SampledPhaseSpaceFunction& g, int N, Weight w) {
    // Eighth-order central first-derivative stencil.
    static const double kC[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
    const int margin = 4;
    const int nx = g.re.count, ny = g.im.count;
    if (nx <= 2 * margin || ny <= 2 * margin)
        throw std::invalid_argument("dbar_residual: grid too small for the stencil");

    double num = 0.0, den = 0.0;
    for (const auto& z : g.val) den += std::norm(z);
    den = std::sqrt(g.re.step * g.im.step * den);

    for (int iy = margin; iy < ny - margin; ++iy) {
        double b = g.im.at(iy);
        for (int ix = margin; ix < nx - margin; ++ix) {
            cd da{0.0, 0.0}, db{0.0, 0.0};
            for (int m = 1; m <= 4; ++m) {
                da += kC[m - 1] * (g.at(ix + m, iy) - g.at(ix - m, iy));
                db += kC[m - 1] * (g.at(ix, iy + m) - g.at(ix, iy - m));
            }
            da /= g.re.step;
            db /= g.im.step;
            cd dbar = 0.5 * (da + cd{0.0, 1.0} * db);
            double a = g.re.at(ix);
            cd mu = (w == Weight::fock) ? 0.5 * double(N) * cd{a, b}
                                        : cd{0.0, 0.5 * double(N) * b};
            num += std::norm(dbar + mu * g.at(ix, iy));
        }
    }
    num = std::sqrt(g.re.step * g.im.step * num);
    return num / (std::sqrt(double(N)) * den);
}

ConjugationResult conjugation_residual(int k, int N) {
    if (k < 0 || N < 1) throw std::invalid_argument("conjugation_residual: bad arguments");
    const double rN = std::sqrt(double(N));
    const double R = std::sqrt((2.0 * k + 1.0) / N);
    const double h = 0.25 / rN;
    const double hx = 0.125 / rN;

    Axis xaxis = symmetric_axis(R + 9.0 / rN, hx);
    SampledFunction1D u =
        make_sampled(xaxis, [&](double x) { return cd{hermite_hbar_scale(k, N, x), 0.0}; });

    Axis zaxis = symmetric_axis(R + 8.0 / rN, h);
    SampledPhaseSpaceFunction g = fbi_forward_phi(u, N, zaxis, zaxis);

    SampledPhaseSpaceFunction v = g;
    for (int iy = 0; iy < zaxis.count; ++iy) {
        double b = zaxis.at(iy);
        for (int ix = 0; ix < zaxis.count; ++ix) {
            double a = zaxis.at(ix);
            v.at(ix, iy) *= a * a + b * b;
        }
    }

    SampledPhaseSpaceFunction pa = pi_phi_project(v, N);
    SampledPhaseSpaceFunction pb = pi_phi_project(g, N);

    const double lambda = (2.0 * k + 1.0) / N;
    double norm_g = lp_norm_phase_space(g, 2.0);
    double corr = 0.0, unco = 0.0;
    for (size_t i = 0; i < g.val.size(); ++i) {
        corr += std::norm(pa.val[i] - pb.val[i] / double(N) - lambda * g.val[i]);
        unco += std::norm(pa.val[i] - lambda * g.val[i]);
    }
    double cell = zaxis.step * zaxis.step;

    ConjugationResult res;
    res.corrected = std::sqrt(cell * corr) / norm_g;
    res.uncorrected = std::sqrt(cell * unco) / norm_g;
    res.grid_step = h;
    res.warnings = g.warnings;
    return res;
}

}  // namespace bt::fbi
