#include "bt/fock.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "bt/special_fn.hpp"

namespace bt::fock {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLnPi = 1.1447298858494001741;
constexpr double kLn2Pi = 1.8378770664093454836;

void require_index(const FockParams& pr, const MultiIndex& nu, const char* who) {
    if (int(nu.size()) != pr.n) throw std::domain_error(std::string(who) + ": index size != n");
    for (int v : nu) {
        if (v < 0) throw std::domain_error(std::string(who) + ": negative index entry");
    }
    if (pr.N < 1 || pr.n < 1) throw std::domain_error(std::string(who) + ": need n, N >= 1");
}

double norm_sq(const ComplexVec& z) {
    double s = 0.0;
    for (const auto& c : z) s += std::norm(c);
    return s;
}

}  // namespace

EvalResult fock_eval(const FockParams& pr, const MultiIndex& nu, const ComplexVec& z) {
    require_index(pr, nu, "fock_eval");
    if (int(z.size()) != pr.n) throw std::domain_error("fock_eval: point size != n");
    const double lnN = std::log(double(pr.N));
    double lg = 0.5 * (pr.n + order(nu)) * lnN - 0.5 * pr.N * norm_sq(z) - 0.5 * pr.n * kLnPi;
    double arg = 0.0;
    for (int j = 0; j < pr.n; ++j) {
        lg -= 0.5 * specfn::log_factorial(nu[j]);
        if (nu[j] == 0) continue;
        double r = std::abs(z[j]);
        if (r == 0.0) return {LogReal{}, {1.0, 0.0}};
        lg += nu[j] * std::log(r);
        arg += nu[j] * std::arg(z[j]);
    }
    return {LogReal::from_log(lg), std::polar(1.0, arg)};
}

std::complex<double> bergman_kernel(const FockParams& pr, const ComplexVec& w,
                                    const ComplexVec& z) {
    if (int(w.size()) != pr.n || int(z.size()) != pr.n) {
        throw std::domain_error("bergman_kernel: point size != n");
    }
    std::complex<double> dot = 0.0;
    for (int j = 0; j < pr.n; ++j) dot += w[j] * std::conj(z[j]);
    std::complex<double> expo = double(pr.N) * (dot - 0.5 * (norm_sq(w) + norm_sq(z)));
    return std::pow(pr.N / kPi, pr.n) * std::exp(expo);
}

LogReal shift_matrix_element(int N, const MultiIndex& alpha, const MultiIndex& nu) {
    if (alpha.size() != nu.size()) {
        throw std::domain_error("shift_matrix_element: size mismatch");
    }
    double lg = -0.5 * order(alpha) * std::log(double(N));
    for (size_t j = 0; j < nu.size(); ++j) {
        lg += 0.5 * (specfn::log_factorial(nu[j] + alpha[j]) - specfn::log_factorial(nu[j]));
    }
    return LogReal::from_log(lg);
}

LogReal monomial_matrix_element(int N, const MultiIndex& alpha, const MultiIndex& beta,
                                const MultiIndex& rho, const MultiIndex& nu) {
    size_t n = nu.size();
    if (alpha.size() != n || beta.size() != n || rho.size() != n) {
        throw std::domain_error("monomial_matrix_element: size mismatch");
    }
    for (size_t j = 0; j < n; ++j) {
        if (rho[j] + beta[j] != nu[j] + alpha[j]) return LogReal{};
    }
    return shift_matrix_element(N, alpha, nu) * shift_matrix_element(N, beta, rho);
}

LogReal radial_symbol_diagonal(int N, const MultiIndex& m, const MultiIndex& nu) {
    if (m.size() != nu.size()) {
        throw std::domain_error("radial_symbol_diagonal: size mismatch");
    }
    double lg = -order(m) * std::log(double(N));
    for (size_t j = 0; j < nu.size(); ++j) {
        lg += specfn::log_factorial(nu[j] + m[j]) - specfn::log_factorial(nu[j]);
    }
    return LogReal::from_log(lg);
}

double harmonic_eigenvalue(int n, int N, int k) { return double(k + n) / double(N); }

long long harmonic_multiplicity(int n, int k) {
    // binom(k + n - 1, n - 1), exact for the small n used here
    long long num = 1, den = 1;
    for (int j = 1; j <= n - 1; ++j) {
        num *= k + j;
        den *= j;
    }
    return num / den;
}

LogReal fock_lp_norm_closed(const FockParams& pr, const MultiIndex& nu, LpExponent p) {
    require_index(pr, nu, "fock_lp_norm_closed");
    const double lnN = std::log(double(pr.N));
    if (p.is_infinity()) {
        double lg = 0.5 * pr.n * (lnN - kLnPi);
        for (int v : nu) {
            lg -= 0.5 * specfn::log_factorial(v);
            if (v > 0) lg += 0.5 * v * (std::log(double(v)) - 1.0);
        }
        return LogReal::from_log(lg);
    }
    const double pv = p.value();
    double lg = (0.5 * order(nu) + pr.n / pv) * std::log(2.0 / pv);
    for (int v : nu) {
        lg += specfn::E_moment(pv * v, pr.N).log_abs() / pv -
              0.5 * specfn::E_moment(2.0 * v, pr.N).log_abs();
    }
    return LogReal::from_log(lg);
}

std::vector<double> fock_sup_argmax(const FockParams& pr, const MultiIndex& nu) {
    require_index(pr, nu, "fock_sup_argmax");
    std::vector<double> r(pr.n);
    for (int j = 0; j < pr.n; ++j) r[j] = std::sqrt(double(nu[j]) / pr.N);
    return r;
}

double envelope_eps(double p, int x) {
    return specfn::theta(0.5 * p * x + 1.0) / (6.0 * p * (p * x + 2.0)) -
           specfn::theta(x + 1.0) / (24.0 * (x + 1.0));
}

EnvelopeNorm fock_lp_norm_envelope(const FockParams& pr, const MultiIndex& nu, double p) {
    require_index(pr, nu, "fock_lp_norm_envelope");
    const double lnN = std::log(double(pr.N));
    EnvelopeNorm out;
    double lg = 0.0;
    for (int x : nu) {
        double eps = envelope_eps(p, x);
        out.eps.push_back(eps);
        lg += (1.0 / p - 0.5) * (1.5 * kLnPi - lnN - 1.0) + eps + std::log(2.0 / p) / p +
              0.5 * x * (std::log(x + 2.0 / p) - std::log(x + 1.0)) +
              std::log(p * x + 2.0) / (2.0 * p) - 0.25 * std::log(2.0 * x + 2.0);
    }
    out.value = LogReal::from_log(lg);
    return out;
}

ConvexityReport log_convexity_check(double p, int x_max) {
    auto ln_f = [p](int x) {
        return 0.5 * x * (std::log(x + 2.0 / p) - std::log(x + 1.0)) +
               std::log(p * x + 2.0) / (2.0 * p) - 0.25 * std::log(2.0 * x + 2.0);
    };
    auto ln_g = [](int x) {
        double head = x == 0 ? 0.0 : 0.5 * x * (std::log(double(x)) - std::log(x + 1.0));
        return head - 0.25 * std::log(2.0 * x + 2.0);
    };
    ConvexityReport rep;
    rep.min_finite = rep.min_inf = std::numeric_limits<double>::infinity();
    for (int x = 1; x + 1 <= x_max; ++x) {
        double df = ln_f(x + 1) - 2.0 * ln_f(x) + ln_f(x - 1);
        double dg = ln_g(x + 1) - 2.0 * ln_g(x) + ln_g(x - 1);
        rep.second_diff_finite.push_back(df);
        rep.second_diff_inf.push_back(dg);
        rep.min_finite = std::min(rep.min_finite, df);
        rep.min_inf = std::min(rep.min_inf, dg);
    }
    return rep;
}

RatioBound sharpness_ratio_bound(const FockParams& pr, const MultiIndex& nu, LpExponent p) {
    require_index(pr, nu, "sharpness_ratio_bound");
    MultiIndex spike(pr.n, 0);
    spike[0] = order(nu);
    LogReal ratio = fock_lp_norm_closed(pr, nu, p) / fock_lp_norm_closed(pr, spike, p);
    double bound_log = 1.0 / 24.0 + pr.n * (1.0 / 12.0 + 0.5 - 0.25 * kLn2Pi);
    return {ratio, bound_log, ratio.log_abs() <= bound_log};
}

AsymptoticPrediction fock_asymptotic_prediction(int n, double lambda, int alpha, LpExponent p,
                                                int N) {
    if (alpha < 1 || alpha > n) {
        throw std::domain_error("fock_asymptotic_prediction: need 1 <= alpha <= n");
    }
    int k = alpha * int(std::lround(lambda * N / alpha));
    MultiIndex idx(n, 0);
    for (int j = 0; j < alpha; ++j) idx[j] = k / alpha;
    return {(n - 0.5 * alpha) * (0.5 - p.reciprocal()), idx};
}

}  // namespace bt::fock
