#include "bt/cpn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bt/special_fn.hpp"

namespace bt::cpn {

namespace {

constexpr double kLn2 = 0.69314718055994530942;
constexpr double kLnPi = 1.1447298858494001741;
constexpr double kLn2Pi = 1.8378770664093454836;

void require_index(const CPnParams& pr, const MultiIndex& a, const char* who) {
    if (pr.n < 1 || pr.N < 1) throw std::domain_error(std::string(who) + ": need n, N >= 1");
    if (int(a.size()) != pr.n) throw std::domain_error(std::string(who) + ": index size != n");
    for (int v : a) {
        if (v < 0) throw std::domain_error(std::string(who) + ": negative index entry");
    }
    if (order(a) > pr.N) throw std::domain_error(std::string(who) + ": |a| > N");
}

}  // namespace

double fubini_study_weight(int n, double abs_sq) {
    if (abs_sq < 0.0) throw std::domain_error("fubini_study_weight: |w|^2 < 0");
    return std::exp(n * kLn2 - (n + 1) * std::log1p(abs_sq));
}

LogReal lcalcul_integral(const MultiIndex& a, int b) {
    int n = int(a.size());
    int total = 0;
    for (int v : a) {
        if (v < 0) throw std::domain_error("lcalcul_integral: negative entry");
        total += v;
    }
    if (b < total) throw std::domain_error("lcalcul_integral: b < |a|");
    double lg = specfn::log_factorial(b - total) - n * kLn2 - specfn::log_factorial(b + n);
    for (int v : a) lg += specfn::log_factorial(v);
    return LogReal::from_log(lg);
}

double cpn_log_normalizer(const CPnParams& pr, const MultiIndex& a) {
    require_index(pr, a, "cpn_log_normalizer");
    double s = specfn::log_factorial(pr.N + pr.n) - pr.n * kLn2Pi -
               specfn::log_factorial(pr.N - order(a));
    for (int v : a) s -= specfn::log_factorial(v);
    return 0.5 * s;
}

LogReal cpn_eval_radial(const CPnParams& pr, const MultiIndex& a, const std::vector<double>& r) {
    require_index(pr, a, "cpn_eval_radial");
    if (r.size() != a.size()) throw std::domain_error("cpn_eval_radial: radii size != n");
    double rsq = 0.0;
    for (double v : r) rsq += v * v;
    double lg = cpn_log_normalizer(pr, a) - 0.5 * pr.N * std::log1p(rsq);
    for (int j = 0; j < pr.n; ++j) {
        if (a[j] == 0) continue;
        if (r[j] == 0.0) return LogReal{};
        lg += a[j] * std::log(r[j]);
    }
    return LogReal::from_log(lg);
}

LogReal cpn_matrix_element(const CPnParams& pr, int m, const MultiIndex& a,
                           const MultiIndex& b) {
    require_index(pr, a, "cpn_matrix_element");
    require_index(pr, b, "cpn_matrix_element");
    if (m < 0) throw std::domain_error("cpn_matrix_element: negative power");
    if (a != b) return LogReal{};
    double v = 1.0;
    for (int i = 1; i <= m; ++i) v *= double(a[0] + i) / double(pr.N + pr.n + i);
    return LogReal::from_value(v);
}

double cpn_model_eigenvalue(const CPnParams& pr, int a1) {
    return double(a1 + 1) / double(pr.N + pr.n + 1);
}

long long cpn_level_multiplicity(const CPnParams& pr, int a1) {
    if (a1 < 0 || a1 > pr.N) throw std::domain_error("cpn_level_multiplicity: a1 out of range");
    long long num = 1, den = 1;
    for (int j = 1; j <= pr.n - 1; ++j) {
        num *= pr.N - a1 + j;
        den *= j;
    }
    return num / den;
}

CPnSup cpn_sup_norm_closed(const CPnParams& pr, const MultiIndex& a) {
    require_index(pr, a, "cpn_sup_norm_closed");
    int total = order(a);
    if (total == pr.N) {
        auto it = std::find_if(a.begin(), a.end(), [](int v) { return v > 0; });
        if (it == a.end()) throw std::domain_error("cpn_sup_norm_closed: N = 0 degenerate");
        MultiIndex swapped = a;
        int axis = int(it - a.begin());
        swapped[axis] = pr.N - total;  // = 0, so |swapped| < N
        CPnSup out = cpn_sup_norm_closed(pr, swapped);
        out.chart_swapped = true;
        out.swap_axis = axis;
        return out;
    }
    double lg = cpn_log_normalizer(pr, a) +
                0.5 * (pr.N - total) * std::log(double(pr.N - total)) -
                0.5 * pr.N * std::log(double(pr.N));
    CPnSup out;
    out.argmax.resize(pr.n);
    for (int j = 0; j < pr.n; ++j) {
        if (a[j] > 0) lg += 0.5 * a[j] * std::log(double(a[j]));
        out.argmax[j] = std::sqrt(double(a[j]) / double(pr.N - total));
    }
    out.value = LogReal::from_log(lg);
    return out;
}

LogReal cpn_lp_norm_closed(const CPnParams& pr, int a1, LpExponent p) {
    MultiIndex a(pr.n, 0);
    a[0] = a1;
    require_index(pr, a, "cpn_lp_norm_closed");
    if (p.is_infinity()) return cpn_sup_norm_closed(pr, a).value;
    const double pv = p.value();
    // Grouped pairwise: at p = 2 every pair cancels bit-exactly, giving ln = 0.
    double lg = pr.n * kLn2Pi * (1.0 / pv - 0.5);
    lg += specfn::log_gamma(pv * a1 / 2.0 + 1.0) / pv - 0.5 * specfn::log_factorial(a1);
    lg += specfn::log_gamma(pv * (pr.N - a1) / 2.0 + 1.0) / pv -
          0.5 * specfn::log_factorial(pr.N - a1);
    lg += 0.5 * specfn::log_factorial(pr.N + pr.n) -
          specfn::log_gamma(pv * pr.N / 2.0 + pr.n + 1.0) / pv;
    return LogReal::from_log(lg);
}

CPnPrediction cpn_asymptotic_prediction(int n, LpExponent p, int N) {
    if (n < 1 || N < 1) throw std::domain_error("cpn_asymptotic_prediction: need n, N >= 1");
    CPnPrediction out;
    double ip = p.reciprocal();
    out.exponent = (n - 0.5) * (0.5 - ip);
    double base = (n + 0.5) * kLnPi + (n - 0.5) * kLn2;
    out.log_constant = -(0.5 - ip) * base;
    if (!p.is_infinity()) out.log_constant += (n - 0.5) * ip * std::log(2.0 / p.value());
    out.index.assign(n, 0);
    out.index[0] = N / 2;
    return out;
}

}  // namespace bt::cpn
