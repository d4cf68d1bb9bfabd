#include "bt/special_fn.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace bt::specfn {

namespace {

constexpr double kLnPi = 1.1447298858494001741;   // ln(pi)
constexpr double kLn2Pi = 1.8378770664093454836;  // ln(2*pi)

// Cumulative ln-factorial table. Shared by log_factorial and the integer
// branch of log_gamma, so expressions pairing Gamma(k+1) against k! cancel
// bit-exactly in downstream norm formulas.
const std::vector<double>& factorial_table() {
    static const std::vector<double> table = [] {
        std::vector<double> t(20001);
        t[0] = 0.0;
        for (size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] + std::log(double(i));
        return t;
    }();
    return table;
}

// Bernoulli coefficients B_{2k}/(2k(2k-1)) of the Stirling series. Eight terms
// keep the truncation below 1e-17 relative once the argument is >= 10.
constexpr double kStirling[] = {
    1.0 / 12.0,           -1.0 / 360.0,         1.0 / 1260.0,      -1.0 / 1680.0,
    1.0 / 1188.0,         -691.0 / 360360.0,    1.0 / 156.0,       -3617.0 / 122400.0,
};

double stirling_tail(double y) {
    // Sum of c_k / y^{2k-1}. y >= 10.
    double y2 = y * y;
    double p = 1.0 / y;
    double s = 0.0;
    for (double c : kStirling) {
        s += c * p;
        p /= y2;
    }
    return s;
}

}  // namespace

double log_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma: requires x > 0");
    if (x == std::floor(x) && x <= double(factorial_table().size())) {
        return log_factorial(int(x) - 1);
    }
    double shift = 0.0;
    double y = x;
    while (y < 10.0) {
        shift += std::log(y);
        y += 1.0;
    }
    return 0.5 * kLn2Pi + (y - 0.5) * std::log(y) - y + stirling_tail(y) - shift;
}

double stirling_remainder(double x) {
    if (!(x > 0.0)) throw std::domain_error("stirling_remainder: requires x > 0");
    if (x >= 10.0) return stirling_tail(x);
    // Below the series threshold both terms are O(1), so the subtraction is benign.
    double lower = 0.5 * (kLn2Pi - std::log(x)) + x * (std::log(x) - 1.0);
    return log_gamma(x) - lower;
}

double theta(double x) {
    if (x < 1.0) throw std::domain_error("theta: requires x >= 1");
    return 12.0 * x * stirling_remainder(x);
}

ArtinEnvelope artin_envelope(double x) {
    if (x < 1.0) throw std::domain_error("artin_envelope: requires x >= 1");
    double lower_log = 0.5 * (kLn2Pi - std::log(x)) + x * (std::log(x) - 1.0);
    ArtinEnvelope env;
    env.x = x;
    env.lower = LogReal::from_log(lower_log);
    env.upper = LogReal::from_log(lower_log + 1.0 / (12.0 * x));
    env.theta = theta(x);
    return env;
}

LogReal log_beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("log_beta: requires a, b > 0");
    return LogReal::from_log(log_gamma(a) + log_gamma(b) - log_gamma(a + b));
}

LogReal E_moment(double a, int N) {
    if (a < 0.0) throw std::domain_error("E_moment: requires a >= 0");
    if (N < 1) throw std::domain_error("E_moment: requires N >= 1");
    double h = 0.5 * a + 1.0;
    return LogReal::from_log(kLnPi + log_gamma(h) - h * std::log(double(N)));
}

LogReal log_multinomial(int b, const MultiIndex& a) {
    if (b < 0) throw std::domain_error("log_multinomial: requires b >= 0");
    int total = 0;
    for (int v : a) {
        if (v < 0) throw std::domain_error("log_multinomial: negative entry");
        total += v;
    }
    if (total > b) throw std::domain_error("log_multinomial: |a| > b");
    double lg = log_gamma(b + 1.0) - log_gamma(b - total + 1.0);
    for (int v : a) lg -= log_gamma(v + 1.0);
    return LogReal::from_log(lg);
}

double log_factorial(int k) {
    if (k < 0) throw std::domain_error("log_factorial: negative argument");
    const auto& t = factorial_table();
    if (k < int(t.size())) return t[k];
    double s = t.back();
    for (int i = int(t.size()); i <= k; ++i) s += std::log(double(i));
    return s;
}

}  // namespace bt::specfn
