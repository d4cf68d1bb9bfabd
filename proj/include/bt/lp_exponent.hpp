#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

namespace bt {

// L^p exponent with p = infinity as a first-class value.  Stored as a double
// so arithmetic like 1/p works uniformly (1/inf == 0).
class LpExponent {
  public:
    LpExponent() : p_(2.0) {}

    static LpExponent finite(double p) {
        if (!(p > 0.0) || std::isinf(p)) {
            throw std::domain_error("LpExponent::finite: p must be positive and finite");
        }
        return LpExponent(p);
    }

    static LpExponent infinity() { return LpExponent(std::numeric_limits<double>::infinity()); }

    // Accepts "inf" (any case) or a positive number.
    static LpExponent parse(const std::string& s) {
        if (s == "inf" || s == "Inf" || s == "INF" || s == "infinity") return infinity();
        return finite(std::stod(s));
    }

    bool is_infinity() const { return std::isinf(p_); }

    // Finite value; throws when p = infinity.
    double value() const {
        if (is_infinity()) throw std::domain_error("LpExponent::value: p is infinite");
        return p_;
    }

    // 1/p, with 1/inf = 0.
    double reciprocal() const { return is_infinity() ? 0.0 : 1.0 / p_; }

    std::string str() const {
        if (is_infinity()) return "inf";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", p_);
        return buf;
    }

    friend bool operator==(const LpExponent& a, const LpExponent& b) { return a.p_ == b.p_; }

  private:
    explicit LpExponent(double p) : p_(p) {}
    double p_;
};

}  // namespace bt
