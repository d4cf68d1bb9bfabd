#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace bt {

// Signed log-domain real: sign in {-1,0,+1} plus log-magnitude. All norm
// assembly stays in this representation; conversion to double happens only at
// reporting, and overflow there is reported, never silently saturated.
class LogReal {
public:
    constexpr LogReal() : sign_(0), lg_(-std::numeric_limits<double>::infinity()) {}

    static LogReal from_log(double lg, int sign = +1) {
        LogReal r;
        if (sign == 0 || lg == -std::numeric_limits<double>::infinity()) return r;
        r.sign_ = sign > 0 ? +1 : -1;
        r.lg_ = lg;
        return r;
    }

    static LogReal from_value(double v) {
        if (std::isnan(v)) throw std::domain_error("LogReal: NaN input");
        LogReal r;
        if (v == 0.0) return r;
        r.sign_ = v > 0 ? +1 : -1;
        r.lg_ = std::log(std::fabs(v));
        return r;
    }

    int sign() const { return sign_; }
    bool is_zero() const { return sign_ == 0; }

    // Log of |x|; -inf for zero.
    double log_abs() const { return lg_; }

    // Checked conversion. The representable range of double is ~exp(+-709).
    double value() const {
        if (sign_ == 0) return 0.0;
        if (lg_ > 709.0)
            throw std::overflow_error("LogReal::value: magnitude exp(" + std::to_string(lg_) +
                                      ") exceeds double range");
        return sign_ * std::exp(lg_);
    }

    // Unchecked: underflows to 0, overflows to +-inf. For diagnostics only.
    double value_unchecked() const { return sign_ == 0 ? 0.0 : sign_ * std::exp(lg_); }

    friend LogReal operator*(const LogReal& a, const LogReal& b) {
        if (a.sign_ == 0 || b.sign_ == 0) return LogReal();
        return from_log(a.lg_ + b.lg_, a.sign_ * b.sign_);
    }

    friend LogReal operator/(const LogReal& a, const LogReal& b) {
        if (b.sign_ == 0) throw std::domain_error("LogReal: division by zero");
        if (a.sign_ == 0) return LogReal();
        return from_log(a.lg_ - b.lg_, a.sign_ * b.sign_);
    }

    // Signed addition via log-sum-exp on the dominant magnitude.
    friend LogReal operator+(const LogReal& a, const LogReal& b) {
        if (a.sign_ == 0) return b;
        if (b.sign_ == 0) return a;
        const LogReal& big = (a.lg_ >= b.lg_) ? a : b;
        const LogReal& small = (a.lg_ >= b.lg_) ? b : a;
        double d = small.lg_ - big.lg_;  // <= 0
        double t = small.sign_ * big.sign_ > 0 ? std::log1p(std::exp(d))
                                               : std::log1p(-std::exp(d));
        if (!std::isfinite(t)) return LogReal();  // exact cancellation
        return from_log(big.lg_ + t, big.sign_);
    }

    friend LogReal operator-(const LogReal& a, const LogReal& b) {
        return a + from_log(b.lg_, -b.sign_);
    }

    LogReal pow(double e) const {
        if (sign_ == 0) {
            if (e <= 0) throw std::domain_error("LogReal::pow: 0 to nonpositive power");
            return LogReal();
        }
        if (sign_ < 0) throw std::domain_error("LogReal::pow: negative base");
        return from_log(lg_ * e, +1);
    }

private:
    int sign_;
    double lg_;
};

}  // namespace bt
