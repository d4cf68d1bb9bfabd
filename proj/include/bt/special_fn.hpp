#pragma once

#include "bt/log_real.hpp"
#include "bt/multi_index.hpp"

namespace bt::specfn {

// ln Gamma(x), x > 0. Shifted Stirling-de Moivre series: the argument is
// raised above 10 by the recurrence, where the Bernoulli tail is below 1e-16.
double log_gamma(double x);

// Stirling remainder delta(x) = lnGamma(x) - [ln sqrt(2*pi/x) + x(ln x - 1)],
// computed without cancellation for large x. theta(x) = 12x*delta(x).
double stirling_remainder(double x);

struct ArtinEnvelope {
    double x;
    LogReal lower;  // sqrt(2*pi/x) (x/e)^x
    LogReal upper;  // lower * exp(1/(12x))
    double theta;   // 12x*(lnGamma(x) - ln lower), in [0,1]
};

ArtinEnvelope artin_envelope(double x);

// theta(x) alone; x >= 1.
double theta(double x);

LogReal log_beta(double a, double b);

// E(a) = integral over C of e^{-N|z|^2} |z^a| dz = pi*Gamma(a/2+1)/N^(a/2+1).
LogReal E_moment(double a, int N);

// Multinomial b!/(a_1!...a_n!(b-|a|)!) in log domain.
LogReal log_multinomial(int b, const MultiIndex& a);

// ln(k!) by direct summation; exact-ish and independent of the Gamma series.
double log_factorial(int k);

}  // namespace bt::specfn
