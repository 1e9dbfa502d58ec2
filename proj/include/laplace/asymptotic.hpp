#pragma once

#include "laplace/critical.hpp"
#include "laplace/log_scaled.hpp"

namespace laplace {

// log Gamma(x) for x > 0. Lanczos approximation, accurate to about 1e-13
// relative over the range used here. Throws NonPositiveArgument otherwise.
double log_gamma(double x);

// Integral of exp(-z^(2m)) over the whole real line: Gamma(1/(2m)) / m.
double gauss_power_integral(int m);

struct Estimate {
    long long n = 0;
    LogScaledValue value;  // closed-form leading-order approximation A_n
    int m = 1;
    double xi0 = 0.0;
};

// Log-scaled value of the quadratic-maximum closed form
//   phi0 * exp(n h0) * sqrt(2 pi / (n (-h2))).
// Requires h2 < 0, n >= 1 and phi0 != 0.
LogScaledValue quadratic_estimate(double phi0, double h0, double h2, long long n);

// Leading-order approximation A_n for a maximum whose leading derivative
// order is 2m:
//   phi(xi0) * exp(n h0) * (Gamma(1/(2m)) / m)
//     * ((2m)! / (n (-h^(2m)(xi0))))^(1/(2m)).
// For m == 1 this reduces to quadratic_estimate (verified internally on
// every call). Throws ZeroAmplitude when phi vanishes at xi0.
Estimate laplace_estimate(const Expr& phi, const CriticalPoint& cp, long long n);

}  // namespace laplace
