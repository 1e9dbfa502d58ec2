#include "laplace/asymptotic.hpp"

#include <cmath>

namespace laplace {

namespace {

// Lanczos approximation, g = 7 with 9 coefficients.
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};
constexpr double kLogSqrtTwoPi = 0.91893853320467274178;

double factorial_log(int k) { return log_gamma(k + 1.0); }

}  // namespace

double log_gamma(double x) {
    if (!(x > 0.0)) throw NonPositiveArgument(x);
    if (x < 0.5) {
        // Reflection keeps the series well conditioned for small arguments.
        return std::log(M_PI / std::sin(M_PI * x)) - log_gamma(1.0 - x);
    }
    double z = x - 1.0;
    double acc = kLanczos[0];
    for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (z + i);
    double t = z + kLanczosG + 0.5;
    return kLogSqrtTwoPi + (z + 0.5) * std::log(t) - t + std::log(acc);
}

double gauss_power_integral(int m) {
    if (m < 1) throw Error("m must be at least 1");
    return std::exp(log_gamma(1.0 / (2.0 * m))) / m;
}

LogScaledValue quadratic_estimate(double phi0, double h0, double h2, long long n) {
    if (n < 1) throw Error("n must be at least 1");
    if (!(h2 < 0.0)) throw Error("second derivative must be negative at a maximum");
    if (phi0 == 0.0) throw Error("amplitude must be nonzero");
    double log_mag = std::log(std::abs(phi0)) + static_cast<double>(n) * h0 +
                     0.5 * (std::log(2.0 * M_PI) - std::log(static_cast<double>(n)) -
                            std::log(-h2));
    return {phi0 > 0.0 ? 1 : -1, log_mag};
}

Estimate laplace_estimate(const Expr& phi, const CriticalPoint& cp, long long n) {
    if (n < 1) throw Error("n must be at least 1");
    if (cp.m < 1) throw Error("degeneracy index m must be at least 1");
    if (!(cp.d2m < 0.0)) throw Error("leading derivative must be negative at a maximum");

    double phi0 = phi.eval(cp.xi0);
    if (phi0 == 0.0) throw ZeroAmplitude(cp.xi0);

    int two_m = 2 * cp.m;
    double log_mag =
        std::log(std::abs(phi0)) + static_cast<double>(n) * cp.h0 +
        log_gamma(1.0 / two_m) - std::log(static_cast<double>(cp.m)) +
        (factorial_log(two_m) - std::log(static_cast<double>(n)) -
         std::log(-cp.d2m)) / two_m;

    if (cp.m == 1) {
        // The general form must collapse to the quadratic one; this holds
        // exactly because Gamma(1/2) = sqrt(pi), and is checked rather than
        // assumed.
        LogScaledValue q = quadratic_estimate(phi0, cp.h0, cp.d2m, n);
        double tol = 1e-12 * std::max(1.0, std::abs(log_mag));
        if (!(std::abs(q.log_mag - log_mag) <= tol)) {
            throw Error("general and quadratic closed forms disagree");
        }
    }

    Estimate est;
    est.n = n;
    est.value = {phi0 > 0.0 ? 1 : -1, log_mag};
    est.m = cp.m;
    est.xi0 = cp.xi0;
    return est;
}

}  // namespace laplace
