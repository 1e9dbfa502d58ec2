#pragma once

#include <functional>
#include <vector>

#include "laplace/critical.hpp"
#include "laplace/log_scaled.hpp"
#include "laplace/problem.hpp"

namespace laplace {

struct QuadOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-300;
    long long max_evaluations = 1000000;
    std::vector<double> breakpoints;  // interior points forced to be panel edges
};

struct QuadResult {
    double value = 0.0;
    double err_est = 0.0;
    long long evaluations = 0;
    bool converged = false;
    long long nan_hits = 0;  // samples where f returned NaN (counted as 0)
};

// Adaptive 15-point Gauss-Kronrod integration over (a, b). Either endpoint
// may be infinite; unbounded directions are folded into a finite parameter
// range by a double-exponential substitution. Panels are refined worst-first
// until the error estimate meets max(abs_tol, rel_tol * |value|) or the
// evaluation budget runs out. Throws DivergentIntegral when a panel value is
// non-finite or accumulated mass exceeds any plausible finite integral.
QuadResult adaptive_quad(const std::function<double(double)>& f, double a,
                         double b, const QuadOptions& opts = {});

// Panel-edge seeds (the peak plus a spread of multiples of its natural
// width) for integrands concentrating at xi0 like exp(n h). Callers pass
// these as QuadOptions::breakpoints so the adaptive scheme cannot miss a
// peak far narrower than the integration range.
std::vector<double> peak_breakpoints(const CriticalPoint& cp, long long n);

// Log-scaled oracle for I_n = integral of phi * exp(n h): integrates
// phi * exp(n (h - h0)) with panel edges seeded at the peak, then reattaches
// the factor exp(n h0) in log space. Throws NonConvergence when the
// tolerance cannot be met within the evaluation budget.
LogScaledValue integrate_scaled(const ProblemSpec& ps, const CriticalPoint& cp,
                                long long n);

struct RatioRow {
    long long n = 0;
    double log_integral = 0.0;  // log |I_n| from the quadrature oracle
    double log_estimate = 0.0;  // log |A_n| from the closed form
    double ratio = 0.0;         // I_n / A_n
};

// Oracle-vs-estimate comparison for an ascending list of n values.
std::vector<RatioRow> ratio_table(const ProblemSpec& ps, const CriticalPoint& cp,
                                  const std::vector<long long>& n_list);

}  // namespace laplace
