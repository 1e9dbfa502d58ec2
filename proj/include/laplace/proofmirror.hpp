#pragma once

#include "laplace/critical.hpp"
#include "laplace/problem.hpp"

namespace laplace {

// Diagnostics from instantiating each step of the leading-order error
// analysis at one finite n. All integral quantities are reported on the
// n^(1/(2m))-rescaled axis, so they stay order-one as n grows.
struct WindowDiagnostics {
    long long n = 0;
    int m = 1;
    double epsilon = 0.0;           // window half-width n^(-1/(6 m^2))
    double left_tail = 0.0;         // scaled contribution below the window
    double center = 0.0;            // scaled contribution of the window
    double right_tail = 0.0;        // scaled contribution above the window
    double surrogate_center = 0.0;  // window contribution with h replaced by
                                    // its leading Taylor term
    double r = 0.0;                 // window radius after rescaling
    double sup_gap = 0.0;           // sup over the window of
                                    // |exp(n p) - exp(n q)|
    double tail_bound = 0.0;        // analytic ceiling for the scaled tails
    double deficit = 0.0;           // mass of exp(-z^(2m)) beyond radius r

    struct Flags {
        bool derivative_bracket = false;  // h^(2m)/h^(2m)(xi0) in [1/2, 3/2]
                                          // across the window
        bool tail_bound_holds = false;    // scaled tail sup obeys the ceiling
        bool tails_negligible = false;    // measured tails below the ceiling
        bool split_additive = false;      // parts re-sum to the whole integral
        bool surrogate_pointwise = false; // |p - q| within the Taylor bound
        bool final_estimate = false;      // whole integral within the
                                          // assembled error budget of A_n
    } flags;
};

// Window half-width epsilon = n^(-1/(6 m^2)).
double window_epsilon(long long n, int m);

struct SplitParts {
    double left_tail = 0.0;
    double center = 0.0;
    double right_tail = 0.0;
};

// Scaled integral split at xi0 +- epsilon. Throws WindowExceedsInterval
// (reporting the smallest admissible n) when the window does not fit
// strictly inside (a, b).
SplitParts split_integral(const ProblemSpec& ps, const CriticalPoint& cp,
                          long long n);

struct BracketCheck {
    bool pass = false;
    double worst_ratio = 1.0;  // sampled h^(2m)/h^(2m)(xi0) farthest from 1
};

// Check h^(2m)(x)/h^(2m)(xi0) in [1/2, 3/2] on [xi0 - eps, xi0 + eps].
BracketCheck check_derivative_bracket(const Expr& h, const CriticalPoint& cp,
                                      double eps);

struct TailBoundCheck {
    bool pass = false;
    double lhs = 0.0;  // n^(1/(2m)) * sup over the tails of exp(n (h - h0))
    double rhs = 0.0;  // C * n^(5/(6m) - 1), C from the window curvature
};

// Compare the scaled tail supremum against its analytic ceiling.
TailBoundCheck check_tail_bound(const ProblemSpec& ps, const CriticalPoint& cp,
                                long long n);

// The constant C in the tail ceiling: 2 (2m)! / ((-h^(2m)(xi0)) e).
double tail_constant(const CriticalPoint& cp);

struct SurrogateGap {
    double sup_gap = 0.0;        // sup |exp(n p) - exp(n q)| over the window
    double gap_over_n = 0.0;     // sup |p - q| / n, candidate ceiling (a)
    double gap_times_n = 0.0;    // n * sup |p - q|, candidate ceiling (b)
    double pq_max = 0.0;         // sup |p - q| over the window
    double pq_bound = 0.0;       // Taylor remainder ceiling for |p - q|
    bool pointwise_ok = false;   // pq_max <= pq_bound
};

// Gap between the exact exponent p = h - h0 and its leading Taylor
// surrogate q over the window. Both candidate sup ceilings are reported;
// see README for why they are tracked side by side.
SurrogateGap surrogate_gap(const ProblemSpec& ps, const CriticalPoint& cp,
                           long long n);

// 2 * integral of exp(-z^(2m)) over z > R: the mass the rescaled window
// fails to capture. Requires R >= 0 and m >= 1.
double truncated_tail_deficit(double R, int m);

// Per-step shrink test for a sequence of diagnostics sampled at n, 100 n,
// 10000 n, ...: values[i+1] <= slack * values[i] * 100^(-rate) for every
// step, with exact zeros treated as "already vanished".
bool ladder_shrinks(const std::vector<double>& values, double rate,
                    double slack = 4.0);

// Run every check at one n and assemble the final-estimate verdict from the
// measured pieces.
WindowDiagnostics proof_trace(const ProblemSpec& ps, const CriticalPoint& cp,
                              long long n);

}  // namespace laplace
