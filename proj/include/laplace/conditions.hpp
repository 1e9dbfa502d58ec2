#pragma once

#include <optional>
#include <string>
#include <vector>

#include "laplace/critical.hpp"
#include "laplace/problem.hpp"

namespace laplace {

enum class Flank { Left, Right };

struct FlankResult {
    bool pass = false;
    std::optional<double> worst_witness;  // sample point with the largest
                                          // excess over the near-window floor
    std::string detail;
};

// Sampled check that h, away from the maximum, stays below its values just
// outside the window: for a geometric ladder of radii rho, the supremum of
// h over the far side of xi0 -+ rho must not exceed the infimum over
// [xi0 - rho, xi0] (left) resp. [xi0, xi0 + rho] (right).
FlankResult check_flank_dominance(const Expr& h, double xi0, double a, double b,
                                  Flank side, int samples = 257);

// Both flanks combined; fails if either side fails.
FlankResult check_flank_dominance(const Expr& h, double xi0, double a, double b,
                                  int samples = 257);

struct IntegrabilityResult {
    bool pass = false;         // every probed n, including n = 0, integrable
    bool positive_ok = false;  // every probed n >= 1 integrable
    std::string detail;
};

// Probe absolute integrability of phi * exp(n h) at each n in n_probe (which
// must contain 0; the n = 0 entry tests integrability of phi alone).
IntegrabilityResult check_integrability(const ProblemSpec& ps,
                                        const CriticalPoint& cp,
                                        const std::vector<long long>& n_probe);

struct AmplitudeResult {
    bool pass = false;
    double value = 0.0;  // phi(xi0)
    std::string detail;
};

// phi must be nonzero at xi0 and settle toward phi(xi0) along the shrinking
// offsets delta in {1e-3, 1e-5, 1e-7}.
AmplitudeResult check_amplitude(const Expr& phi, double xi0);

struct ConditionEntry {
    bool pass = false;
    std::string detail;
    std::optional<double> worst_witness;
};

struct ConditionReport {
    ConditionEntry integrability;     // fails when even n = 0 diverges
    bool integrability_positive = false;  // softer reading: n >= 1 only
    ConditionEntry left_flank;
    ConditionEntry right_flank;
    ConditionEntry amplitude;
    bool all_pass = false;            // every entry above, literal reading
};

ConditionReport check_conditions(const ProblemSpec& ps, const CriticalPoint& cp,
                                 const std::vector<long long>& n_probe = {0, 1, 2});

}  // namespace laplace
