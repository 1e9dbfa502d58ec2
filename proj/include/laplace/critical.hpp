#pragma once

#include "laplace/expr.hpp"

namespace laplace {

// Interior maximum of h, classified by its leading nonvanishing derivative.
struct CriticalPoint {
    double xi0 = 0.0;  // location of the maximum
    int m = 1;         // leading derivative order is 2m
    double d2m = 0.0;  // h^(2m)(xi0), negative at a maximum
    double h0 = 0.0;   // h(xi0)
};

struct LocateOptions {
    int grid = 1024;
    double tol = 1e-12;
};

// Locate the unique interior maximum of h on (a, b); either endpoint may be
// infinite. Coarse grid scan (through a compactifying substitution when the
// interval is unbounded) followed by bisection-safeguarded Newton iteration
// on h'. Throws BoundaryMaximum when the best value sits at the edge of the
// interval, NoCriticalPoint when no sign change of h' brackets a maximum,
// and AmbiguousMaximum when a second site matches the maximum within grid
// resolution.
double locate_maximum(const Expr& h, double a, double b,
                      const LocateOptions& opts = {});

// Classify the maximum at xi0 by the first derivative order whose magnitude
// exceeds tol relative to the largest derivative seen. Throws
// OddLeadingDerivative, PositiveLeadingDerivative or AllDerivativesVanish
// when the leading behavior is not that of a smooth interior maximum.
// max_order must be even and at least 2.
CriticalPoint classify_degeneracy(const Expr& h, double xi0, int max_order = 8,
                                  double tol = 1e-9);

}  // namespace laplace
