#pragma once

#include "laplace/expr.hpp"

namespace laplace {

struct Options {
    double locate_tol = 1e-12;
    double degeneracy_tol = 1e-9;
    double rel_tol = 1e-10;            // quadrature relative target
    double abs_tol = 1e-300;           // quadrature absolute floor
    long long max_evaluations = 1000000;
    int max_order = 8;                 // degeneracy classification depth
    int grid = 1024;                   // coarse scan resolution
};

// One integrand family: integral over (a, b) of phi(x) * exp(n h(x)) dx.
struct ProblemSpec {
    double a;
    double b;
    Expr phi;
    Expr h;
    Options options;
};

}  // namespace laplace
