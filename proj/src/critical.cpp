#include "laplace/critical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace laplace {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Sample {
    double x = 0.0;
    double hx = -kInf;
    bool valid = false;
};

Sample probe(const Expr& h, double x) {
    Sample s;
    s.x = x;
    try {
        double v = h.eval(x);
        if (std::isfinite(v)) {
            s.hx = v;
            s.valid = true;
        }
    } catch (const DomainError&) {
    }
    return s;
}

// Coarse scan of (a, b). Unbounded directions are folded into s in (0, 1)
// via s -> s / (1 - s); sample x values are strictly increasing.
std::vector<Sample> scan(const Expr& h, double a, double b, int grid) {
    std::vector<Sample> out;
    out.reserve(static_cast<std::size_t>(grid) + 1);
    bool inf_a = std::isinf(a);
    bool inf_b = std::isinf(b);
    if (!inf_a && !inf_b) {
        for (int i = 0; i <= grid; ++i) {
            double t = static_cast<double>(i) / grid;
            out.push_back(probe(h, a + (b - a) * t));
        }
    } else if (!inf_a) {
        for (int i = 0; i <= grid; ++i) {
            double s = static_cast<double>(i) / (grid + 1);
            out.push_back(probe(h, a + s / (1.0 - s)));
        }
    } else if (!inf_b) {
        for (int i = grid; i >= 0; --i) {
            double s = static_cast<double>(i) / (grid + 1);
            out.push_back(probe(h, b - s / (1.0 - s)));
        }
    } else {
        for (int i = 0; i <= grid; ++i) {
            double s = static_cast<double>(i + 1) / (grid + 2);
            out.push_back(probe(h, s / (1.0 - s) - (1.0 - s) / s));
        }
    }
    return out;
}

struct Deriv {
    double d1 = 0.0;
    double d2 = 0.0;
    bool valid = false;
};

Deriv derivs(const Expr& h, double x) {
    Deriv d;
    try {
        Jet j = h.jet_eval(x, 2);
        d.d1 = j.derivative(1);
        d.d2 = j.derivative(2);
        d.valid = std::isfinite(d.d1) && std::isfinite(d.d2);
    } catch (const DomainError&) {
    }
    return d;
}

// Bisection-safeguarded Newton iteration for a zero of h' inside
// (lo, hi), where h'(lo) >= 0 >= h'(hi). Runs until the bracket collapses
// to machine resolution so that degenerate (flat) maxima are pinned down
// accurately, not just to the requested tolerance.
std::optional<double> polish(const Expr& h, double lo, double hi) {
    double x = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        Deriv d = derivs(h, x);
        if (!d.valid) return std::nullopt;
        if (d.d1 == 0.0) return x;
        if (d.d1 > 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        double width = hi - lo;
        if (width <= 4.0 * std::numeric_limits<double>::epsilon() *
                         std::max(1.0, std::abs(x))) {
            return x;
        }
        double next = 0.5 * (lo + hi);
        if (d.d2 < 0.0) {
            double newton = x - d.d1 / d.d2;
            if (newton > lo && newton < hi) next = newton;
        }
        x = next;
    }
    return x;
}

}  // namespace

double locate_maximum(const Expr& h, double a, double b, const LocateOptions& opts) {
    if (!(a < b)) throw Error("interval endpoints must satisfy a < b");
    if (opts.grid < 16) throw Error("grid must be at least 16");

    std::vector<Sample> samples = scan(h, a, b, opts.grid);

    int first = -1, last = -1, best = -1;
    for (int i = 0; i < static_cast<int>(samples.size()); ++i) {
        if (!samples[i].valid) continue;
        if (first < 0) first = i;
        last = i;
        if (best < 0 || samples[i].hx > samples[best].hx) best = i;
    }
    if (best < 0) {
        throw NoCriticalPoint("h could not be evaluated anywhere on the interval");
    }
    if (best == first || best == last) {
        throw BoundaryMaximum(samples[best].x);
    }

    // Bracket a sign change of h' among the best sample and its neighbors.
    double xl = samples[best - 1].x;
    double xm = samples[best].x;
    double xr = samples[best + 1].x;
    Deriv gl = derivs(h, xl);
    Deriv gm = derivs(h, xm);
    Deriv gr = derivs(h, xr);
    if (!gm.valid) throw NoCriticalPoint("h' unavailable at the best sample");

    double lo, hi;
    if (gm.d1 == 0.0) {
        lo = hi = xm;
    } else if (gm.d1 > 0.0) {
        if (!gr.valid || gr.d1 > 0.0) {
            throw NoCriticalPoint("no sign change of h' brackets the best sample");
        }
        lo = xm;
        hi = xr;
    } else {
        if (!gl.valid || gl.d1 < 0.0) {
            throw NoCriticalPoint("no sign change of h' brackets the best sample");
        }
        lo = xl;
        hi = xm;
    }

    double xi0 = xm;
    if (lo < hi) {
        std::optional<double> refined = polish(h, lo, hi);
        if (!refined) throw NoCriticalPoint("h' unavailable while refining the maximum");
        xi0 = *refined;
    }

    if (!(xi0 > a && xi0 < b)) throw BoundaryMaximum(xi0);

    Deriv at = derivs(h, xi0);
    if (at.valid &&
        std::abs(at.d1) > opts.tol * std::max(1.0, std::abs(at.d2 * xi0))) {
        throw NoCriticalPoint("h' does not vanish to tolerance at the refined point");
    }

    double h0;
    try {
        h0 = h.eval(xi0);
    } catch (const DomainError&) {
        throw NoCriticalPoint("h unavailable at the refined point");
    }

    // Scan for competing sites: any other discrete local maximum, polished,
    // must stay strictly below h0 (up to numerical resolution).
    double tie_tol = 1e-9 * std::max(1.0, std::abs(h0));
    int n = static_cast<int>(samples.size());
    for (int j = 1; j + 1 < n; ++j) {
        const Sample& s = samples[j];
        if (!s.valid || !samples[j - 1].valid || !samples[j + 1].valid) continue;
        if (s.hx < samples[j - 1].hx || s.hx < samples[j + 1].hx) continue;
        double spacing = 0.5 * (samples[j + 1].x - samples[j - 1].x);
        if (std::abs(s.x - xi0) <= 4.0 * spacing) continue;

        double y = s.x;
        double hy = s.hx;
        Deriv dl = derivs(h, samples[j - 1].x);
        Deriv dr = derivs(h, samples[j + 1].x);
        if (dl.valid && dr.valid && dl.d1 >= 0.0 && dr.d1 <= 0.0) {
            std::optional<double> py = polish(h, samples[j - 1].x, samples[j + 1].x);
            if (py) {
                try {
                    double hv = h.eval(*py);
                    if (std::isfinite(hv)) {
                        y = *py;
                        hy = hv;
                    }
                } catch (const DomainError&) {
                }
            }
        }
        if (std::abs(y - xi0) <= 4.0 * spacing) continue;
        if (hy >= h0 - tie_tol) throw AmbiguousMaximum(xi0, y);
    }

    return xi0;
}

CriticalPoint classify_degeneracy(const Expr& h, double xi0, int max_order, double tol) {
    if (max_order < 2 || max_order % 2 != 0) {
        throw Error("max_order must be even and at least 2");
    }
    if (!(tol > 0.0)) throw Error("tol must be positive");

    Jet jet = h.jet_eval(xi0, max_order);
    double scale = 1.0;
    for (int j = 1; j <= max_order; ++j) {
        scale = std::max(scale, std::abs(jet.derivative(j)));
    }
    for (int j = 1; j <= max_order; ++j) {
        double dj = jet.derivative(j);
        if (std::abs(dj) <= tol * scale) continue;
        if (j % 2 != 0) throw OddLeadingDerivative(j, dj);
        if (dj > 0.0) throw PositiveLeadingDerivative(j, dj);
        return CriticalPoint{xi0, j / 2, dj, jet.coeffs[0]};
    }
    throw AllDerivativesVanish(max_order);
}

}  // namespace laplace
