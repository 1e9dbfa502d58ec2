#include "laplace/proofmirror.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "laplace/asymptotic.hpp"
#include "laplace/quadrature.hpp"

namespace laplace {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

struct Window {
    double eps = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

Window fit_window(const ProblemSpec& ps, const CriticalPoint& cp, long long n) {
    double eps = window_epsilon(n, cp.m);
    Window w{eps, cp.xi0 - eps, cp.xi0 + eps};
    if (!(w.lo > ps.a && w.hi < ps.b)) {
        double d = std::min(cp.xi0 - ps.a, ps.b - cp.xi0);
        double min_n;
        if (!(d > 0.0)) {
            min_n = kInf;
        } else if (d >= 1.0) {
            min_n = 2.0;
        } else {
            min_n = std::floor(std::pow(d, -6.0 * cp.m * cp.m)) + 1.0;
        }
        throw WindowExceedsInterval(eps, min_n);
    }
    return w;
}

QuadOptions quad_opts(const ProblemSpec& ps) {
    QuadOptions qo;
    qo.rel_tol = ps.options.rel_tol;
    qo.abs_tol = ps.options.abs_tol;
    qo.max_evaluations = ps.options.max_evaluations;
    return qo;
}

std::function<double(double)> scaled_integrand(const ProblemSpec& ps,
                                               const CriticalPoint& cp,
                                               long long n) {
    return [phi = ps.phi, h = ps.h, h0 = cp.h0, n](double x) {
        try {
            return phi.eval(x) * std::exp(static_cast<double>(n) * (h.eval(x) - h0));
        } catch (const DomainError&) {
            return kNan;
        }
    };
}

QuadResult must_quad(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& qo, const char* what) {
    QuadResult r = adaptive_quad(f, a, b, qo);
    if (!r.converged) throw NonConvergence(what, r.err_est);
    return r;
}

}  // namespace

double window_epsilon(long long n, int m) {
    if (n < 1) throw Error("n must be at least 1");
    if (m < 1) throw Error("m must be at least 1");
    return std::pow(static_cast<double>(n), -1.0 / (6.0 * m * m));
}

SplitParts split_integral(const ProblemSpec& ps, const CriticalPoint& cp,
                          long long n) {
    Window w = fit_window(ps, cp, n);
    double scale = std::pow(static_cast<double>(n), 1.0 / (2.0 * cp.m));
    auto f = scaled_integrand(ps, cp, n);
    QuadOptions qo = quad_opts(ps);
    qo.breakpoints = peak_breakpoints(cp, n);

    SplitParts parts;
    parts.left_tail = scale * must_quad(f, ps.a, w.lo, qo, "left tail").value;
    parts.center = scale * must_quad(f, w.lo, w.hi, qo, "window center").value;
    parts.right_tail = scale * must_quad(f, w.hi, ps.b, qo, "right tail").value;
    return parts;
}

BracketCheck check_derivative_bracket(const Expr& h, const CriticalPoint& cp,
                                      double eps) {
    if (!(eps > 0.0)) throw Error("eps must be positive");
    BracketCheck out;
    out.pass = true;
    out.worst_ratio = 1.0;
    double worst_dist = -1.0;
    for (int i = 0; i <= 256; ++i) {
        double x = cp.xi0 + eps * (i / 128.0 - 1.0);
        double ratio;
        try {
            ratio = h.derivative(x, 2 * cp.m) / cp.d2m;
        } catch (const DomainError&) {
            out.pass = false;
            continue;
        }
        if (std::isnan(ratio)) {
            out.pass = false;
            continue;
        }
        if (!(ratio >= 0.5 && ratio <= 1.5)) out.pass = false;
        double dist = std::abs(ratio - 1.0);
        if (dist > worst_dist) {
            worst_dist = dist;
            out.worst_ratio = ratio;
        }
    }
    return out;
}

double tail_constant(const CriticalPoint& cp) {
    if (!(cp.d2m < 0.0)) throw Error("leading derivative must be negative");
    return 2.0 * factorial(2 * cp.m) / ((-cp.d2m) * M_E);
}

TailBoundCheck check_tail_bound(const ProblemSpec& ps, const CriticalPoint& cp,
                                long long n) {
    Window w = fit_window(ps, cp, n);
    double sup = 0.0;
    auto visit = [&](double x) {
        try {
            double e = std::exp(static_cast<double>(n) * (ps.h.eval(x) - cp.h0));
            if (e > sup || std::isnan(e)) sup = std::isnan(e) ? kInf : std::max(sup, e);
        } catch (const DomainError&) {
        }
    };
    for (int j = 0; j <= 256; ++j) {
        if (std::isinf(ps.a)) {
            double u = j / 257.0;
            visit(w.lo - u / (1.0 - u));
        } else {
            visit(ps.a + (w.lo - ps.a) * (j / 256.0));
        }
        if (std::isinf(ps.b)) {
            double u = j / 257.0;
            visit(w.hi + u / (1.0 - u));
        } else {
            visit(w.hi + (ps.b - w.hi) * (j / 256.0));
        }
    }

    TailBoundCheck out;
    out.lhs = std::pow(static_cast<double>(n), 1.0 / (2.0 * cp.m)) * sup;
    out.rhs = tail_constant(cp) *
              std::pow(static_cast<double>(n), 5.0 / (6.0 * cp.m) - 1.0);
    out.pass = out.lhs <= out.rhs;
    return out;
}

SurrogateGap surrogate_gap(const ProblemSpec& ps, const CriticalPoint& cp,
                           long long n) {
    Window w = fit_window(ps, cp, n);
    int two_m = 2 * cp.m;
    double fact = factorial(two_m);

    SurrogateGap out;
    for (int i = 0; i <= 1024; ++i) {
        double x = cp.xi0 + w.eps * (i / 512.0 - 1.0);
        double p = ps.h.eval(x) - cp.h0;
        double q = cp.d2m * std::pow(x - cp.xi0, static_cast<double>(two_m)) / fact;
        double nd = static_cast<double>(n);
        out.sup_gap = std::max(out.sup_gap, std::abs(std::exp(nd * p) - std::exp(nd * q)));
        out.pq_max = std::max(out.pq_max, std::abs(p - q));
    }
    out.pq_bound = (-cp.d2m) * std::pow(w.eps, static_cast<double>(two_m)) / (2.0 * fact);
    out.pointwise_ok = out.pq_max <= out.pq_bound * (1.0 + 1e-12);
    out.gap_over_n = out.pq_max / static_cast<double>(n);
    out.gap_times_n = out.pq_max * static_cast<double>(n);
    return out;
}

double truncated_tail_deficit(double R, int m) {
    if (!(R >= 0.0) || std::isinf(R)) throw Error("R must be finite and nonnegative");
    if (m < 1) throw Error("m must be at least 1");
    double expo = 2.0 * m;
    auto f = [expo](double z) { return std::exp(-std::pow(z, expo)); };
    QuadOptions qo;
    QuadResult r = must_quad(f, R, kInf, qo, "truncated tail deficit");
    return 2.0 * r.value;
}

bool ladder_shrinks(const std::vector<double>& values, double rate, double slack) {
    if (values.size() < 2) throw Error("ladder needs at least two values");
    if (!(slack > 0.0)) throw Error("slack must be positive");
    double step = slack * std::pow(100.0, -rate);
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        if (!(values[i] >= 0.0) || !(values[i + 1] >= 0.0)) {
            throw Error("ladder values must be nonnegative");
        }
        if (values[i] == 0.0) {
            if (values[i + 1] != 0.0) return false;
            continue;
        }
        if (!(values[i + 1] <= step * values[i])) return false;
    }
    return true;
}

WindowDiagnostics proof_trace(const ProblemSpec& ps, const CriticalPoint& cp,
                              long long n) {
    WindowDiagnostics d;
    d.n = n;
    d.m = cp.m;

    Window w = fit_window(ps, cp, n);
    d.epsilon = w.eps;

    SplitParts parts = split_integral(ps, cp, n);
    d.left_tail = parts.left_tail;
    d.center = parts.center;
    d.right_tail = parts.right_tail;

    BracketCheck br = check_derivative_bracket(ps.h, cp, d.epsilon);
    d.flags.derivative_bracket = br.pass;

    TailBoundCheck tb = check_tail_bound(ps, cp, n);
    d.flags.tail_bound_holds = tb.pass;

    // Measured-tail ceiling: the sup bound times the amplitude mass carried
    // by the tails. Infinite (vacuous) when the amplitude alone is not
    // absolutely integrable there.
    double tail_mass;
    auto phi_abs = [phi = ps.phi](double x) {
        try {
            return std::abs(phi.eval(x));
        } catch (const DomainError&) {
            return kNan;
        }
    };
    QuadOptions qo = quad_opts(ps);
    try {
        QuadResult lmass = adaptive_quad(phi_abs, ps.a, w.lo, qo);
        QuadResult rmass = adaptive_quad(phi_abs, w.hi, ps.b, qo);
        tail_mass = (lmass.converged && rmass.converged)
                        ? lmass.value + rmass.value
                        : kInf;
    } catch (const DivergentIntegral&) {
        tail_mass = kInf;
    }
    d.tail_bound = tb.rhs * tail_mass;
    d.flags.tails_negligible =
        std::abs(d.left_tail) + std::abs(d.right_tail) <= d.tail_bound;

    SurrogateGap sg = surrogate_gap(ps, cp, n);
    d.sup_gap = sg.sup_gap;
    d.flags.surrogate_pointwise = sg.pointwise_ok;

    double fact = factorial(2 * cp.m);
    d.r = d.epsilon * std::pow(static_cast<double>(n) * (-cp.d2m) / fact,
                               1.0 / (2.0 * cp.m));
    d.deficit = truncated_tail_deficit(d.r, cp.m);

    double scale = std::pow(static_cast<double>(n), 1.0 / (2.0 * cp.m));

    auto fq = [phi = ps.phi, xi0 = cp.xi0, d2m = cp.d2m, fact,
               two_m = 2 * cp.m, n](double x) {
        try {
            double q = d2m * std::pow(x - xi0, static_cast<double>(two_m)) / fact;
            return phi.eval(x) * std::exp(static_cast<double>(n) * q);
        } catch (const DomainError&) {
            return kNan;
        }
    };
    QuadOptions qoc = quad_opts(ps);
    qoc.breakpoints = peak_breakpoints(cp, n);
    d.surrogate_center =
        scale * must_quad(fq, w.lo, w.hi, qoc, "surrogate center").value;

    LogScaledValue whole = integrate_scaled(ps, cp, n);
    double scaled_whole =
        whole.sign == 0
            ? 0.0
            : whole.sign * scale *
                  std::exp(whole.log_mag - static_cast<double>(n) * cp.h0);
    double parts_sum = parts.left_tail + parts.center + parts.right_tail;
    d.flags.split_additive = std::abs(parts_sum - scaled_whole) <=
                             1e-8 * std::max(1.0, std::abs(scaled_whole));

    Estimate est = laplace_estimate(ps.phi, cp, n);
    double scaled_est = est.value.sign * scale *
                        std::exp(est.value.log_mag - static_cast<double>(n) * cp.h0);

    // Error budget assembled from the measured pieces: tail mass, the
    // exponent-gap sup over the window, amplitude modulation across the
    // window, the truncated surrogate mass beyond the window, and a slack
    // of 100x the quadrature tolerance for the numerics themselves.
    double phi0 = ps.phi.eval(cp.xi0);
    double max_abs_phi = std::abs(phi0);
    double mod_phi = 0.0;
    for (int i = 0; i <= 1024; ++i) {
        double x = cp.xi0 + w.eps * (i / 512.0 - 1.0);
        try {
            double v = ps.phi.eval(x);
            max_abs_phi = std::max(max_abs_phi, std::abs(v));
            mod_phi = std::max(mod_phi, std::abs(v - phi0));
        } catch (const DomainError&) {
        }
    }
    double width_factor = std::pow(fact / (-cp.d2m), 1.0 / (2.0 * cp.m));
    double budget = std::abs(d.left_tail) + std::abs(d.right_tail) +
                    scale * d.sup_gap * 2.0 * d.epsilon * max_abs_phi +
                    mod_phi * width_factor * gauss_power_integral(cp.m) +
                    std::abs(phi0) * width_factor * d.deficit +
                    1e-8 * (std::abs(scaled_whole) + std::abs(scaled_est) + 1.0);
    d.flags.final_estimate = std::abs(scaled_whole - scaled_est) <= budget;
    return d;
}

}  // namespace laplace
