#include "laplace/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "laplace/asymptotic.hpp"

namespace laplace {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// 15-point Kronrod rule with embedded 7-point Gauss rule; positive
// half of the symmetric node set, kXgk[7] is the center.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

// Parameter range of the double-exponential substitutions. At 7.2 the
// substituted coordinate reaches about exp(+-670), the edge of double
// range, while the transformed integrand of anything integrable has long
// since underflowed.
constexpr double kDeRange = 7.2;

constexpr double kMassCeiling = 1e290;

struct Transformed {
    std::function<double(double)> g;        // integrand in parameter space
    double lo = 0.0, hi = 0.0;              // parameter range
    std::function<double(double)> to_param; // x in (a,b) -> parameter
};

Transformed transform(const std::function<double(double)>& f, double a, double b) {
    Transformed t;
    bool inf_a = std::isinf(a);
    bool inf_b = std::isinf(b);
    if (!inf_a && !inf_b) {
        t.g = f;
        t.lo = a;
        t.hi = b;
        t.to_param = [](double x) { return x; };
    } else if (!inf_a && inf_b) {
        t.lo = -kDeRange;
        t.hi = kDeRange;
        t.g = [f, a](double u) {
            double r = std::exp(std::sinh(u));
            return f(a + r) * r * std::cosh(u);
        };
        t.to_param = [a](double x) { return std::asinh(std::log(x - a)); };
    } else if (inf_a && !inf_b) {
        t.lo = -kDeRange;
        t.hi = kDeRange;
        t.g = [f, b](double u) {
            double r = std::exp(std::sinh(u));
            return f(b - r) * r * std::cosh(u);
        };
        t.to_param = [b](double x) { return std::asinh(std::log(b - x)); };
    } else {
        t.lo = -kDeRange;
        t.hi = kDeRange;
        t.g = [f](double u) {
            double s = std::sinh(u);
            return f(std::sinh(s)) * std::cosh(s) * std::cosh(u);
        };
        t.to_param = [](double x) { return std::asinh(std::asinh(x)); };
    }
    return t;
}

struct Panel {
    double lo = 0.0, hi = 0.0;
    double value = 0.0;
    double err = 0.0;
    double resabs = 0.0;
};

struct WorstFirst {
    bool operator()(const Panel& a, const Panel& b) const {
        if (a.err != b.err) return a.err < b.err;
        return a.lo > b.lo;
    }
};

Panel gk15(const std::function<double(double)>& g, double lo, double hi,
           long long& nan_hits) {
    double c = 0.5 * (lo + hi);
    double hw = 0.5 * (hi - lo);

    auto sample = [&](double t) {
        double v = g(t);
        if (std::isnan(v)) {
            ++nan_hits;
            return 0.0;
        }
        return v;
    };

    double fc = sample(c);
    double resk = kWgk[7] * fc;
    double resg = kWg[3] * fc;
    double resabs = kWgk[7] * std::abs(fc);
    double fv1[7], fv2[7];
    for (int i = 0; i < 7; ++i) {
        double dx = hw * kXgk[i];
        fv1[i] = sample(c - dx);
        fv2[i] = sample(c + dx);
        double fsum = fv1[i] + fv2[i];
        resk += kWgk[i] * fsum;
        resabs += kWgk[i] * (std::abs(fv1[i]) + std::abs(fv2[i]));
        if (i % 2 == 1) resg += kWg[i / 2] * fsum;
    }
    double mean = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fc - mean);
    for (int i = 0; i < 7; ++i) {
        resasc += kWgk[i] * (std::abs(fv1[i] - mean) + std::abs(fv2[i] - mean));
    }

    Panel p;
    p.lo = lo;
    p.hi = hi;
    p.value = resk * hw;
    p.resabs = resabs * hw;
    resasc *= hw;

    double err = std::abs((resk - resg) * hw);
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    double round_floor = 50.0 * std::numeric_limits<double>::epsilon() * p.resabs;
    if (p.resabs > std::numeric_limits<double>::min() /
                       (50.0 * std::numeric_limits<double>::epsilon())) {
        err = std::max(err, round_floor);
    }
    p.err = err;
    return p;
}

std::string range_text(double lo, double hi) {
    return "[" + detail::format_double(lo) + ", " + detail::format_double(hi) + "]";
}

}  // namespace

QuadResult adaptive_quad(const std::function<double(double)>& f, double a,
                         double b, const QuadOptions& opts) {
    if (!(a < b)) throw Error("integration endpoints must satisfy a < b");
    if (std::isnan(a) || std::isnan(b)) throw Error("integration endpoints must not be NaN");
    if (!(opts.rel_tol >= 0.0) || !(opts.abs_tol >= 0.0)) {
        throw Error("quadrature tolerances must be nonnegative");
    }

    Transformed tr = transform(f, a, b);
    double span = tr.hi - tr.lo;

    // Panel edges: the parameter range, a small uniform pre-split for
    // robustness, and the mapped breakpoints.
    std::vector<double> edges;
    edges.push_back(tr.lo);
    for (int i = 1; i < 8; ++i) edges.push_back(tr.lo + span * i / 8.0);
    for (double x : opts.breakpoints) {
        if (!(x > a && x < b)) continue;
        double u = tr.to_param(x);
        if (std::isfinite(u) && u > tr.lo && u < tr.hi) edges.push_back(u);
    }
    edges.push_back(tr.hi);
    std::sort(edges.begin(), edges.end());
    std::vector<double> dedup;
    for (double e : edges) {
        if (dedup.empty() || e - dedup.back() > 1e-14 * span) dedup.push_back(e);
    }
    if (dedup.size() < 2) dedup = {tr.lo, tr.hi};
    dedup.back() = tr.hi;

    QuadResult res;
    double total_value = 0.0;
    double total_err = 0.0;
    double total_resabs = 0.0;

    std::priority_queue<Panel, std::vector<Panel>, WorstFirst> active;
    std::vector<Panel> frozen;  // too narrow to split further

    auto add_panel = [&](double lo, double hi) {
        Panel p = gk15(tr.g, lo, hi, res.nan_hits);
        res.evaluations += 15;
        if (!std::isfinite(p.value)) {
            throw DivergentIntegral("non-finite panel over " + range_text(lo, hi));
        }
        total_value += p.value;
        total_err += p.err;
        total_resabs += p.resabs;
        if (total_resabs > kMassCeiling) {
            throw DivergentIntegral("accumulated mass exceeds " +
                                    detail::format_double(kMassCeiling));
        }
        active.push(p);
    };

    for (std::size_t i = 0; i + 1 < dedup.size(); ++i) {
        add_panel(dedup[i], dedup[i + 1]);
    }

    while (!active.empty()) {
        double target = std::max(opts.abs_tol, opts.rel_tol * std::abs(total_value));
        if (total_err <= target) break;
        if (res.evaluations + 30 > opts.max_evaluations) break;
        Panel worst = active.top();
        active.pop();
        double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi)) {
            frozen.push_back(worst);
            continue;
        }
        total_value -= worst.value;
        total_err -= worst.err;
        total_resabs -= worst.resabs;
        add_panel(worst.lo, mid);
        add_panel(mid, worst.hi);
    }

    // Deterministic final assembly: sum panels in interval order.
    std::vector<Panel> all(std::move(frozen));
    while (!active.empty()) {
        all.push_back(active.top());
        active.pop();
    }
    std::sort(all.begin(), all.end(),
              [](const Panel& x, const Panel& y) { return x.lo < y.lo; });
    res.value = 0.0;
    res.err_est = 0.0;
    for (const Panel& p : all) {
        res.value += p.value;
        res.err_est += p.err;
    }
    res.converged =
        res.err_est <= std::max(opts.abs_tol, opts.rel_tol * std::abs(res.value));
    return res;
}

std::vector<double> peak_breakpoints(const CriticalPoint& cp, long long n) {
    std::vector<double> seeds{cp.xi0};
    if (n >= 1 && cp.m >= 1 && cp.d2m < 0.0) {
        double fact = 1.0;
        for (int i = 2; i <= 2 * cp.m; ++i) fact *= i;
        double width = std::pow(fact / (static_cast<double>(n) * (-cp.d2m)),
                                1.0 / (2.0 * cp.m));
        if (std::isfinite(width) && width > 0.0) {
            for (double k : {1.0, 8.0, 64.0, 512.0}) {
                seeds.push_back(cp.xi0 - k * width);
                seeds.push_back(cp.xi0 + k * width);
            }
        }
    }
    return seeds;
}

LogScaledValue integrate_scaled(const ProblemSpec& ps, const CriticalPoint& cp,
                                long long n) {
    if (n < 0) throw Error("n must be nonnegative");

    QuadOptions qo;
    qo.rel_tol = ps.options.rel_tol;
    qo.abs_tol = ps.options.abs_tol;
    qo.max_evaluations = ps.options.max_evaluations;
    qo.breakpoints = peak_breakpoints(cp, n);

    auto f = [phi = ps.phi, h = ps.h, h0 = cp.h0, n](double x) {
        try {
            return phi.eval(x) * std::exp(static_cast<double>(n) * (h.eval(x) - h0));
        } catch (const DomainError&) {
            return kNan;
        }
    };
    QuadResult r = adaptive_quad(f, ps.a, ps.b, qo);
    if (!r.converged) {
        throw NonConvergence("scaled integral at n = " + std::to_string(n), r.err_est);
    }
    LogScaledValue v = LogScaledValue::from_double(r.value);
    if (v.sign != 0) v.log_mag += static_cast<double>(n) * cp.h0;
    return v;
}

std::vector<RatioRow> ratio_table(const ProblemSpec& ps, const CriticalPoint& cp,
                                  const std::vector<long long>& n_list) {
    if (n_list.empty()) throw Error("n_list must not be empty");
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (n_list[i] < 1) throw Error("n values must be at least 1");
        if (i > 0 && n_list[i] <= n_list[i - 1]) {
            throw Error("n_list must be strictly ascending");
        }
    }
    std::vector<RatioRow> rows;
    rows.reserve(n_list.size());
    for (long long n : n_list) {
        LogScaledValue oracle = integrate_scaled(ps, cp, n);
        Estimate est = laplace_estimate(ps.phi, cp, n);
        RatioRow row;
        row.n = n;
        row.log_integral = oracle.log_mag;
        row.log_estimate = est.value.log_mag;
        row.ratio = oracle.sign == 0
                        ? 0.0
                        : oracle.sign * est.value.sign *
                              std::exp(oracle.log_mag - est.value.log_mag);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace laplace
