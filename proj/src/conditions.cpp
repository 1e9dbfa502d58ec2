#include "laplace/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "laplace/quadrature.hpp"

namespace laplace {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

const char* side_name(Flank side) {
    return side == Flank::Left ? "left flank" : "right flank";
}

}  // namespace

FlankResult check_flank_dominance(const Expr& h, double xi0, double a, double b,
                                  Flank side, int samples) {
    if (!(a < xi0 && xi0 < b)) throw Error("xi0 must lie strictly inside (a, b)");
    if (samples < 64) throw Error("samples must be at least 64");

    double near_end = side == Flank::Left ? xi0 - a : b - xi0;
    double rho_max = std::min(near_end, (b - a) / 2.0);
    if (std::isinf(rho_max)) rho_max = 8.0 * std::max(1.0, std::abs(xi0)) + 8.0;
    double rho_min = 1e-3 * rho_max;

    FlankResult out;
    out.pass = true;
    double worst_excess = 0.0;
    double worst_rho = 0.0;
    bool near_gap = false;

    auto eval_opt = [&h](double x, double& v) {
        try {
            v = h.eval(x);
            return std::isfinite(v);
        } catch (const DomainError&) {
            return false;
        }
    };

    for (int k = 0; k < 32; ++k) {
        double rho = rho_min * std::pow(rho_max / rho_min, k / 31.0);
        double edge = side == Flank::Left ? xi0 - rho : xi0 + rho;

        double near_min = kInf;
        bool any_near = false;
        for (int i = 0; i < samples; ++i) {
            double frac = static_cast<double>(i) / (samples - 1);
            double x = xi0 + (edge - xi0) * frac;
            double v;
            if (eval_opt(x, v)) {
                near_min = std::min(near_min, v);
                any_near = true;
            }
        }
        if (!any_near) {
            near_gap = true;
            continue;
        }

        double far_max = -kInf;
        double far_arg = kNan;
        double far_endpoint = side == Flank::Left ? a : b;
        for (int i = 0; i < samples; ++i) {
            double x;
            if (std::isinf(far_endpoint)) {
                double u = static_cast<double>(i) / samples;
                double reach = u / (1.0 - u);
                x = side == Flank::Left ? edge - reach : edge + reach;
            } else {
                double frac = static_cast<double>(i) / (samples - 1);
                x = edge + (far_endpoint - edge) * frac;
            }
            double v;
            if (eval_opt(x, v) && v > far_max) {
                far_max = v;
                far_arg = x;
            }
        }
        if (!(far_max > -kInf)) continue;  // far side entirely out of domain

        double excess = far_max - near_min;
        if (excess > 1e-12 * std::max(1.0, std::abs(near_min))) {
            out.pass = false;
            if (excess > worst_excess) {
                worst_excess = excess;
                worst_rho = rho;
                out.worst_witness = far_arg;
            }
        }
    }

    if (near_gap && out.pass) {
        out.pass = false;
        out.detail = std::string(side_name(side)) +
                     ": h unavailable on a near strip, cannot certify dominance";
        return out;
    }
    if (out.pass) {
        out.detail = std::string(side_name(side)) + ": dominated across 32 radii";
    } else if (out.worst_witness) {
        out.detail = std::string(side_name(side)) +
                     ": h exceeds the near-window floor by " +
                     detail::format_double(worst_excess) + " at x = " +
                     detail::format_double(*out.worst_witness) + " (rho = " +
                     detail::format_double(worst_rho) + ")";
    }
    return out;
}

FlankResult check_flank_dominance(const Expr& h, double xi0, double a, double b,
                                  int samples) {
    FlankResult left = check_flank_dominance(h, xi0, a, b, Flank::Left, samples);
    FlankResult right = check_flank_dominance(h, xi0, a, b, Flank::Right, samples);
    if (left.pass && right.pass) {
        return {true, std::nullopt, "both flanks dominated"};
    }
    FlankResult out;
    out.pass = false;
    if (!left.pass && !right.pass) {
        out.worst_witness = left.worst_witness;
        out.detail = left.detail + "; " + right.detail;
    } else if (!left.pass) {
        out.worst_witness = left.worst_witness;
        out.detail = left.detail;
    } else {
        out.worst_witness = right.worst_witness;
        out.detail = right.detail;
    }
    return out;
}

IntegrabilityResult check_integrability(const ProblemSpec& ps,
                                        const CriticalPoint& cp,
                                        const std::vector<long long>& n_probe) {
    if (std::find(n_probe.begin(), n_probe.end(), 0LL) == n_probe.end()) {
        throw Error("n_probe must include 0");
    }

    IntegrabilityResult out;
    out.pass = true;
    out.positive_ok = true;
    for (long long n : n_probe) {
        if (n < 0) throw Error("n_probe values must be nonnegative");
        // At n = 0 the exponential factor is identically 1; evaluating it as
        // 0 * (h - h0) would produce NaN where h overflows.
        auto f = [phi = ps.phi, h = ps.h, h0 = cp.h0, n](double x) {
            try {
                double w = std::abs(phi.eval(x));
                if (n >= 1) {
                    w *= std::exp(static_cast<double>(n) * (h.eval(x) - h0));
                }
                return w;
            } catch (const DomainError&) {
                return kNan;
            }
        };
        QuadOptions qo;
        qo.rel_tol = ps.options.rel_tol;
        qo.abs_tol = ps.options.abs_tol;
        qo.max_evaluations = ps.options.max_evaluations;
        qo.breakpoints = peak_breakpoints(cp, n);

        const char* verdict;
        bool ok = false;
        try {
            QuadResult r = adaptive_quad(f, ps.a, ps.b, qo);
            if (r.converged && std::isfinite(r.value)) {
                ok = true;
                verdict = "integrable";
            } else {
                verdict = "did not converge";
            }
        } catch (const DivergentIntegral&) {
            verdict = "divergent";
        }
        if (!ok) {
            out.pass = false;
            if (n >= 1) out.positive_ok = false;
        }
        if (!out.detail.empty()) out.detail += "; ";
        out.detail += "n=" + std::to_string(n) + ": " + verdict;
    }
    return out;
}

AmplitudeResult check_amplitude(const Expr& phi, double xi0) {
    AmplitudeResult out;
    try {
        out.value = phi.eval(xi0);
    } catch (const DomainError& e) {
        out.detail = std::string("amplitude evaluation failed: ") + e.what();
        return out;
    }
    if (out.value == 0.0 || !std::isfinite(out.value)) {
        out.detail = "amplitude vanishes or is non-finite at the maximum";
        return out;
    }

    constexpr double deltas[3] = {1e-3, 1e-5, 1e-7};
    double gaps[3];
    for (int i = 0; i < 3; ++i) {
        try {
            double up = phi.eval(xi0 + deltas[i]);
            double dn = phi.eval(xi0 - deltas[i]);
            gaps[i] = std::max(std::abs(up - out.value), std::abs(dn - out.value));
        } catch (const DomainError& e) {
            out.detail = std::string("amplitude not evaluable near the maximum: ") +
                         e.what();
            return out;
        }
    }
    out.pass =
        gaps[2] <= std::max(1e-2 * gaps[0], 1e-9 * std::max(1.0, std::abs(out.value)));
    out.detail = out.pass
                     ? "amplitude is nonzero and settles toward its value at the maximum"
                     : "amplitude does not settle along the shrinking offsets";
    return out;
}

ConditionReport check_conditions(const ProblemSpec& ps, const CriticalPoint& cp,
                                 const std::vector<long long>& n_probe) {
    ConditionReport rep;

    IntegrabilityResult ir = check_integrability(ps, cp, n_probe);
    rep.integrability = {ir.pass, ir.detail, std::nullopt};
    rep.integrability_positive = ir.positive_ok;

    FlankResult lf =
        check_flank_dominance(ps.h, cp.xi0, ps.a, ps.b, Flank::Left);
    rep.left_flank = {lf.pass, lf.detail, lf.worst_witness};

    FlankResult rf =
        check_flank_dominance(ps.h, cp.xi0, ps.a, ps.b, Flank::Right);
    rep.right_flank = {rf.pass, rf.detail, rf.worst_witness};

    AmplitudeResult ar = check_amplitude(ps.phi, cp.xi0);
    rep.amplitude = {ar.pass, ar.detail, std::nullopt};

    rep.all_pass = rep.integrability.pass && rep.left_flank.pass &&
                   rep.right_flank.pass && rep.amplitude.pass;
    return rep;
}

}  // namespace laplace
