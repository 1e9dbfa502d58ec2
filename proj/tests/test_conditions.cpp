#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "laplace/conditions.hpp"
#include "laplace/expr.hpp"

using laplace::AmplitudeResult;
using laplace::check_amplitude;
using laplace::check_conditions;
using laplace::check_flank_dominance;
using laplace::check_integrability;
using laplace::ConditionReport;
using laplace::CriticalPoint;
using laplace::Expr;
using laplace::Flank;
using laplace::FlankResult;
using laplace::IntegrabilityResult;
using laplace::Options;
using laplace::ProblemSpec;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ProblemSpec make_ps(const char* phi, const char* h, double a, double b) {
    return ProblemSpec{a, b, Expr::parse(phi), Expr::parse(h), Options{}};
}

const double kWiggleXi0 = 0.1847840437449598;

}  // namespace

TEST_CASE("flank dominance holds for unimodal exponents") {
    Expr stirling = Expr::parse("log(x) - x");
    CHECK(check_flank_dominance(stirling, 1.0, 0.0, kInf, Flank::Left).pass);
    CHECK(check_flank_dominance(stirling, 1.0, 0.0, kInf, Flank::Right).pass);
    CHECK(check_flank_dominance(stirling, 1.0, 0.0, kInf).pass);

    Expr gauss = Expr::parse("-x^2");
    CHECK(check_flank_dominance(gauss, 0.0, -5.0, 5.0).pass);
    CHECK(check_flank_dominance(gauss, 0.0, -kInf, kInf).pass);

    Expr quartic = Expr::parse("-x^4");
    CHECK(check_flank_dominance(quartic, 0.0, -kInf, kInf).pass);
}

TEST_CASE("the wiggle exponent fails with a concrete witness") {
    Expr wig = Expr::parse("-x^2 + 0.5*sin(8*x)");

    FlankResult left = check_flank_dominance(wig, kWiggleXi0, -5.0, 5.0, Flank::Left);
    CHECK_FALSE(left.pass);
    REQUIRE(left.worst_witness.has_value());
    // Secondary hump around the second crest of sin(8x) left of the maximum.
    CHECK(*left.worst_witness == doctest::Approx(-0.5534112447148003).epsilon(1e-6));
    CHECK(left.detail.find("exceeds") != std::string::npos);

    FlankResult right = check_flank_dominance(wig, kWiggleXi0, -5.0, 5.0, Flank::Right);
    CHECK_FALSE(right.pass);
    REQUIRE(right.worst_witness.has_value());
    CHECK(*right.worst_witness == doctest::Approx(0.92161841219973517).epsilon(1e-6));

    FlankResult both = check_flank_dominance(wig, kWiggleXi0, -5.0, 5.0);
    CHECK_FALSE(both.pass);
    REQUIRE(both.worst_witness.has_value());
    CHECK(*both.worst_witness == doctest::Approx(*left.worst_witness).epsilon(1e-12));
}

TEST_CASE("flank dominance ignores constant shifts of h") {
    Expr wig = Expr::parse("-x^2 + 0.5*sin(8*x)");
    Expr shifted = Expr::parse("-x^2 + 0.5*sin(8*x) + 40");
    FlankResult a = check_flank_dominance(wig, kWiggleXi0, -5.0, 5.0, Flank::Left);
    FlankResult b = check_flank_dominance(shifted, kWiggleXi0, -5.0, 5.0, Flank::Left);
    CHECK(a.pass == b.pass);
    REQUIRE(a.worst_witness.has_value());
    REQUIRE(b.worst_witness.has_value());
    CHECK(*a.worst_witness == *b.worst_witness);
}

TEST_CASE("flank checks validate the sample count") {
    Expr gauss = Expr::parse("-x^2");
    CHECK_THROWS_AS(check_flank_dominance(gauss, 0.0, -5.0, 5.0, Flank::Left, 32),
                    laplace::Error);
    CHECK_NOTHROW(check_flank_dominance(gauss, 0.0, -5.0, 5.0, Flank::Left, 64));
}

TEST_CASE("integrability distinguishes the literal and positive readings") {
    CriticalPoint stirling{1.0, 1, -1.0, -1.0};
    IntegrabilityResult s = check_integrability(
        make_ps("1", "log(x) - x", 0.0, kInf), stirling, {0, 1, 2});
    CHECK_FALSE(s.pass);
    CHECK(s.positive_ok);
    CHECK(s.detail.find("n=0") != std::string::npos);
    CHECK(s.detail.find("divergent") != std::string::npos);

    CriticalPoint gauss{0.0, 1, -2.0, 0.0};
    IntegrabilityResult g = check_integrability(
        make_ps("1", "-x^2", -kInf, kInf), gauss, {0, 1, 2});
    CHECK_FALSE(g.pass);
    CHECK(g.positive_ok);

    CriticalPoint quartic{0.0, 2, -24.0, 0.0};
    IntegrabilityResult q = check_integrability(
        make_ps("exp(-x^2)", "-x^4", -kInf, kInf), quartic, {0, 1, 2});
    CHECK(q.pass);
    CHECK(q.positive_ok);

    // Flat exponent: the integrand never decays, so every probe diverges.
    CriticalPoint flat{0.0, 1, -2.0, -1.0};
    IntegrabilityResult f = check_integrability(
        make_ps("1", "-1/(1 + x^2)", -kInf, kInf), flat, {0, 1, 2});
    CHECK_FALSE(f.pass);
    CHECK_FALSE(f.positive_ok);
}

TEST_CASE("integrability requires the n = 0 probe and nonnegative n") {
    CriticalPoint gauss{0.0, 1, -2.0, 0.0};
    ProblemSpec ps = make_ps("1", "-x^2", -kInf, kInf);
    CHECK_THROWS_AS(check_integrability(ps, gauss, {1, 2}), laplace::Error);
    CHECK_THROWS_AS(check_integrability(ps, gauss, {0, -1}), laplace::Error);
    CHECK_THROWS_AS(check_integrability(ps, gauss, {}), laplace::Error);
}

TEST_CASE("amplitude check") {
    AmplitudeResult one = check_amplitude(Expr::parse("1"), 0.7);
    CHECK(one.pass);
    CHECK(one.value == 1.0);

    AmplitudeResult zero = check_amplitude(Expr::parse("x - 1"), 1.0);
    CHECK_FALSE(zero.pass);
    CHECK(zero.value == 0.0);
    CHECK(!zero.detail.empty());

    // Sign-like step: the delta ladder never settles.
    AmplitudeResult step =
        check_amplitude(Expr::parse("1 + x/sqrt(x^2 + 1e-30)"), 0.0);
    CHECK_FALSE(step.pass);

    AmplitudeResult smooth = check_amplitude(Expr::parse("exp(x)"), 17.0);
    CHECK(smooth.pass);
    CHECK(smooth.value == doctest::Approx(std::exp(17.0)).epsilon(1e-12));

    AmplitudeResult bad = check_amplitude(Expr::parse("log(x)"), 0.0);
    CHECK_FALSE(bad.pass);
    CHECK(!bad.detail.empty());
}

TEST_CASE("aggregate report for the flagship problems") {
    CriticalPoint stirling{1.0, 1, -1.0, -1.0};
    ConditionReport s =
        check_conditions(make_ps("1", "log(x) - x", 0.0, kInf), stirling);
    CHECK_FALSE(s.integrability.pass);
    CHECK(s.integrability_positive);
    CHECK(s.left_flank.pass);
    CHECK(s.right_flank.pass);
    CHECK(s.amplitude.pass);
    CHECK_FALSE(s.all_pass);  // the literal reading includes n = 0

    CriticalPoint quartic{0.0, 2, -24.0, 0.0};
    ConditionReport q =
        check_conditions(make_ps("exp(-x^2)", "-x^4", -kInf, kInf), quartic);
    CHECK(q.integrability.pass);
    CHECK(q.left_flank.pass);
    CHECK(q.right_flank.pass);
    CHECK(q.amplitude.pass);
    CHECK(q.all_pass);

    CriticalPoint wiggle{kWiggleXi0, 1, -33.863126705290220, 0.46371621194742046};
    ConditionReport w = check_conditions(
        make_ps("1", "-x^2 + 0.5*sin(8*x)", -5.0, 5.0), wiggle);
    CHECK_FALSE(w.left_flank.pass);
    CHECK(w.left_flank.worst_witness.has_value());
    CHECK_FALSE(w.all_pass);
    CHECK(w.integrability.pass);
    CHECK(w.amplitude.pass);
}
