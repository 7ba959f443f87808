#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "udn/planner.hpp"

using namespace udn;

namespace {

ValidatedScenario reference_vs() {
    Scenario s;
    s.band.t_min = 0.04;
    apply_setting(s, "area_in", 0.02);
    return validate(s);
}

// Independent inversion of the uWave bound: lambda_mu achieving a target
// efficiency K is rho*lambda_u*(e^K - 1)^(2/alpha).
double mu_density_closed_form(double target, double lambda_u, double alpha_mu) {
    return rho(alpha_mu) * lambda_u * std::pow(std::expm1(target), 2.0 / alpha_mu);
}

}  // namespace

TEST_CASE("allocate closed cases") {
    // T = 0: everything downlink
    const Allocation a0 = allocate(20.0, 500.0, 0.0, 8.0, 10.0);
    CHECK(a0.w_ul == 0.0);
    CHECK(a0.w_dl == 20.0);
    CHECK(a0.feasible);

    // boundary W = T Wm gamma_m / gamma_mu: all uplink, still feasible
    const double gmu = 5.0, gmm = 2.0, t = 0.05, wm = 400.0;
    const double w = t * wm * gmm / gmu;
    const Allocation ab = allocate(w, wm, t, gmu, gmm);
    CHECK(ab.feasible);
    CHECK(ab.w_ul == Catch::Approx(w).epsilon(1e-12));
    CHECK(ab.w_dl == Catch::Approx(0.0).margin(1e-12));

    // the reference headline: T=0.03, W=20, Wm=500, gamma ratio tuned so
    // w_ul lands at 19 MHz
    const double ratio = (19.0 * 1.03 / 0.03 - 20.0) / 500.0;
    const Allocation ah = allocate(20.0, 500.0, 0.03, 1.0, ratio);
    CHECK(ah.w_ul == Catch::Approx(19.0).epsilon(1e-12));
    CHECK(ah.w_ul + ah.w_dl == 20.0);
}

TEST_CASE("allocate identities over randomized feasible inputs") {
    std::mt19937_64 rng(99);
    auto u = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };
    int feasible_seen = 0, infeasible_seen = 0;
    for (int iter = 0; iter < 100000; ++iter) {
        const double w = u(1.0, 100.0);
        const double wm = u(0.0, 1000.0);
        const double t = u(0.0, 1.0);
        const double gmu = u(0.1, 20.0);
        const double gmm = u(0.0, 30.0);
        const Allocation a = allocate(w, wm, t, gmu, gmm);

        // verdict matches the sign of W - T Wm gamma_m / gamma_mu
        const long double slack_hp =
            static_cast<long double>(w) -
            static_cast<long double>(t) * wm * gmm / gmu;
        if (std::abs(static_cast<double>(slack_hp)) > 1e-12 * w)
            CHECK(a.feasible == (slack_hp >= 0.0L));

        if (!a.feasible) {
            ++infeasible_seen;
            CHECK(a.slack < 0.0);
            continue;
        }
        ++feasible_seen;
        CHECK(a.w_ul >= 0.0);
        CHECK(a.w_dl >= 0.0);
        CHECK(a.w_ul <= w * (1.0 + 1e-12));
        CHECK(std::abs(a.w_ul + a.w_dl - w) <= 1e-12 * w);
        // w_ul equals T/(1+T) (W + Wm gamma_m/gamma_mu)
        const double direct = t / (1.0 + t) * (w + wm * gmm / gmu);
        CHECK(std::abs(a.w_ul - direct) <= 1e-12 * std::max(1.0, direct));
        // realized ratio equals T
        const RatePair r = rates(a, wm, gmu, gmm);
        if (t > 1e-9 && r.r_dl > 0.0)
            CHECK(std::abs(r.r_ul / r.r_dl - t) <= 1e-12 * t);
        if (t == 0.0) CHECK(r.r_ul == 0.0);
    }
    CHECK(feasible_seen > 1000);
    CHECK(infeasible_seen > 1000);
}

TEST_CASE("rates closed cases") {
    CHECK(rates(Allocation{0.0, 0.0, true, 0.0}, 0.0, 3.0, 4.0).r_dl == 0.0);
    CHECK(rates(Allocation{0.0, 0.0, true, 0.0}, 0.0, 3.0, 4.0).r_ul == 0.0);
    // t=1, Wm=0: symmetric split
    const Allocation sym = allocate(10.0, 0.0, 1.0, 2.5, 0.0);
    const RatePair r = rates(sym, 0.0, 2.5, 0.0);
    CHECK(r.r_ul == Catch::Approx(10.0 * 2.5 / 2.0).epsilon(1e-12));
    CHECK(r.r_dl == Catch::Approx(r.r_ul).epsilon(1e-12));
}

TEST_CASE("allocation monotonicity in lambda_mm and w_mm") {
    const ValidatedScenario vs = reference_vs();
    const double gmu = se_mu_bound(1.0, 0.02, 4.58).value;
    double prev_ul = -1.0, prev_dl = 1e18;
    for (double lm : {0.1, 0.3, 1.0, 3.0}) {
        const double gmm = planning_gamma_mm(vs, lm);
        const Allocation a = allocate(20.0, 500.0, 0.03, gmu, gmm);
        CHECK(a.w_ul >= prev_ul);
        CHECK(a.w_dl <= prev_dl);
        prev_ul = a.w_ul;
        prev_dl = a.w_dl;
    }
    const double gmm = planning_gamma_mm(vs, 0.5);
    prev_ul = -1.0;
    prev_dl = 1e18;
    for (double wm : {100.0, 300.0, 500.0, 800.0}) {
        const Allocation a = allocate(20.0, wm, 0.03, gmu, gmm);
        CHECK(a.w_ul >= prev_ul);
        CHECK(a.w_dl <= prev_dl);
        prev_ul = a.w_ul;
        prev_dl = a.w_dl;
    }
}

TEST_CASE("surplus bandwidth is downlink-biased") {
    // d w_dl / dW = 1/(1+T) >= d w_ul / dW = T/(1+T), inside the feasible set
    const double t = 0.3, wm = 100.0, gmu = 6.0, gmm = 3.0, h = 1e-4;
    REQUIRE(allocate(20.0, wm, t, gmu, gmm).feasible);
    const Allocation a = allocate(20.0, wm, t, gmu, gmm);
    const Allocation b = allocate(20.0 + h, wm, t, gmu, gmm);
    const double dul = (b.w_ul - a.w_ul) / h;
    const double ddl = (b.w_dl - a.w_dl) / h;
    CHECK(dul == Catch::Approx(t / (1.0 + t)).epsilon(1e-6));
    CHECK(ddl == Catch::Approx(1.0 / (1.0 + t)).epsilon(1e-6));
    CHECK(ddl >= dul);
}

TEST_CASE("planning_gamma_mm domain and growth") {
    const ValidatedScenario vs = reference_vs();  // area_in ~= 0.02
    CHECK_THROWS_AS(planning_gamma_mm(vs, 0.015), Error);
    CHECK_THROWS_AS(planning_gamma_mm(vs, 0.01), Error);
    double prev = 0.0;
    for (double lm : {0.05, 0.1, 0.5, 2.0, 10.0}) {
        const double v = planning_gamma_mm(vs, lm);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("max_dl_rate: unconstrained limit and infeasibility") {
    Scenario s;
    s.band.t_min = 0.0;
    s.dens.lambda_mu = 1.0;
    s.dens.lambda_mm = 1.0;
    apply_setting(s, "area_in", 0.02);
    const ValidatedScenario vs = validate(s);
    const PlanResult pr = max_dl_rate(vs);
    CHECK(pr.rate.r_dl ==
          Catch::Approx(20.0 * pr.gamma_mu + 500.0 * pr.gamma_mm).epsilon(1e-12));
    CHECK(pr.rate.r_ul == 0.0);

    Scenario bad = s;
    bad.band.t_min = 1.0;
    bad.dens.lambda_mu = 0.03;  // weak uWave layer cannot carry T = 1
    bad.dens.lambda_mm = 10.0;
    try {
        max_dl_rate(validate(bad));
        FAIL("expected Infeasible");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::infeasible);
    }
}

TEST_CASE("required_density_exponent reference values") {
    ValidatedScenario vs = reference_vs();
    vs.s.band.w_mu_total = 20.0;
    // long-double route
    const long double bracket =
        (5.76L - 2.0L) * std::exp(-0.1L * static_cast<long double>(vs.area_in)) + 2.0L;
    const long double e20 = 4.58L * 20.0L / (0.04L * 500.0L * bracket);
    CHECK(required_density_exponent(vs) ==
          Catch::Approx(static_cast<double>(e20)).epsilon(1e-12));
    CHECK(required_density_exponent(vs) < 1.0);

    vs.s.band.w_mu_total = 30.0;
    CHECK(required_density_exponent(vs) > 1.0);

    // linear in W
    ValidatedScenario w2 = vs;
    w2.s.band.w_mu_total = 60.0;
    CHECK(required_density_exponent(w2) ==
          Catch::Approx(2.0 * required_density_exponent(vs)).epsilon(1e-12));

    // T -> 0 limit
    ValidatedScenario t0 = vs;
    t0.s.band.t_min = 0.0;
    CHECK(std::isinf(required_density_exponent(t0)));
}

TEST_CASE("required_mu_density matches the closed-form inversion") {
    const ValidatedScenario vs = reference_vs();
    for (double lm : {1.0, 10.0, 100.0, 1000.0}) {
        const double via_bisection = required_mu_density(lm, vs);
        ValidatedScenario at = vs;
        at.s.dens.lambda_mm = lm;
        const double target = vs.s.band.t_min * vs.s.band.w_mm * se_mm_bound(at).value /
                              vs.s.band.w_mu_total;
        const double via_inverse = mu_density_closed_form(target, 0.02, 4.58);
        CHECK(via_bisection == Catch::Approx(via_inverse).epsilon(1e-8));
    }
}

TEST_CASE("required_mu_density edge behavior and consistency") {
    const ValidatedScenario vs = reference_vs();
    ValidatedScenario t0 = vs;
    t0.s.band.t_min = 0.0;
    CHECK(required_mu_density(5.0, t0) == 0.0);

    // doubling W strictly lowers the requirement
    ValidatedScenario w2 = vs;
    w2.s.band.w_mu_total = 40.0;
    CHECK(required_mu_density(100.0, w2) < required_mu_density(100.0, vs));

    // plugging the result back into allocate is feasible with ~zero slack
    for (double lm : {10.0, 100.0}) {
        const double lmu = required_mu_density(lm, vs);
        ValidatedScenario at = vs;
        at.s.dens.lambda_mm = lm;
        const double gmu = se_mu_bound(lmu, 0.02, 4.58).value;
        const double gmm = se_mm_bound(at).value;
        const Allocation a = allocate(vs.s.band.w_mu_total, vs.s.band.w_mm, vs.s.band.t_min, gmu, gmm);
        CHECK(a.feasible);
        CHECK(std::abs(a.slack) < 1e-6 * vs.s.band.w_mu_total);
    }

    CHECK_THROWS_AS(required_mu_density(0.01, vs), Error);  // below area_in
}

TEST_CASE("required_spectrum reference values") {
    CHECK(required_spectrum(0.0, 500.0, 4.58, 5.76, 0.1, 0.02) == 0.0);
    // independent high-precision evaluation at the reference parameter set
    const long double direct = 0.04L * 500.0L / 4.58L *
                               ((5.76L - 2.0L) * std::exp(-0.1L * 0.02L) + 2.0L);
    const long double split = (0.04L * 500.0L / 4.58L) * 2.0L +
                              (0.04L * 500.0L / 4.58L) * 3.76L * std::exp(-0.002L);
    CHECK(static_cast<double>(direct) == Catch::Approx(static_cast<double>(split)).epsilon(1e-15));
    const double value = required_spectrum(0.04, 500.0, 4.58, 5.76, 0.1, 0.02);
    CHECK(value == Catch::Approx(static_cast<double>(direct)).epsilon(1e-12));
    CHECK(value > 20.0);
    CHECK(value < 30.0);

    // full-blockage limit: bracket collapses to 2
    const double lim = required_spectrum(0.04, 500.0, 4.58, 5.76, 1e9, 1.0);
    CHECK(lim == Catch::Approx(0.04 * 500.0 / 4.58 * 2.0).epsilon(1e-12));
}
