// Acceptance suite: one pass/fail line per criterion, exit 1 on any failure.
//
// Interference-limited convention: the uWave and outdoor-mmWave closed forms
// carry no noise term (those analyses are interference-limited), so the
// Monte Carlo runs validating them use sigma2 = 1e-9. The indoor bound is
// noise-limited and is validated at its reference sigma2 = 1.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "udn/analytic.hpp"
#include "udn/figures.hpp"
#include "udn/mc.hpp"
#include "udn/planner.hpp"
#include "udn/scenario.hpp"

using namespace udn;

namespace {

int g_failures = 0;

void report(int id, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point start = clock::now();
    return std::chrono::duration<double>(clock::now() - start).count();
}

std::string fmt(double v, int prec = 6) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    return buf;
}

// Tiny CSV reader for the figure pipelines: skips comments, returns rows of
// cells plus a header index.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int col(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        return -1;
    }
};

Table parse_csv(const std::string& text) {
    Table t;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream row(line);
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (line.size() && line.back() == ',') cells.push_back("");
        if (t.header.empty())
            t.header = cells;
        else
            t.rows.push_back(cells);
    }
    return t;
}

Scenario base_mc_scenario(std::uint64_t seed) {
    Scenario s;
    s.sim.window_side = 100.0;
    s.sim.seed = seed;
    return s;
}

// ---------------------------------------------------------------------------

void criterion1_rho_oracle() {
    const double t0 = now_seconds();
    double worst = 0.0;
    for (double alpha : {2.5, 3.0, 4.0, 4.58, 5.76, 6.0, 8.0}) {
        const double s = alpha / 2.0;
        const double reflection = (std::numbers::pi / s) / std::sin(std::numbers::pi / s);
        worst = std::max(worst, std::abs(rho(alpha) - reflection));
    }
    const double dt = now_seconds() - t0;
    report(1, worst < 1e-9 && dt < 1.0,
           "rho quadrature vs reflection: max |delta| = " + fmt(worst) + ", " + fmt(dt, 3) + " s");
}

// fig2 carries one simulated curve per exponent for a typical user served
// in either direction; the uplink estimator (all users transmitting on the
// uplink band) is the model whose bound-to-simulation ratios match the
// expected tightness values.
void criterion2_fig2_tightness() {
    const double t0 = now_seconds();
    const std::vector<double> lambdas{0.1, 0.2, 1.0};
    const std::vector<double> expected{0.8175, 0.909, 0.9796};
    bool ok = true;
    std::string detail = "bound/MC ratios at lambda_mu {0.1,0.2,1}:";
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        Scenario s = base_mc_scenario(424242 + i);
        s.radio.alpha_mu = 4.0;
        s.radio.sigma2 = 1e-9;
        s.dens.lambda_mu = lambdas[i];
        s.sim.trials = 10000;
        const ValidatedScenario vs = validate(s);
        const SeEstimate est = estimate_mu_ul(vs);
        const double bound = se_mu_bound(lambdas[i], 0.02, 4.0).value;
        const double ratio = bound / est.mean;
        detail += " " + fmt(ratio, 4);
        if (std::abs(ratio - expected[i]) > 0.04) ok = false;
    }
    const double dt = now_seconds() - t0;
    detail += " (expected 0.8175 0.909 0.9796 +-0.04), " + fmt(dt, 3) + " s";
    report(2, ok && dt < 300.0, detail);
}

void criterion3_bound_dominance() {
    bool ok = true;
    std::string detail = "min (mean+2se-bound):";
    double worst_margin = 1e300;
    const std::vector<double> ratios{5.0, 10.0, 50.0};
    for (double ratio : ratios) {
        const double lambda_bs = ratio * 0.02;
        for (Regime regime : {Regime::mu_dl, Regime::mm_out, Regime::mm_in, Regime::mm}) {
            Scenario s = base_mc_scenario(777000 + static_cast<std::uint64_t>(ratio * 10) +
                                          static_cast<std::uint64_t>(regime));
            s.radio.sigma2 = regime == Regime::mm_in ? 1.0 : 1e-9;
            s.dens.lambda_mu = lambda_bs;
            s.dens.lambda_mm = lambda_bs;
            s.sim.trials = regime == Regime::mu_dl ? 5000 : 4000;
            const ValidatedScenario vs = validate(s);
            const SeEstimate est = estimate_regime(regime, vs);
            const double bound = se_bound_for_regime(regime, vs).value;
            const double margin = est.mean + 2.0 * est.stderr_ - bound;
            worst_margin = std::min(worst_margin, margin);
            if (margin < 0.0) {
                ok = false;
                detail += std::string(" VIOLATION ") + regime_name(regime) + "@" + fmt(lambda_bs, 3);
            }
        }
    }
    detail += " " + fmt(worst_margin, 4) + " nats over {5,10,50} x 4 regimes";
    report(3, ok, detail);
}

void criterion4_reciprocity() {
    bool ok = true;
    std::string detail;
    for (double alpha : {4.0, 4.58}) {
        Scenario s = base_mc_scenario(31337);  // shared seed: common random deployments
        s.radio.alpha_mu = alpha;
        s.radio.sigma2 = 1e-9;
        s.dens.lambda_mu = 1.0;  // lambda_mu / lambda_u = 50
        s.sim.trials = 10000;
        const ValidatedScenario vs = validate(s);
        const SeEstimate dl = estimate_mu_dl(vs);
        const SeEstimate ul = estimate_mu_ul(vs);
        const double z = inv_norm_cdf(0.5 * (1.0 + s.sim.ci_level));
        const double gap = std::abs(ul.mean - dl.mean);
        const double budget = z * (ul.stderr_ + dl.stderr_);
        detail += "alpha=" + fmt(alpha, 3) + ": |ul-dl| = " + fmt(gap, 3) + " <= " + fmt(budget, 3) + "; ";
        if (gap > budget) ok = false;
    }
    report(4, ok, detail + "at lambda_mu/lambda_u = 50");
}

void criterion5_allocation_identities() {
    Rng rng(55);
    bool ok = true;
    int feasible = 0, infeasible = 0;
    double worst_sum = 0.0, worst_ratio = 0.0;
    for (int iter = 0; iter < 100000 && ok; ++iter) {
        const double w = uniform(rng, 1.0, 100.0);
        const double wm = uniform(rng, 0.0, 1000.0);
        const double t = uniform(rng, 0.0, 1.0);
        const double gmu = uniform(rng, 0.1, 20.0);
        const double gmm = uniform(rng, 0.0, 30.0);
        const Allocation a = allocate(w, wm, t, gmu, gmm);
        const long double slack_hp = static_cast<long double>(w) -
                                     static_cast<long double>(t) * wm * gmm / gmu;
        if (std::abs(static_cast<double>(slack_hp)) > 1e-13 * w &&
            a.feasible != (slack_hp >= 0.0L))
            ok = false;
        if (!a.feasible) {
            ++infeasible;
            continue;
        }
        ++feasible;
        const double sum_err = std::abs(a.w_ul + a.w_dl - w) / w;
        worst_sum = std::max(worst_sum, sum_err);
        if (sum_err > 1e-12) ok = false;
        const RatePair r = rates(a, wm, gmu, gmm);
        if (t > 0.0 && r.r_dl > 0.0) {
            const double ratio_err = std::abs(r.r_ul / r.r_dl - t) / t;
            worst_ratio = std::max(worst_ratio, ratio_err);
            if (ratio_err > 1e-12) ok = false;
        }
    }
    report(5, ok,
           "1e5 randomized splits: max |w_ul+w_dl-W|/W = " + fmt(worst_sum, 3) +
               ", max |Ru/Rd-T|/T = " + fmt(worst_ratio, 3) + " (" + std::to_string(feasible) +
               " feasible, " + std::to_string(infeasible) + " infeasible)");
}

void criterion6_fig5_headline() {
    FigureOptions opt;
    opt.timestamp = false;
    const FigureResult fig = run_figure("fig5", Scenario{}, {}, opt);
    const Table t = parse_csv(fig.csv);
    const int c_ul = t.col("w_ul");
    const int c_status = t.col("status");
    bool in_band = false;
    double last_ul = -1.0;
    for (const auto& row : t.rows) {
        if (row[c_status] != "ok" && row[c_status] != "infeasible") continue;
        const double ul = std::stod(row[c_ul]);
        if (ul >= 18.0 && ul <= 20.0) in_band = true;
        last_ul = ul;
    }
    const bool tail_ok = last_ul / 20.0 >= 0.9;
    report(6, in_band && tail_ok,
           "fig5 uplink split: band [18,20] hit = " + std::string(in_band ? "yes" : "no") +
               ", w_ul/W at grid top = " + fmt(last_ul / 20.0, 4));
}

void criterion7_scaling_law() {
    bool ok = true;
    std::string detail;
    for (double w : {20.0, 30.0}) {
        Scenario s;
        s.band.t_min = 0.04;
        s.band.w_mu_total = w;
        apply_setting(s, "area_in", 0.02);
        const ValidatedScenario vs = validate(s);
        const double predicted = 1.0 / required_density_exponent(vs);
        std::vector<double> xs, ys;
        for (int i = 0; i < 25; ++i) {
            const double lm = 10.0 * std::pow(1e3, i / 24.0);
            xs.push_back(std::log(lm));
            ys.push_back(std::log(required_mu_density(lm, vs)));
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sx += xs[i];
            sy += ys[i];
            sxx += xs[i] * xs[i];
            sxy += xs[i] * ys[i];
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        const double rel = std::abs(slope - predicted) / predicted;
        detail += "W=" + fmt(w, 3) + ": slope " + fmt(slope, 5) + " vs 1/exponent " +
                  fmt(predicted, 5) + " (rel " + fmt(rel, 2) + "); ";
        if (rel > 0.01) ok = false;
        if (w == 20.0 && !(slope > 1.0)) ok = false;
        if (w == 30.0 && !(slope < 1.0)) ok = false;
    }
    report(7, ok, detail + "lambda_mm in [10,1e4]");
}

void criterion8_spectrum_threshold() {
    const double value = required_spectrum(0.04, 500.0, 4.58, 5.76, 0.1, 0.02);
    const long double hp = 0.04L * 500.0L / 4.58L *
                           ((5.76L - 2.0L) * std::exp(-0.1L * 0.02L) + 2.0L);
    const double rel = std::abs(value - static_cast<double>(hp)) / static_cast<double>(hp);
    const bool ok = value > 20.0 && value < 30.0 && rel < 1e-12;
    report(8, ok,
           "required spectrum = " + fmt(value, 8) + " MHz, strictly in (20,30), high-precision rel err " +
               fmt(rel, 3));
}

void criterion9_fig6_s_effect() {
    FigureOptions opt;
    opt.timestamp = false;
    const FigureResult fig = run_figure("fig6", Scenario{}, {}, opt);
    const Table t = parse_csv(fig.csv);
    const int c_s = t.col("s_area");
    const int c_lm = t.col("lambda_mm");
    const int c_gbps = t.col("r_dl_gbps");
    const int c_status = t.col("status");
    auto crossing = [&](const std::string& s_tag) {
        double prev_lm = 0.0, prev_rate = -1.0;
        for (const auto& row : t.rows) {
            if (row[c_s] != s_tag || row[c_status] != "ok" || row[c_gbps].empty()) continue;
            const double lm = std::stod(row[c_lm]);
            const double rate = std::stod(row[c_gbps]);
            if (prev_rate > 0.0 && prev_rate < 1.0 && rate >= 1.0) {
                const double f = (std::log(1.0) - std::log(prev_rate)) /
                                 (std::log(rate) - std::log(prev_rate));
                return std::exp(std::log(prev_lm) + f * (std::log(lm) - std::log(prev_lm)));
            }
            prev_lm = lm;
            prev_rate = rate;
        }
        return -1.0;
    };
    const double lm_small = crossing("0.02");
    const double lm_large = crossing("0.2");
    const double factor = lm_large / lm_small;
    const bool ok = lm_small > 0.0 && lm_large > 0.0 && lm_small < lm_large && factor >= 4.0 &&
                    factor <= 10.0;
    report(9, ok,
           "1 Gbps-equivalent crossing: lambda_mm(S=0.02) = " + fmt(lm_small, 4) +
               ", lambda_mm(S=0.2) = " + fmt(lm_large, 4) + ", factor = " + fmt(factor, 4) +
               " in [4,10]");
}

void criterion10_determinism() {
    FigureOptions one;
    one.timestamp = false;
    one.grid = {0.1, 0.5};
    one.threads = 1;
    FigureOptions many = one;
    many.threads = 4;
    Scenario s;
    s.sim.window_side = 100.0;
    s.sim.seed = 2024;
    const FigureResult a = run_figure("fig4", s, {"trials=400"}, one);
    const FigureResult b = run_figure("fig4", s, {"trials=400"}, many);
    const bool ok = a.csv == b.csv && a.svg == b.svg;
    report(10, ok,
           std::string("fig4 re-run, 1 vs 4 workers: CSV ") +
               (a.csv == b.csv ? "byte-identical" : "DIFFERS") + ", SVG " +
               (a.svg == b.svg ? "byte-identical" : "DIFFERS"));
}

}  // namespace

int main() {
    std::printf("udnplan acceptance suite\n");
    criterion1_rho_oracle();
    criterion2_fig2_tightness();
    criterion3_bound_dominance();
    criterion4_reciprocity();
    criterion5_allocation_identities();
    criterion6_fig5_headline();
    criterion7_scaling_law();
    criterion8_spectrum_threshold();
    criterion9_fig6_s_effect();
    criterion10_determinism();
    std::printf("%s (%d failure%s), total %.1f s\n", g_failures == 0 ? "ALL PASS" : "FAILURES",
                g_failures, g_failures == 1 ? "" : "s", now_seconds());
    return g_failures == 0 ? 0 : 1;
}
