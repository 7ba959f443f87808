#pragma once

#include <cmath>
#include <ctime>
#include <string>
#include <vector>

#include "udn/analytic.hpp"
#include "udn/csv.hpp"
#include "udn/mc.hpp"
#include "udn/planner.hpp"
#include "udn/scenario.hpp"
#include "udn/svg.hpp"
#include "udn/sweep.hpp"
#include "udn/version.hpp"

namespace udn {

// Result figure artifact: the CSV is authoritative and fully deterministic;
// the SVG is a convenience rendering (identical up to the optional timestamp).
struct FigureResult {
    std::string id;
    std::string csv;
    std::string svg;
    std::uint64_t seed = 0;
};

struct FigureOptions {
    int threads = 0;
    bool timestamp = true;
    std::vector<double> grid;  // overrides the figure's default x grid
    bool crn = false;
};

inline const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids{"fig2", "fig3", "fig4", "fig5", "fig6", "fig7"};
    return ids;
}

namespace fig_detail {

inline std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] =
            lo * std::pow(hi / lo, n > 1 ? static_cast<double>(i) / (n - 1) : 0.0);
    return g;
}

inline std::string now_utc() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline void front_matter(Csv& csv, const std::string& id, const Scenario& s) {
    csv.comment(std::string("udnplan ") + kVersion + " figure " + id);
    csv.comment("scenario: " + scenario_echo(s));
}

inline void finish_svg(SvgPlot& plot, const FigureOptions& opt) {
    if (opt.timestamp) plot.set_timestamp(now_utc());
}

// Monte-Carlo-versus-bound figure body shared by fig2/fig3/fig4.
struct McBoundSeries {
    std::string label;
    std::vector<std::pair<double, double>> mc_pts;
    std::vector<std::pair<double, double>> bound_pts;
};

}  // namespace fig_detail

// fig2: uWave spectral efficiency vs lambda_mu for path-loss exponents
// {3,4,6}; simulation plus closed-form bound. Interference-limited setting
// (the uWave bound carries no noise term), hence the tiny sigma2 pin.
inline FigureResult run_fig2(Scenario s, const FigureOptions& opt) {
    s.radio.sigma2 = 1e-9;
    std::vector<double> grid = opt.grid;
    if (grid.empty())
        for (double ratio : {5.0, 7.5, 10.0, 15.0, 22.0, 33.0, 50.0}) grid.push_back(ratio * s.dens.lambda_u);
    Csv csv;
    fig_detail::front_matter(csv, "fig2", s);
    csv.header({"alpha_mu", "lambda_mu", "mc_mean", "mc_stderr", "ci_low", "ci_high", "zero_rate",
                "bound", "ratio", "trials", "seed"});
    SvgPlot plot("uWave spectral efficiency vs BS density", "lambda_mu", "nats/sec/Hz", true, false);
    std::vector<fig_detail::McBoundSeries> series;
    const std::vector<double> alphas{3.0, 4.0, 6.0};
    for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
        fig_detail::McBoundSeries ser;
        ser.label = "alpha=" + detail::format_double(alphas[ai]);
        for (std::size_t gi = 0; gi < grid.size(); ++gi) {
            Scenario p = s;
            p.radio.alpha_mu = alphas[ai];
            p.dens.lambda_mu = grid[gi];
            p.sim.seed = sweep_detail::point_seed(s.sim.seed, ai, gi, opt.crn);
            const ValidatedScenario vs = validate(p);
            const SeEstimate est = estimate_mu_dl(vs, opt.threads);
            const BoundValue bound =
                se_mu_bound(p.dens.lambda_mu, p.dens.lambda_u, p.radio.alpha_mu, p.ud_threshold);
            csv.row(p.radio.alpha_mu, p.dens.lambda_mu, est.mean, est.stderr_, est.ci_low,
                    est.ci_high, est.zero_rate, bound.value,
                    est.mean > 0.0 ? bound.value / est.mean : 0.0, est.n_trials, est.seed);
            ser.mc_pts.emplace_back(grid[gi], est.mean);
            ser.bound_pts.emplace_back(grid[gi], bound.value);
        }
        series.push_back(std::move(ser));
    }
    for (auto& ser : series) plot.add_series("MC " + ser.label, ser.mc_pts, false);
    for (auto& ser : series) plot.add_series("bound " + ser.label, ser.bound_pts, true);
    fig_detail::finish_svg(plot, opt);
    return {"fig2", csv.str(), plot.render(), s.sim.seed};
}

// fig3 / fig4: outdoor / indoor mmWave spectral efficiency vs lambda_mm.
inline FigureResult run_fig34(const std::string& id, Scenario s, const FigureOptions& opt) {
    const bool outdoor = id == "fig3";
    if (outdoor) s.radio.sigma2 = 1e-9;  // interference-limited outdoor analysis
    std::vector<double> grid = opt.grid;
    if (grid.empty()) {
        grid = fig_detail::log_grid(1.0, 500.0, 10);
        for (double& g : grid) g *= s.dens.lambda_u;
    }
    Csv csv;
    fig_detail::front_matter(csv, id, s);
    csv.header({"lambda_mm", "mc_mean", "mc_stderr", "ci_low", "ci_high", "zero_rate", "bound",
                "ratio", "trials", "seed"});
    SvgPlot plot(outdoor ? "Outdoor mmWave spectral efficiency" : "Indoor mmWave spectral efficiency",
                 "lambda_mm", "nats/sec/Hz", true, false);
    std::vector<std::pair<double, double>> mc_pts, bound_pts;
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        Scenario p = s;
        p.dens.lambda_mm = grid[gi];
        p.sim.seed = sweep_detail::point_seed(s.sim.seed, 0, gi, opt.crn);
        const ValidatedScenario vs = validate(p);
        const SeEstimate est =
            outdoor ? estimate_mm_out(vs, opt.threads) : estimate_mm_in(vs, opt.threads);
        csv.cell(p.dens.lambda_mm);
        csv.cell(est.mean);
        csv.cell(est.stderr_);
        csv.cell(est.ci_low);
        csv.cell(est.ci_high);
        csv.cell(est.zero_rate);
        double bound = -1.0;
        try {
            bound = outdoor ? se_mm_out_bound(p.dens.lambda_mm, p.dens.lambda_u,
                                              p.radio.alpha_mm_out, p.dens.lambda_g, vs.area_in,
                                              p.radio.theta, p.ud_threshold)
                                  .value
                            : se_mm_in_bound(p.dens.lambda_mm, p.radio.sigma2).value;
            csv.cell(bound);
        } catch (const Error&) {
            csv.cell(std::string_view(""));
        }
        if (bound >= 0.0 && est.mean > 0.0)
            csv.cell(bound / est.mean);
        else
            csv.cell(std::string_view(""));
        csv.cell(est.n_trials);
        csv.cell(est.seed);
        csv.end_row();
        mc_pts.emplace_back(grid[gi], est.mean);
        if (bound >= 0.0) bound_pts.emplace_back(grid[gi], bound);
    }
    plot.add_series("MC", mc_pts, false);
    plot.add_series("bound", bound_pts, true);
    fig_detail::finish_svg(plot, opt);
    return {id, csv.str(), plot.render(), s.sim.seed};
}

// fig5: optimal uplink/downlink uWave split vs lambda_mm (analytic).
inline FigureResult run_fig5(Scenario s, const FigureOptions& opt) {
    std::vector<double> grid = opt.grid;
    if (grid.empty()) {
        grid = fig_detail::log_grid(1.0, 500.0, 30);
        for (double& g : grid) g *= s.dens.lambda_u;
    }
    Csv csv;
    fig_detail::front_matter(csv, "fig5", s);
    csv.header({"lambda_mm", "gamma_mu", "gamma_mm", "w_ul", "w_dl", "feasible", "slack", "status"});
    SvgPlot plot("uWave bandwidth split vs mmWave density", "lambda_mm", "MHz", true, false);
    std::vector<std::pair<double, double>> ul_pts, dl_pts;
    const ValidatedScenario base_vs = validate(s);
    const double gmu =
        se_mu_bound(s.dens.lambda_mu, s.dens.lambda_u, s.radio.alpha_mu, s.ud_threshold).value;
    for (double lm : grid) {
        csv.cell(lm);
        try {
            const double gmm = planning_gamma_mm(base_vs, lm);
            const Allocation a = allocate(s.band.w_mu_total, s.band.w_mm, s.band.t_min, gmu, gmm);
            csv.cell(gmu);
            csv.cell(gmm);
            csv.cell(a.w_ul);
            csv.cell(a.w_dl);
            csv.cell(a.feasible ? 1 : 0);
            csv.cell(a.slack);
            csv.cell(std::string_view(a.feasible ? "ok" : "infeasible"));
            ul_pts.emplace_back(lm, a.w_ul);
            dl_pts.emplace_back(lm, a.w_dl);
        } catch (const Error& e) {
            for (int k = 0; k < 6; ++k) csv.cell(std::string_view(""));
            csv.cell(std::string_view(errc_name(e.code())));
        }
        csv.end_row();
    }
    plot.add_series("uplink W_ul*", ul_pts, false);
    plot.add_series("downlink W_dl*", dl_pts, false);
    fig_detail::finish_svg(plot, opt);
    return {"fig5", csv.str(), plot.render(), s.sim.seed};
}

namespace fig_detail {

// Documented lambda_mu scan for fig6: this figure's setting leaves lambda_mu
// free, so pick the smallest lambda_u * 2^k whose uWave efficiency keeps the
// uplink constraint feasible at the 1 Gbps-equivalent crossing, i.e.
// gamma_mu >= T * R_target / W. Reported in the CSV front matter.
inline double fig6_lambda_mu_scan(const Scenario& s) {
    if (s.band.t_min <= 0.0) return s.dens.lambda_mu;
    if (!(s.band.w_mu_total > 0.0))
        throw Error(Errc::domain_error, "fig6 needs w_mu_total > 0");
    const double target = s.band.t_min * kGbpsEquivMnats / s.band.w_mu_total;
    double lm = s.dens.lambda_u > 0.0 ? s.dens.lambda_u : 0.01;
    for (int k = 0; k < 64; ++k) {
        if (se_mu_bound(lm, s.dens.lambda_u, s.radio.alpha_mu, s.ud_threshold).value >= target)
            return lm;
        lm *= 2.0;
    }
    throw Error(Errc::no_solution, "fig6 lambda_mu scan failed");
}

}  // namespace fig_detail

// fig6: maximum downlink rate with and without the uplink constraint, for
// indoor areas S in {0.02, 0.2}.
inline FigureResult run_fig6(Scenario s, const FigureOptions& opt) {
    std::vector<double> grid = opt.grid;
    if (grid.empty()) {
        grid = fig_detail::log_grid(1.0, 500.0, 60);
        for (double& g : grid) g *= s.dens.lambda_u;
    }
    const double lambda_mu_used = fig_detail::fig6_lambda_mu_scan(s);
    Csv csv;
    fig_detail::front_matter(csv, "fig6", s);
    csv.comment("lambda_mu_scan: using lambda_mu = " + detail::format_double(lambda_mu_used));
    csv.comment("rate unit: Mnats/s; gbps column = rate / " + detail::format_double(kGbpsEquivMnats));
    csv.header({"s_area", "lambda_mm", "lambda_mu_used", "gamma_mu", "gamma_mm", "r_dl",
                "r_dl_unconstrained", "r_dl_gbps", "r_dl_unconstrained_gbps", "feasible", "status"});
    SvgPlot plot("Max downlink rate vs mmWave density (T with/without)", "lambda_mm", "Mnats/s",
                 true, true);
    const std::vector<double> s_areas{0.02, 0.2};
    std::vector<std::vector<std::pair<double, double>>> con(s_areas.size()), unc(s_areas.size());
    const double gmu =
        se_mu_bound(lambda_mu_used, s.dens.lambda_u, s.radio.alpha_mu, s.ud_threshold).value;
    for (std::size_t si = 0; si < s_areas.size(); ++si) {
        Scenario p = s;
        p.dens.lambda_mu = lambda_mu_used;
        apply_setting(p, "area_in", s_areas[si]);
        const ValidatedScenario vs = validate(p);
        for (double lm : grid) {
            csv.cell(s_areas[si]);
            csv.cell(lm);
            csv.cell(lambda_mu_used);
            try {
                const double gmm = planning_gamma_mm(vs, lm);
                const Allocation a = allocate(p.band.w_mu_total, p.band.w_mm, p.band.t_min, gmu, gmm);
                const double r_unc = p.band.w_mu_total * gmu + p.band.w_mm * gmm;
                csv.cell(gmu);
                csv.cell(gmm);
                if (a.feasible) {
                    const double r_con = rates(a, p.band.w_mm, gmu, gmm).r_dl;
                    csv.cell(r_con);
                    csv.cell(r_unc);
                    csv.cell(r_con / kGbpsEquivMnats);
                    csv.cell(r_unc / kGbpsEquivMnats);
                    csv.cell(1);
                    csv.cell(std::string_view("ok"));
                    con[si].emplace_back(lm, r_con);
                } else {
                    csv.cell(std::string_view(""));
                    csv.cell(r_unc);
                    csv.cell(std::string_view(""));
                    csv.cell(r_unc / kGbpsEquivMnats);
                    csv.cell(0);
                    csv.cell(std::string_view("infeasible"));
                }
                unc[si].emplace_back(lm, r_unc);
            } catch (const Error& e) {
                for (int k = 0; k < 7; ++k) csv.cell(std::string_view(""));
                csv.cell(std::string_view(errc_name(e.code())));
            }
            csv.end_row();
        }
    }
    for (std::size_t si = 0; si < s_areas.size(); ++si) {
        plot.add_series("S=" + detail::format_double(s_areas[si]) + " constrained", con[si], false);
        plot.add_series("S=" + detail::format_double(s_areas[si]) + " unconstrained", unc[si], true);
    }
    fig_detail::finish_svg(plot, opt);
    return {"fig6", csv.str(), plot.render(), s.sim.seed};
}

// fig7: minimum required lambda_mu vs lambda_mm for W in {20, 30} MHz.
inline FigureResult run_fig7(Scenario s, const FigureOptions& opt) {
    std::vector<double> grid = opt.grid;
    if (grid.empty()) grid = fig_detail::log_grid(10.0, 1e4, 25);
    Csv csv;
    fig_detail::front_matter(csv, "fig7", s);
    csv.header({"w_mu_total", "lambda_mm", "lambda_mu_required", "w_ul", "w_dl", "feasible", "r_dl",
                "r_ul"});
    SvgPlot plot("Required uWave BS density vs mmWave density", "lambda_mm", "lambda_mu", true, true);
    const std::vector<double> ws{20.0, 30.0};
    for (double w : ws) {
        Scenario p = s;
        p.band.w_mu_total = w;
        const ValidatedScenario vs = validate(p);
        std::vector<std::pair<double, double>> pts;
        for (double lm : grid) {
            const double lmu = required_mu_density(lm, vs);
            ValidatedScenario at = vs;
            at.s.dens.lambda_mm = lm;
            const double gmu =
                se_mu_bound(lmu, p.dens.lambda_u, p.radio.alpha_mu, p.ud_threshold).value;
            const double gmm = se_mm_bound(at).value;
            const Allocation a = allocate(w, p.band.w_mm, p.band.t_min, gmu, gmm);
            const RatePair r = rates(a, p.band.w_mm, gmu, gmm);
            csv.row(w, lm, lmu, a.w_ul, a.w_dl, a.feasible ? 1 : 0, r.r_dl, r.r_ul);
            pts.emplace_back(lm, lmu);
        }
        plot.add_series("W=" + detail::format_double(w) + " MHz", pts, false);
    }
    fig_detail::finish_svg(plot, opt);
    return {"fig7", csv.str(), plot.render(), s.sim.seed};
}

// Figure pins: each figure id fixes the parameters its scenario calls for;
// later --set overrides still win (applied by the caller after the pins).
inline void apply_figure_pins(const std::string& id, Scenario& s) {
    // MC trial pins: smallest round count keeping the CI half-width under 2%
    // of the mean at each figure's densest grid point.
    if (id == "fig2") {
        s.sim.trials = 3000;
    } else if (id == "fig3") {
        s.sim.trials = 2000;
    } else if (id == "fig4") {
        s.sim.trials = 3000;
    } else if (id == "fig5") {
        s.band.t_min = 0.03;
    } else if (id == "fig6") {
        s.band.t_min = 0.1;
    } else if (id == "fig7") {
        s.band.t_min = 0.04;
        apply_setting(s, "area_in", 0.02);
    } else {
        throw Error(Errc::invalid_argument, "unknown figure id '" + id + "'");
    }
}

inline FigureResult run_figure(const std::string& id, Scenario s,
                               const std::vector<std::string>& overrides,
                               const FigureOptions& opt = {}) {
    apply_figure_pins(id, s);
    for (const std::string& kv : overrides) apply_override(s, kv);
    if (id == "fig2") return run_fig2(s, opt);
    if (id == "fig3" || id == "fig4") return run_fig34(id, s, opt);
    if (id == "fig5") return run_fig5(s, opt);
    if (id == "fig6") return run_fig6(s, opt);
    if (id == "fig7") return run_fig7(s, opt);
    throw Error(Errc::invalid_argument, "unknown figure id '" + id + "'");
}

}  // namespace udn
