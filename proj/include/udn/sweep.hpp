#pragma once

#include <optional>
#include <string>
#include <vector>

#include "udn/analytic.hpp"
#include "udn/csv.hpp"
#include "udn/mc.hpp"
#include "udn/planner.hpp"
#include "udn/scenario.hpp"
#include "udn/version.hpp"

namespace udn {

struct SweepSpec {
    std::string param;             // scenario key to sweep
    std::vector<double> grid;      // strictly increasing
    std::optional<Regime> regime;  // required for mc / analytic outputs
    bool mc = false;
    bool analytic = false;
    bool planner = false;
    bool crn = false;  // share the master seed across grid points
};

namespace sweep_detail {

inline std::uint64_t point_seed(std::uint64_t master, std::size_t series, std::size_t point,
                                bool crn) {
    if (crn) return master;
    return splitmix64(master ^ splitmix64(0x51EEDull + series * 1000003ull + point));
}

}  // namespace sweep_detail

inline void validate_spec(const SweepSpec& spec) {
    if (spec.grid.empty()) throw Error(Errc::invalid_argument, "sweep grid is empty");
    for (std::size_t i = 1; i < spec.grid.size(); ++i)
        if (!(spec.grid[i] > spec.grid[i - 1]))
            throw Error(Errc::invalid_argument, "sweep grid must be strictly increasing");
    if ((spec.mc || spec.analytic) && !spec.regime)
        throw Error(Errc::invalid_argument, "mc/analytic sweep outputs need a regime");
    if (!spec.mc && !spec.analytic && !spec.planner)
        throw Error(Errc::invalid_argument, "sweep requests no outputs");
}

// One CSV row per grid point; missing values (domain errors, zero means)
// stay as empty cells rather than fabricated numbers.
inline std::string run_sweep(const SweepSpec& spec, const Scenario& base, int threads = 0) {
    validate_spec(spec);
    Csv csv;
    csv.comment(std::string("udnplan ") + kVersion + " sweep");
    csv.comment("param = " + spec.param);
    if (spec.regime) csv.comment(std::string("regime = ") + regime_name(*spec.regime));
    csv.comment("scenario: " + scenario_echo(base));

    std::vector<std::string> cols{spec.param};
    if (spec.mc) for (const char* c : {"mean", "stderr", "ci_low", "ci_high", "zero_rate", "trials", "seed"})
        cols.push_back(c);
    if (spec.analytic) cols.push_back("bound");
    if (spec.mc && spec.analytic) cols.push_back("ratio");
    if (spec.planner)
        for (const char* c : {"gamma_mu", "gamma_mm", "w_ul", "w_dl", "feasible", "slack", "r_dl",
                              "r_ul", "status"})
            cols.push_back(c);
    csv.header(cols);

    for (std::size_t i = 0; i < spec.grid.size(); ++i) {
        Scenario s = base;
        apply_setting(s, spec.param, spec.grid[i]);
        s.sim.seed = sweep_detail::point_seed(base.sim.seed, 0, i, spec.crn);
        const ValidatedScenario vs = validate(s);
        csv.cell(spec.grid[i]);
        double mc_mean = 0.0;
        if (spec.mc) {
            const SeEstimate est = estimate_regime(*spec.regime, vs, threads);
            mc_mean = est.mean;
            csv.cell(est.mean);
            csv.cell(est.stderr_);
            csv.cell(est.ci_low);
            csv.cell(est.ci_high);
            csv.cell(est.zero_rate);
            csv.cell(est.n_trials);
            csv.cell(est.seed);
        }
        double bound = -1.0;
        if (spec.analytic) {
            try {
                bound = se_bound_for_regime(*spec.regime, vs).value;
                csv.cell(bound);
            } catch (const Error&) {
                csv.cell(std::string_view(""));
                bound = -1.0;
            }
        }
        if (spec.mc && spec.analytic) {
            if (bound >= 0.0 && mc_mean > 0.0)
                csv.cell(bound / mc_mean);
            else
                csv.cell(std::string_view(""));
        }
        if (spec.planner) {
            try {
                const double gmu = se_mu_bound(s.dens.lambda_mu, s.dens.lambda_u, s.radio.alpha_mu,
                                               s.ud_threshold)
                                       .value;
                const double gmm = planning_gamma_mm(vs, s.dens.lambda_mm);
                const Allocation a = allocate(s.band.w_mu_total, s.band.w_mm, s.band.t_min, gmu, gmm);
                const RatePair r = rates(a, s.band.w_mm, gmu, gmm);
                csv.cell(gmu);
                csv.cell(gmm);
                csv.cell(a.w_ul);
                csv.cell(a.w_dl);
                csv.cell(a.feasible ? 1 : 0);
                csv.cell(a.slack);
                csv.cell(r.r_dl);
                csv.cell(r.r_ul);
                csv.cell(std::string_view(a.feasible ? "ok" : "infeasible"));
            } catch (const Error& e) {
                for (int k = 0; k < 8; ++k) csv.cell(std::string_view(""));
                csv.cell(std::string_view(errc_name(e.code())));
            }
        }
        csv.end_row();
    }
    return csv.str();
}

}  // namespace udn
