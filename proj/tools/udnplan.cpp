// udnplan: command-line front end for the ultra-dense mmWave-overlay toolkit.
// Subcommands: validate | estimate | sweep | figure | plan.
// Exit codes: 0 success, 2 usage/input error, 3 infeasible planning result.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "udn/analytic.hpp"
#include "udn/csv.hpp"
#include "udn/figures.hpp"
#include "udn/mc.hpp"
#include "udn/planner.hpp"
#include "udn/scenario.hpp"
#include "udn/sweep.hpp"
#include "udn/version.hpp"

namespace {

struct CommonOpts {
    std::string scenario_file;
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> trials;
    int threads = 0;
    std::string out_dir;
    bool no_timestamp = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--scenario", o.scenario_file, "scenario config file (key = value lines)");
    cmd->add_option("--set", o.sets, "override, e.g. --set lambda_mm=0.5 (repeatable)")
        ->take_all();
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--trials", o.trials, "Monte Carlo trials");
    cmd->add_option("--threads", o.threads, "worker threads (0 = auto; result is identical)");
    cmd->add_option("--out", o.out_dir, "output directory for artifacts");
    cmd->add_flag("--no-timestamp", o.no_timestamp, "suppress the SVG timestamp comment");
}

// defaults -> scenario file -> --set overrides (figure pins slot in between
// for the figure subcommand, see run_figure()).
udn::Scenario base_scenario(const CommonOpts& o, bool apply_sets = true) {
    udn::Scenario s;
    if (!o.scenario_file.empty()) s = udn::parse_scenario_file(o.scenario_file);
    if (apply_sets)
        for (const auto& kv : o.sets) udn::apply_override(s, kv);
    if (o.seed) s.sim.seed = *o.seed;
    if (o.trials) s.sim.trials = *o.trials;
    return s;
}

void print_warnings(const udn::ValidatedScenario& vs) {
    for (const auto& w : vs.warnings) std::cerr << "warning: " << w << "\n";
}

// CSV goes to stdout, or into --out DIR when given.
void emit_csv(const CommonOpts& o, const std::string& name, const std::string& csv) {
    if (o.out_dir.empty()) {
        std::cout << csv;
        return;
    }
    std::filesystem::create_directories(o.out_dir);
    const std::string path = o.out_dir + "/" + name;
    std::ofstream(path) << csv;
    std::cout << path << "\n";
}

int cmd_validate(const CommonOpts& o) {
    udn::Scenario s = base_scenario(o);
    auto violations = udn::validation_violations(s);
    if (!violations.empty()) {
        for (const auto& v : violations) std::cerr << "violation: " << v << "\n";
        return 2;
    }
    const udn::ValidatedScenario vs = udn::validate(s);
    print_warnings(vs);
    std::cout << "valid\n";
    std::cout << "area_in = " << udn::detail::format_double(vs.area_in) << "\n";
    std::cout << "outdoor_prob = " << udn::detail::format_double(vs.outdoor_prob) << "\n";
    std::cout << udn::serialize_scenario(s);
    return 0;
}

int cmd_estimate(const CommonOpts& o, const std::string& regime_name) {
    const udn::Regime regime = udn::regime_from_name(regime_name);
    udn::Scenario s = base_scenario(o);
    const udn::ValidatedScenario vs = udn::validate(s);
    print_warnings(vs);
    const udn::SeEstimate est = udn::estimate_regime(regime, vs, o.threads);
    if (!est.stderr_target_met)
        std::cerr << "warning: InsufficientTrials: stderr/mean above target "
                  << udn::detail::format_double(s.sim.rel_stderr_target) << "\n";
    if (est.eps_clamps > 0)
        std::cerr << "note: " << est.eps_clamps
                  << " link distance(s) clamped to the minimum-distance guard\n";
    double bound = -1.0;
    try {
        const udn::BoundValue b = udn::se_bound_for_regime(regime, vs);
        if (b.below_ud_threshold)
            std::cerr << "warning: bound evaluated below the ultra-dense threshold\n";
        bound = b.value;
    } catch (const udn::Error& e) {
        std::cerr << "warning: bound unavailable: " << e.what() << "\n";
    }
    udn::Csv csv;
    csv.comment(std::string("udnplan ") + udn::kVersion + " estimate");
    csv.comment("scenario: " + udn::scenario_echo(s));
    csv.header({"regime", "params_hash", "mean", "stderr", "ci_low", "ci_high", "zero_rate",
                "trials", "seed", "bound", "ratio"});
    // se_csv_row yields the first nine comma-separated columns.
    csv.raw_cells(udn::se_csv_row(est, s));
    if (bound >= 0.0) {
        csv.cell(bound);
        csv.cell(est.mean > 0.0 ? bound / est.mean : 0.0);
    } else {
        csv.cell(std::string_view(""));
        csv.cell(std::string_view(""));
    }
    csv.end_row();
    emit_csv(o, "estimate.csv", csv.str());
    return 0;
}

int cmd_sweep(const CommonOpts& o, const std::string& param, std::vector<double> grid,
              const std::string& regime_name, std::vector<std::string> outputs, bool crn) {
    udn::SweepSpec spec;
    spec.param = param;
    spec.grid = std::move(grid);
    spec.crn = crn;
    if (!regime_name.empty()) spec.regime = udn::regime_from_name(regime_name);
    for (const auto& out : outputs) {
        if (out == "mc") spec.mc = true;
        else if (out == "analytic") spec.analytic = true;
        else if (out == "planner") spec.planner = true;
        else throw udn::Error(udn::Errc::invalid_argument, "unknown output '" + out + "'");
    }
    udn::Scenario s = base_scenario(o);
    const std::string csv = udn::run_sweep(spec, s, o.threads);
    if (!o.out_dir.empty()) {
        std::filesystem::create_directories(o.out_dir);
        const std::string path = o.out_dir + "/sweep.csv";
        std::ofstream(path) << csv;
        std::cout << path << "\n";
    } else {
        std::cout << csv;
    }
    return 0;
}

int cmd_figure(const CommonOpts& o, const std::string& id, const std::vector<double>& grid,
               bool crn) {
    udn::Scenario s = base_scenario(o, /*apply_sets=*/false);
    std::vector<std::string> overrides = o.sets;
    if (o.seed) overrides.push_back("seed=" + std::to_string(*o.seed));
    if (o.trials) overrides.push_back("trials=" + std::to_string(*o.trials));
    udn::FigureOptions opt;
    opt.threads = o.threads;
    opt.timestamp = !o.no_timestamp;
    opt.grid = grid;
    opt.crn = crn;
    const udn::FigureResult fig = udn::run_figure(id, s, overrides, opt);
    const std::string dir = o.out_dir.empty() ? "." : o.out_dir;
    std::filesystem::create_directories(dir);
    const std::string csv_path = dir + "/" + fig.id + ".csv";
    const std::string svg_path = dir + "/" + fig.id + ".svg";
    std::ofstream(csv_path) << fig.csv;
    std::ofstream(svg_path) << fig.svg;
    std::cout << csv_path << "\n" << svg_path << "\n";
    return 0;
}

// One sampled deployment as deployment.csv (kind,x,y) and disks.csv (x,y,r),
// for visualization and debugging.
int cmd_dump(const CommonOpts& o) {
    udn::Scenario s = base_scenario(o);
    const udn::ValidatedScenario vs = udn::validate(s);
    print_warnings(vs);
    udn::Rng rng = udn::make_rng(udn::trial_seed(s.sim.seed, 0));
    const double L = s.sim.window_side;
    const udn::PointSet mm = udn::sample_ppp(s.dens.lambda_mm, L, udn::PointKind::mm_bs, rng);
    const udn::PointSet mu = udn::sample_ppp(s.dens.lambda_mu, L, udn::PointKind::mu_bs, rng);
    const udn::PointSet users = udn::sample_ppp(s.dens.lambda_u, L, udn::PointKind::user, rng);
    const udn::DiskSet disks = udn::sample_disks(s.dens.lambda_g, s.dens.radius_in, L, rng);

    udn::Csv points;
    points.comment("scenario: " + udn::scenario_echo(s));
    points.header({"kind", "x", "y"});
    auto put = [&](const udn::PointSet& set, const char* kind) {
        for (const udn::Vec2& p : set.points) points.row(std::string_view(kind), p.x, p.y);
    };
    put(mm, "mm_bs");
    put(mu, "mu_bs");
    put(users, "user");

    udn::Csv disk_csv;
    disk_csv.comment("scenario: " + udn::scenario_echo(s));
    disk_csv.comment("overlapping_pairs = " + std::to_string(disks.overlap_pairs(L)));
    disk_csv.header({"x", "y", "r"});
    for (const udn::Vec2& c : disks.centers) disk_csv.row(c.x, c.y, disks.radius);

    const std::string dir = o.out_dir.empty() ? "." : o.out_dir;
    std::filesystem::create_directories(dir);
    std::ofstream(dir + "/deployment.csv") << points.str();
    std::ofstream(dir + "/disks.csv") << disk_csv.str();
    std::cout << dir << "/deployment.csv\n" << dir << "/disks.csv\n";
    return 0;
}

int cmd_plan(const CommonOpts& o) {
    udn::Scenario s = base_scenario(o);
    const udn::ValidatedScenario vs = udn::validate(s);
    print_warnings(vs);
    const double gmu =
        udn::se_mu_bound(s.dens.lambda_mu, s.dens.lambda_u, s.radio.alpha_mu, s.ud_threshold).value;
    const double gmm = udn::planning_gamma_mm(vs, s.dens.lambda_mm);
    const udn::Allocation a = udn::allocate(s.band.w_mu_total, s.band.w_mm, s.band.t_min, gmu, gmm);
    const udn::RatePair r = udn::rates(a, s.band.w_mm, gmu, gmm);
    const double lmu_required = udn::required_mu_density(s.dens.lambda_mm, vs);
    udn::Csv csv;
    csv.comment(std::string("udnplan ") + udn::kVersion + " plan");
    csv.comment("scenario: " + udn::scenario_echo(s));
    csv.header({"lambda_mm", "lambda_mu", "lambda_mu_required", "gamma_mu", "gamma_mm", "w_ul",
                "w_dl", "feasible", "slack", "r_dl", "r_ul"});
    csv.row(s.dens.lambda_mm, s.dens.lambda_mu, lmu_required, gmu, gmm, a.w_ul, a.w_dl,
            a.feasible ? 1 : 0, a.slack, r.r_dl, r.r_ul);
    emit_csv(o, "plan.csv", csv.str());
    return a.feasible ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("udnplan ") + udn::kVersion +
                 " - simulator, closed-form bounds, and planner for mmWave-overlaid "
                 "ultra-dense cellular networks"};
    app.require_subcommand(1);
    app.fallthrough();

    CommonOpts o;
    std::string regime, param, figure_id;
    std::vector<double> grid;
    std::vector<std::string> outputs{"mc", "analytic"};
    bool crn = false;

    CLI::App* validate = app.add_subcommand("validate", "check a scenario and print derived fields");
    add_common(validate, o);

    CLI::App* estimate = app.add_subcommand("estimate", "Monte Carlo estimate + closed-form bound");
    add_common(estimate, o);
    estimate->add_option("--regime", regime, "mu_dl | mu_ul | mm_out | mm_in | mm")->required();

    CLI::App* sweep = app.add_subcommand("sweep", "sweep one scenario key over a grid");
    add_common(sweep, o);
    sweep->add_option("--param", param, "scenario key to sweep")->required();
    sweep->add_option("--grid", grid, "comma-separated grid values")->required()->delimiter(',');
    sweep->add_option("--regime", regime, "regime for mc/analytic outputs");
    sweep->add_option("--outputs", outputs, "subset of mc,analytic,planner")->delimiter(',');
    sweep->add_flag("--crn", crn, "common random numbers across grid points");

    CLI::App* figure = app.add_subcommand("figure", "produce a result figure (CSV + SVG)");
    add_common(figure, o);
    figure->add_option("id", figure_id, "fig2..fig7")->required();
    figure->add_option("--grid", grid, "override the x-axis density grid")->delimiter(',');
    figure->add_flag("--crn", crn, "common random numbers across grid points");

    CLI::App* plan = app.add_subcommand("plan", "bandwidth split and required density at the scenario");
    add_common(plan, o);

    CLI::App* dump = app.add_subcommand("dump", "write one sampled deployment as CSV");
    add_common(dump, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(validate)) return cmd_validate(o);
        if (app.got_subcommand(estimate)) return cmd_estimate(o, regime);
        if (app.got_subcommand(sweep)) return cmd_sweep(o, param, grid, regime, outputs, crn);
        if (app.got_subcommand(figure)) return cmd_figure(o, figure_id, grid, crn);
        if (app.got_subcommand(plan)) return cmd_plan(o);
        if (app.got_subcommand(dump)) return cmd_dump(o);
    } catch (const udn::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.code()) {
            case udn::Errc::infeasible: return 3;
            case udn::Errc::parse_error:
            case udn::Errc::unknown_key:
            case udn::Errc::invalid_argument:
            case udn::Errc::exponent_out_of_range:
            case udn::Errc::ratio_out_of_range:
            case udn::Errc::negative_density: return 2;
            default: return 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
