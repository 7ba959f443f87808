#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "udn/errors.hpp"

namespace udn {

// All densities are points per unit area of an abstract normalized plane;
// they are comparable only relative to each other. Spectral efficiencies are
// in nats/sec/Hz, bandwidths in MHz, angles stored in radians.

struct RadioParams {
    double alpha_mu = 4.58;                               // uWave path-loss exponent, > 2
    double alpha_mm_out = 5.76;                           // outdoor mmWave exponent, > 2
    double alpha_mm_in = 2.0;                             // indoor mmWave exponent, fixed at 2
    double theta = 10.0 * std::numbers::pi / 180.0;       // main-lobe beam width, radians
    double sigma2 = 1.0;                                  // noise power (unity tx power)

    bool operator==(const RadioParams&) const = default;
};

struct Densities {
    double lambda_mu = 1.0;    // uWave BS density
    double lambda_mm = 1.0;    // mmWave BS density
    double lambda_u = 0.02;    // user density
    double lambda_g = 0.1;     // indoor-region center density
    double radius_in = 0.07978845608028654;  // indoor disk radius R; default gives S = pi R^2 = 0.02

    bool operator==(const Densities&) const = default;
};

struct BandPlan {
    double w_mu_total = 20.0;  // total uWave bandwidth W (MHz)
    double w_mm = 500.0;       // mmWave bandwidth Wm (MHz)
    double t_min = 0.03;       // minimum uplink/downlink rate ratio T, 0 <= T <= 1

    bool operator==(const BandPlan&) const = default;
};

struct SimControl {
    double window_side = 100.0;       // torus window side length
    std::int64_t trials = 10000;      // Monte Carlo trials
    std::uint64_t seed = 1;           // master seed
    double ci_level = 0.95;           // confidence level
    double rel_stderr_target = 0.02;  // stderr/mean target; exceeding it is a warning

    bool operator==(const SimControl&) const = default;
};

struct Scenario {
    RadioParams radio;
    Densities dens;
    BandPlan band;
    SimControl sim;
    double ud_threshold = 5.0;  // lambda_bs/lambda_u below this flags "not ultra-dense"

    bool operator==(const Scenario&) const = default;
};

// Scenario whose invariants have been checked, with derived fields attached.
struct ValidatedScenario {
    Scenario s;
    double area_in = 0.0;       // S = pi R^2
    double outdoor_prob = 1.0;  // exp(-lambda_g * S)
    std::vector<std::string> warnings;
};

namespace detail {

inline constexpr double kAlphaMargin = 1e-9;  // rho integral diverges at alpha = 2
inline constexpr double kDegPerRad = 180.0 / std::numbers::pi;

inline double parse_double(std::string_view text, int line, const std::string& key) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw Error(Errc::parse_error,
                    "line " + std::to_string(line) + ": bad numeric value for '" + key + "'");
    return value;
}

template <class Int>
Int parse_int(std::string_view text, int line, const std::string& key) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    Int value = 0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw Error(Errc::parse_error,
                    "line " + std::to_string(line) + ": bad integer value for '" + key + "'");
    return value;
}

inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

// Degrees value whose parse (deg * pi/180) reproduces `rad` bit-exactly, if
// one exists near rad * 180/pi. Serialization prefers degrees (config files
// quote beam widths in degrees); falls back to a raw radian key otherwise.
inline std::optional<double> degrees_for_radians(double rad) {
    const double k = std::numbers::pi / 180.0;
    const double deg0 = rad / k;
    if (deg0 * k == rad) return deg0;
    double up = deg0, down = deg0;
    for (int step = 0; step < 8; ++step) {
        up = std::nextafter(up, std::numeric_limits<double>::infinity());
        if (up * k == rad) return up;
        down = std::nextafter(down, -std::numeric_limits<double>::infinity());
        if (down * k == rad) return down;
    }
    return std::nullopt;
}

}  // namespace detail

// Applies `key = value` to a scenario from config/override text. Angles
// arrive in degrees (theta_deg) or radians (theta_rad); the disk size as
// radius_in or area_in. seed and trials parse as exact integers. Throws
// Errc::unknown_key for unrecognized keys.
inline void apply_setting_text(Scenario& s, const std::string& key, std::string_view value,
                               int line = 0);

// Numeric-valued variant used programmatically (sweeps over scenario keys).
inline void apply_setting(Scenario& s, const std::string& key, double v, int line = 0) {
    using std::numbers::pi;
    if (key == "alpha_mu") s.radio.alpha_mu = v;
    else if (key == "alpha_mm_out") s.radio.alpha_mm_out = v;
    else if (key == "alpha_mm_in") s.radio.alpha_mm_in = v;
    else if (key == "theta_deg") s.radio.theta = v * (pi / 180.0);
    else if (key == "theta_rad") s.radio.theta = v;
    else if (key == "sigma2") s.radio.sigma2 = v;
    else if (key == "lambda_mu") s.dens.lambda_mu = v;
    else if (key == "lambda_mm") s.dens.lambda_mm = v;
    else if (key == "lambda_u") s.dens.lambda_u = v;
    else if (key == "lambda_g") s.dens.lambda_g = v;
    else if (key == "radius_in") s.dens.radius_in = v;
    else if (key == "area_in") s.dens.radius_in = (v < 0.0) ? -1.0 : std::sqrt(v / pi);
    else if (key == "w_mu_total") s.band.w_mu_total = v;
    else if (key == "w_mm") s.band.w_mm = v;
    else if (key == "t_min") s.band.t_min = v;
    else if (key == "window_side") s.sim.window_side = v;
    else if (key == "trials") s.sim.trials = static_cast<std::int64_t>(v);
    else if (key == "seed") s.sim.seed = static_cast<std::uint64_t>(v);
    else if (key == "ci_level") s.sim.ci_level = v;
    else if (key == "rel_stderr_target") s.sim.rel_stderr_target = v;
    else if (key == "ud_threshold") s.ud_threshold = v;
    else
        throw Error(Errc::unknown_key,
                    (line > 0 ? "line " + std::to_string(line) + ": " : "") + "'" + key + "'");
}

inline void apply_setting_text(Scenario& s, const std::string& key, std::string_view value,
                               int line) {
    if (key == "seed")
        s.sim.seed = detail::parse_int<std::uint64_t>(value, line, key);
    else if (key == "trials")
        s.sim.trials = detail::parse_int<std::int64_t>(value, line, key);
    else
        apply_setting(s, key, detail::parse_double(value, line, key), line);
}

// Parses `--set key=value` override syntax.
inline void apply_override(Scenario& s, const std::string& kv) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
        throw Error(Errc::parse_error, "override '" + kv + "' is not of the form key=value");
    std::string key(detail::trim(std::string_view(kv).substr(0, eq)));
    std::string_view val = detail::trim(std::string_view(kv).substr(eq + 1));
    apply_setting_text(s, key, val);
}

// Parses the plain-text config format: one `key = value` per line, `#`
// comments. Unspecified keys keep their defaults. No validation here.
inline Scenario parse_scenario_text(std::string_view text) {
    Scenario s;
    bool saw_theta_deg = false, saw_theta_rad = false;
    bool saw_radius = false, saw_area = false;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos
                                                                              : nl - pos);
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw Error(Errc::parse_error, "line " + std::to_string(line_no) + ": expected key = value");
        std::string key(detail::trim(line.substr(0, eq)));
        std::string_view val = detail::trim(line.substr(eq + 1));
        if (key == "theta_deg") saw_theta_deg = true;
        if (key == "theta_rad") saw_theta_rad = true;
        if (key == "radius_in") saw_radius = true;
        if (key == "area_in") saw_area = true;
        if ((saw_theta_deg && saw_theta_rad) || (saw_radius && saw_area))
            throw Error(Errc::parse_error, "line " + std::to_string(line_no) + ": '" + key +
                                               "' conflicts with an earlier alternate key");
        apply_setting_text(s, key, val, line_no);
    }
    return s;
}

inline Scenario parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::parse_error, "cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str());
}

// Canonical serialization; parse_scenario_text() of the result reproduces
// the scenario field-for-field (bit-exact doubles).
inline std::string serialize_scenario(const Scenario& s) {
    std::ostringstream out;
    auto put = [&](const char* key, double v) { out << key << " = " << detail::format_double(v) << "\n"; };
    put("alpha_mu", s.radio.alpha_mu);
    put("alpha_mm_out", s.radio.alpha_mm_out);
    put("alpha_mm_in", s.radio.alpha_mm_in);
    if (auto deg = detail::degrees_for_radians(s.radio.theta))
        put("theta_deg", *deg);
    else
        put("theta_rad", s.radio.theta);
    put("sigma2", s.radio.sigma2);
    put("lambda_mu", s.dens.lambda_mu);
    put("lambda_mm", s.dens.lambda_mm);
    put("lambda_u", s.dens.lambda_u);
    put("lambda_g", s.dens.lambda_g);
    put("radius_in", s.dens.radius_in);
    put("w_mu_total", s.band.w_mu_total);
    put("w_mm", s.band.w_mm);
    put("t_min", s.band.t_min);
    put("window_side", s.sim.window_side);
    out << "trials = " << s.sim.trials << "\n";
    out << "seed = " << s.sim.seed << "\n";
    put("ci_level", s.sim.ci_level);
    put("rel_stderr_target", s.sim.rel_stderr_target);
    put("ud_threshold", s.ud_threshold);
    return out.str();
}

// Single-line `k=v k=v ...` echo used for CSV provenance headers.
inline std::string scenario_echo(const Scenario& s) {
    std::string text = serialize_scenario(s);
    std::string echo;
    for (char c : text) {
        if (c == '\n') { echo += ' '; continue; }
        if (c == ' ') continue;
        echo += c;
    }
    if (!echo.empty() && echo.back() == ' ') echo.pop_back();
    return echo;
}

inline std::vector<std::string> validation_violations(const Scenario& s) {
    using detail::kAlphaMargin;
    std::vector<std::string> v;
    auto bad = [&](Errc code, const std::string& msg) {
        v.push_back(std::string(errc_name(code)) + ": " + msg);
    };
    if (!(s.radio.alpha_mu > 2.0 + kAlphaMargin))
        bad(Errc::exponent_out_of_range, "alpha_mu must exceed 2 (interference integral diverges)");
    if (!(s.radio.alpha_mm_out > 2.0 + kAlphaMargin))
        bad(Errc::exponent_out_of_range, "alpha_mm_out must exceed 2");
    if (s.radio.alpha_mm_in != 2.0)
        bad(Errc::exponent_out_of_range, "alpha_mm_in is fixed at 2 (in-room free-space model)");
    if (!(s.radio.theta > 0.0 && s.radio.theta <= 2.0 * std::numbers::pi))
        bad(Errc::domain_error, "theta must lie in (0, 2*pi]");
    if (!(s.radio.sigma2 > 0.0)) bad(Errc::domain_error, "sigma2 must be positive");
    if (s.dens.lambda_mu < 0.0) bad(Errc::negative_density, "lambda_mu");
    if (s.dens.lambda_mm < 0.0) bad(Errc::negative_density, "lambda_mm");
    if (s.dens.lambda_u < 0.0) bad(Errc::negative_density, "lambda_u");
    if (s.dens.lambda_g < 0.0) bad(Errc::negative_density, "lambda_g");
    if (s.dens.radius_in < 0.0) bad(Errc::negative_density, "radius_in (or area_in)");
    if (!(s.band.w_mu_total >= 0.0)) bad(Errc::domain_error, "w_mu_total must be >= 0");
    if (!(s.band.w_mm >= 0.0)) bad(Errc::domain_error, "w_mm must be >= 0");
    if (!(s.band.t_min >= 0.0 && s.band.t_min <= 1.0))
        bad(Errc::ratio_out_of_range, "t_min must lie in [0, 1]");
    if (!(s.sim.window_side > 0.0)) bad(Errc::domain_error, "window_side must be positive");
    if (s.sim.trials < 1) bad(Errc::domain_error, "trials must be >= 1");
    if (!(s.sim.ci_level > 0.0 && s.sim.ci_level < 1.0))
        bad(Errc::domain_error, "ci_level must lie in (0, 1)");
    if (s.dens.radius_in >= s.sim.window_side / 8.0)
        bad(Errc::domain_error, "radius_in must be < window_side/8 for the torus disk logic");
    return v;
}

// Checks all invariants and populates derived fields. Idempotent. Conditions
// that merely leave the ultra-dense regime are warnings, not errors.
inline ValidatedScenario validate(const Scenario& s) {
    auto violations = validation_violations(s);
    if (!violations.empty()) {
        std::string msg = violations.front();
        for (std::size_t i = 1; i < violations.size(); ++i) msg += "; " + violations[i];
        // First violation's code determines the thrown code.
        for (Errc c : {Errc::exponent_out_of_range, Errc::negative_density, Errc::ratio_out_of_range,
                       Errc::domain_error})
            if (violations.front().rfind(errc_name(c), 0) == 0) throw Error(c, msg);
        throw Error(Errc::domain_error, msg);
    }
    ValidatedScenario vs;
    vs.s = s;
    vs.area_in = std::numbers::pi * s.dens.radius_in * s.dens.radius_in;
    vs.outdoor_prob = std::exp(-s.dens.lambda_g * vs.area_in);
    if (s.dens.lambda_u > 0.0) {
        if (s.dens.lambda_mu / s.dens.lambda_u < s.ud_threshold)
            vs.warnings.push_back("lambda_mu/lambda_u below ultra-dense threshold");
        if (s.dens.lambda_mm / s.dens.lambda_u < s.ud_threshold)
            vs.warnings.push_back("lambda_mm/lambda_u below ultra-dense threshold");
    }
    return vs;
}

// Parse + validate in one step.
inline Scenario load_scenario(const std::string& path) {
    Scenario s = parse_scenario_file(path);
    validate(s);
    return s;
}

}  // namespace udn
