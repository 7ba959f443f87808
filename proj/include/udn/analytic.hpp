#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "udn/errors.hpp"
#include "udn/quadrature.hpp"
#include "udn/scenario.hpp"

namespace udn {

enum class Regime { mu_dl, mu_ul, mm_out, mm_in, mm };

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::mu_dl: return "mu_dl";
        case Regime::mu_ul: return "mu_ul";
        case Regime::mm_out: return "mm_out";
        case Regime::mm_in: return "mm_in";
        case Regime::mm: return "mm";
    }
    return "?";
}

inline Regime regime_from_name(const std::string& name) {
    for (Regime r : {Regime::mu_dl, Regime::mu_ul, Regime::mm_out, Regime::mm_in, Regime::mm})
        if (name == regime_name(r)) return r;
    throw Error(Errc::invalid_argument, "unknown regime '" + name + "'");
}

// Closed-form spectral-efficiency lower bound, with the inputs it was
// evaluated from echoed for provenance.
struct BoundValue {
    double value = 0.0;  // nats/sec/Hz
    Regime regime = Regime::mu_dl;
    double lambda_bs = 0.0;
    double lambda_u = 0.0;
    double alpha = 0.0;
    bool below_ud_threshold = false;  // inputs outside the bound's dense regime
};

// rho(alpha) = integral_0^inf du / (1 + u^(alpha/2)). Interference scaling
// constant of the nearest-association bounds. Diverges for alpha <= 2.
//
// Reference value via the reflection identity int_0^inf dx/(1+x^s) =
// (pi/s)/sin(pi/s), s > 1.
inline double rho_closed_form(double alpha) {
    if (!(alpha > 2.0 + detail::kAlphaMargin))
        throw Error(Errc::exponent_out_of_range, "rho requires alpha > 2");
    const double s = alpha / 2.0;
    return (std::numbers::pi / s) / std::sin(std::numbers::pi / s);
}

// Quadrature evaluation, split at u = 1. The tail uses u = e^t,
//   int_1^inf du/(1+u^s) = int_0^inf e^(-(s-1)t) / (1 + e^(-st)) dt,
// quadrature on t in [0,20] plus the geometric-series remainder
//   sum_k (-1)^k e^(-((s-1)+ks) 20) / ((s-1)+ks),
// which stays accurate uniformly in s > 1 (the decay scale 1/(s-1) blows up
// near the divergence and would starve a direct quadrature). Cross-checked
// against the reflection closed form on every call.
inline double rho(double alpha) {
    if (!(alpha > 2.0 + detail::kAlphaMargin))
        throw Error(Errc::exponent_out_of_range, "rho requires alpha > 2");
    const double s = alpha / 2.0;
    const double head = integrate([s](double u) { return 1.0 / (1.0 + std::pow(u, s)); }, 0.0, 1.0);
    constexpr double T = 20.0;
    const double body = integrate(
        [s](double t) { return std::exp(-(s - 1.0) * t) / (1.0 + std::exp(-s * t)); }, 0.0, T);
    double remainder = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double rate = (s - 1.0) + k * s;
        remainder += (k % 2 == 0 ? 1.0 : -1.0) * std::exp(-rate * T) / rate;
    }
    const double value = head + body + remainder;
    const double ref = rho_closed_form(alpha);
    if (std::abs(value - ref) > 1e-9 * std::max(1.0, std::abs(ref)))
        throw Error(Errc::domain_error, "rho quadrature disagrees with reflection formula");
    return value;
}

// Probability that a BS serves at least one user under nearest association:
// p_a = 1 - (1 + lambda_u / (3.5 lambda_bs))^{-3.5}.
inline double active_probability(double lambda_u, double lambda_bs) {
    if (!(lambda_bs > 0.0)) throw Error(Errc::domain_error, "active_probability needs lambda_bs > 0");
    if (lambda_u < 0.0) throw Error(Errc::negative_density, "active_probability lambda_u");
    if (lambda_u == 0.0) return 0.0;
    return 1.0 - std::pow(1.0 + lambda_u / (3.5 * lambda_bs), -3.5);
}

// First-order expansion of the above, valid for lambda_bs >> lambda_u.
inline double active_probability_taylor(double lambda_u, double lambda_bs) {
    if (!(lambda_bs > 0.0)) throw Error(Errc::domain_error, "active_probability needs lambda_bs > 0");
    return lambda_u / lambda_bs;
}

// uWave uplink/downlink bound: log(1 + [lambda_mu / (rho lambda_u)]^(alpha/2)).
// Depends on the densities only through their ratio.
inline BoundValue se_mu_bound(double lambda_mu, double lambda_u, double alpha_mu,
                              double ud_threshold = 5.0) {
    if (!(lambda_mu > 0.0)) throw Error(Errc::domain_error, "se_mu_bound needs lambda_mu > 0");
    if (!(lambda_u > 0.0)) throw Error(Errc::domain_error, "se_mu_bound needs lambda_u > 0");
    BoundValue b;
    b.regime = Regime::mu_dl;
    b.lambda_bs = lambda_mu;
    b.lambda_u = lambda_u;
    b.alpha = alpha_mu;
    b.below_ud_threshold = lambda_mu / lambda_u < ud_threshold;
    const double ratio = lambda_mu / (rho(alpha_mu) * lambda_u);
    b.value = std::log1p(std::pow(ratio, alpha_mu / 2.0));
    return b;
}

// Outdoor mmWave bound:
//   (1 - sqrt(S/lambda_m)) * log(1 + (2 pi/theta) [e^(lambda_g S) lambda_m /
//   (rho_m lambda_u)]^(alpha_m/2)),
// the outer exponent applied to the logarithm. Requires lambda_m > S.
inline BoundValue se_mm_out_bound(double lambda_mm, double lambda_u, double alpha_mm,
                                  double lambda_g, double area_in, double theta,
                                  double ud_threshold = 5.0) {
    if (!(lambda_mm > 0.0)) throw Error(Errc::domain_error, "se_mm_out_bound needs lambda_mm > 0");
    if (!(lambda_u > 0.0)) throw Error(Errc::domain_error, "se_mm_out_bound needs lambda_u > 0");
    if (!(theta > 0.0)) throw Error(Errc::domain_error, "se_mm_out_bound needs theta > 0");
    if (area_in < 0.0 || lambda_g < 0.0) throw Error(Errc::negative_density, "se_mm_out_bound");
    if (!(lambda_mm > area_in))
        throw Error(Errc::domain_error,
                    "se_mm_out_bound: coverage exponent needs lambda_mm > area_in");
    BoundValue b;
    b.regime = Regime::mm_out;
    b.lambda_bs = lambda_mm;
    b.lambda_u = lambda_u;
    b.alpha = alpha_mm;
    b.below_ud_threshold = lambda_mm / lambda_u < ud_threshold;
    const double inner = (2.0 * std::numbers::pi / theta) *
                         std::pow(std::exp(lambda_g * area_in) * lambda_mm / (rho(alpha_mm) * lambda_u),
                                  alpha_mm / 2.0);
    b.value = (1.0 - std::sqrt(area_in / lambda_mm)) * std::log1p(inner);
    return b;
}

// Indoor mmWave bound: log(1 + pi lambda_m / sigma^2). Noise-limited.
inline BoundValue se_mm_in_bound(double lambda_mm, double sigma2) {
    if (!(lambda_mm > 0.0)) throw Error(Errc::domain_error, "se_mm_in_bound needs lambda_mm > 0");
    if (!(sigma2 > 0.0)) throw Error(Errc::domain_error, "se_mm_in_bound needs sigma2 > 0");
    BoundValue b;
    b.regime = Regime::mm_in;
    b.lambda_bs = lambda_mm;
    b.value = std::log1p(std::numbers::pi * lambda_mm / sigma2);
    return b;
}

// The source derivations print two variants of the lambda_m exponent in the
// overall mmWave bound; `standard` is the composite-bound form
// (alpha/2 - 1) e^(-lambda_g S) + 1 and is the default, `alternate` is the
// rate-expression form (alpha/2) e^(-lambda_g S) + 1.
enum class MmExponentForm { standard, alternate };

inline double mm_density_exponent(double alpha_mm, double lambda_g, double area_in,
                                  MmExponentForm form = MmExponentForm::standard) {
    const double p_out = std::exp(-lambda_g * area_in);
    const double half = alpha_mm / 2.0;
    return (form == MmExponentForm::standard ? (half - 1.0) : half) * p_out + 1.0;
}

// Overall downlink mmWave bound:
//   log(1 + (pi lambda_m^eps / sigma^2)
//          [(2 sigma^2/theta)(e^(lambda_g S)/(rho_m lambda_u))^(alpha_m/2)]^(e^(-lambda_g S)))
// with eps = mm_density_exponent(...). Reduces to the indoor bound as
// lambda_g S -> inf and to the outdoor bound (S = 0 form) at lambda_g = 0.
inline BoundValue se_mm_bound(const ValidatedScenario& vs,
                              MmExponentForm form = MmExponentForm::standard) {
    const Scenario& s = vs.s;
    if (!(s.dens.lambda_mm > 0.0)) throw Error(Errc::domain_error, "se_mm_bound needs lambda_mm > 0");
    if (!(s.dens.lambda_u > 0.0)) throw Error(Errc::domain_error, "se_mm_bound needs lambda_u > 0");
    BoundValue b;
    b.regime = Regime::mm;
    b.lambda_bs = s.dens.lambda_mm;
    b.lambda_u = s.dens.lambda_u;
    b.alpha = s.radio.alpha_mm_out;
    b.below_ud_threshold = s.dens.lambda_mm / s.dens.lambda_u < s.ud_threshold;
    const double S = vs.area_in;
    const double p_out = std::exp(-s.dens.lambda_g * S);
    const double eps = mm_density_exponent(s.radio.alpha_mm_out, s.dens.lambda_g, S, form);
    const double bracket = (2.0 * s.radio.sigma2 / s.radio.theta) *
                           std::pow(std::exp(s.dens.lambda_g * S) /
                                        (rho(s.radio.alpha_mm_out) * s.dens.lambda_u),
                                    s.radio.alpha_mm_out / 2.0);
    const double inner = std::numbers::pi * std::pow(s.dens.lambda_mm, eps) / s.radio.sigma2 *
                         std::pow(bracket, p_out);
    b.value = std::log1p(inner);
    return b;
}

// Dispatch used by the CLI: the closed-form bound matching a Monte Carlo
// regime (uplink shares the downlink bound by reciprocity).
inline BoundValue se_bound_for_regime(Regime r, const ValidatedScenario& vs) {
    const Scenario& s = vs.s;
    switch (r) {
        case Regime::mu_dl:
        case Regime::mu_ul: {
            BoundValue b = se_mu_bound(s.dens.lambda_mu, s.dens.lambda_u, s.radio.alpha_mu,
                                       s.ud_threshold);
            b.regime = r;
            return b;
        }
        case Regime::mm_out:
            return se_mm_out_bound(s.dens.lambda_mm, s.dens.lambda_u, s.radio.alpha_mm_out,
                                   s.dens.lambda_g, vs.area_in, s.radio.theta, s.ud_threshold);
        case Regime::mm_in:
            return se_mm_in_bound(s.dens.lambda_mm, s.radio.sigma2);
        case Regime::mm:
            return se_mm_bound(vs);
    }
    throw Error(Errc::invalid_argument, "se_bound_for_regime");
}

inline constexpr double kNatsPerBit = 0.6931471805599453;  // log(2); display conversion only

}  // namespace udn
