#pragma once

#include <cmath>
#include <limits>

#include "udn/analytic.hpp"
#include "udn/errors.hpp"
#include "udn/scenario.hpp"

namespace udn {

// uWave bandwidth split. When feasible, w_ul + w_dl == w_total exactly and
// the realized uplink/downlink rate ratio equals T. When infeasible (slack
// < 0), even dedicating all of W to uplink misses the target; the split is
// reported all-uplink as the closest attempt.
struct Allocation {
    double w_ul = 0.0;    // MHz
    double w_dl = 0.0;    // MHz
    bool feasible = true;
    double slack = 0.0;   // W - T Wm gamma_m / gamma_mu
};

struct RatePair {
    double r_dl = 0.0;  // bandwidth * spectral efficiency, "Mnats/s"
    double r_ul = 0.0;
};

// Mnats/s equivalent of 1 Gbit/s (display conversions only; all rate math
// stays in nats).
inline constexpr double kGbpsEquivMnats = 1000.0 * kNatsPerBit;

// Rate-optimal split under the minimum uplink/downlink ratio t:
//   w_ul* = t/(1+t) (W + Wm gamma_m / gamma_mu), w_dl* = W - w_ul*.
inline Allocation allocate(double w_total, double w_mm, double t, double gamma_mu,
                           double gamma_mm) {
    if (!(gamma_mu > 0.0)) throw Error(Errc::domain_error, "allocate needs gamma_mu > 0");
    if (!(t >= 0.0 && t <= 1.0)) throw Error(Errc::ratio_out_of_range, "allocate needs 0 <= t <= 1");
    if (w_total < 0.0 || w_mm < 0.0) throw Error(Errc::domain_error, "allocate needs bandwidths >= 0");
    if (gamma_mm < 0.0) throw Error(Errc::domain_error, "allocate needs gamma_mm >= 0");
    Allocation a;
    const double mm_load = w_mm * gamma_mm / gamma_mu;
    a.slack = w_total - t * mm_load;
    a.feasible = a.slack >= 0.0;
    if (!a.feasible) {
        a.w_ul = w_total;
        a.w_dl = 0.0;
        return a;
    }
    a.w_ul = std::min(w_total, t / (1.0 + t) * (w_total + mm_load));
    a.w_dl = w_total - a.w_ul;
    return a;
}

inline RatePair rates(const Allocation& alloc, double w_mm, double gamma_mu, double gamma_mm) {
    return {alloc.w_dl * gamma_mu + w_mm * gamma_mm, alloc.w_ul * gamma_mu};
}

// mmWave efficiency used for rate planning: the overall closed-form bound
// scaled by the serving-link coverage factor (1 - sqrt(S/lambda_m)), which is
// where the indoor-area sensitivity of the planned rates lives. Requires
// lambda_mm > S.
inline double planning_gamma_mm(const ValidatedScenario& vs, double lambda_mm,
                                MmExponentForm form = MmExponentForm::standard) {
    if (!(lambda_mm > vs.area_in))
        throw Error(Errc::domain_error, "planning_gamma_mm needs lambda_mm > area_in");
    ValidatedScenario tmp = vs;
    tmp.s.dens.lambda_mm = lambda_mm;
    const double coverage = 1.0 - std::sqrt(vs.area_in / lambda_mm);
    return coverage * se_mm_bound(tmp, form).value;
}

struct PlanResult {
    Allocation alloc;
    RatePair rate;
    double gamma_mu = 0.0;
    double gamma_mm = 0.0;
};

// Maximum downlink rate subject to R_u/R_d >= T, evaluated two ways: through
// the explicit split, and through the reduced closed form
// (W gamma_mu + Wm gamma_m)/(1+T). The two must agree; disagreement would
// mean the split algebra is broken.
inline PlanResult max_dl_rate(const ValidatedScenario& vs,
                              MmExponentForm form = MmExponentForm::standard) {
    const Scenario& s = vs.s;
    PlanResult res;
    res.gamma_mu = se_mu_bound(s.dens.lambda_mu, s.dens.lambda_u, s.radio.alpha_mu, s.ud_threshold).value;
    res.gamma_mm = planning_gamma_mm(vs, s.dens.lambda_mm, form);
    res.alloc = allocate(s.band.w_mu_total, s.band.w_mm, s.band.t_min, res.gamma_mu, res.gamma_mm);
    if (!res.alloc.feasible)
        throw Error(Errc::infeasible, "uplink rate target unreachable: W < T Wm gamma_m/gamma_mu");
    res.rate = rates(res.alloc, s.band.w_mm, res.gamma_mu, res.gamma_mm);
    const double direct =
        (s.band.w_mu_total * res.gamma_mu + s.band.w_mm * res.gamma_mm) / (1.0 + s.band.t_min);
    if (std::abs(res.rate.r_dl - direct) > 1e-9 * std::max(1.0, std::abs(direct)))
        throw Error(Errc::domain_error, "max_dl_rate: split route and closed form disagree");
    return res;
}

// Exponent of the density scaling law O(lambda_m) = O(lambda_mu^exponent):
//   alpha_mu W / (T Wm [(alpha_m - 2) e^(-lambda_g S) + 2]).
// Its reciprocal is the growth order of the required lambda_mu in lambda_m.
inline double required_density_exponent(const ValidatedScenario& vs) {
    const Scenario& s = vs.s;
    if (s.band.t_min < 0.0 || s.band.w_mm < 0.0)
        throw Error(Errc::domain_error, "required_density_exponent");
    if (s.band.t_min == 0.0 || s.band.w_mm == 0.0) return std::numeric_limits<double>::infinity();
    const double bracket =
        (s.radio.alpha_mm_out - 2.0) * std::exp(-s.dens.lambda_g * vs.area_in) + 2.0;
    return s.radio.alpha_mu * s.band.w_mu_total / (s.band.t_min * s.band.w_mm * bracket);
}

// Smallest lambda_mu making the uplink target feasible at the given mmWave
// density: the root of W gamma_mu(lambda_mu) = T Wm gamma_m(lambda_mm),
// using the asymptotic overall mmWave bound (no coverage factor, matching
// the scaling-law results). Bisection on the strictly increasing gamma_mu
// bound, bracket grown geometrically, relative tolerance 1e-9.
inline double required_mu_density(double lambda_mm, const ValidatedScenario& vs,
                                  MmExponentForm form = MmExponentForm::standard) {
    const Scenario& s = vs.s;
    if (!(lambda_mm > vs.area_in))
        throw Error(Errc::domain_error, "required_mu_density needs lambda_mm > area_in");
    if (!(s.band.w_mu_total > 0.0))
        throw Error(Errc::domain_error, "required_mu_density needs w_mu_total > 0");
    if (s.band.t_min == 0.0 || s.band.w_mm == 0.0) return 0.0;
    ValidatedScenario tmp = vs;
    tmp.s.dens.lambda_mm = lambda_mm;
    const double target = s.band.t_min * s.band.w_mm * se_mm_bound(tmp, form).value / s.band.w_mu_total;
    if (target <= 0.0) return 0.0;
    auto gamma_mu = [&](double lambda_mu) {
        return se_mu_bound(lambda_mu, s.dens.lambda_u, s.radio.alpha_mu, s.ud_threshold).value;
    };
    double lo = s.dens.lambda_u > 0.0 ? s.dens.lambda_u : 1.0;
    double hi = lo;
    int guard = 0;
    while (gamma_mu(lo) >= target) {
        lo *= 0.25;
        if (++guard > 2000) throw Error(Errc::no_solution, "required_mu_density lower bracket");
    }
    guard = 0;
    while (gamma_mu(hi) < target) {
        hi *= 4.0;
        if (++guard > 2000) throw Error(Errc::no_solution, "required_mu_density upper bracket");
    }
    while (hi - lo > 1e-9 * lo) {
        const double mid = 0.5 * (lo + hi);
        if (gamma_mu(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return hi;  // the side meeting the target, so plugging back stays feasible
}

// Minimum uWave bandwidth sustaining the uplink ratio t when the uWave BS
// density grows proportionally to the mmWave density:
//   W >= (t Wm / alpha_mu) [(alpha_m - 2) e^(-lambda_g S) + 2].
inline double required_spectrum(double t, double w_mm, double alpha_mu, double alpha_mm,
                                double lambda_g, double area_in) {
    if (t < 0.0 || w_mm < 0.0) throw Error(Errc::domain_error, "required_spectrum");
    if (!(alpha_mu > 0.0)) throw Error(Errc::domain_error, "required_spectrum needs alpha_mu > 0");
    if (lambda_g < 0.0 || area_in < 0.0) throw Error(Errc::negative_density, "required_spectrum");
    return t * w_mm / alpha_mu * ((alpha_mm - 2.0) * std::exp(-lambda_g * area_in) + 2.0);
}

}  // namespace udn
