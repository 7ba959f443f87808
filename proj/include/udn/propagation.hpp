#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <span>

#include "udn/errors.hpp"
#include "udn/rng.hpp"

namespace udn {

// One radio link: distance, its Rayleigh fading power draw, and whether an
// indoor wall blocks it.
struct LinkSample {
    double distance = 0.0;
    double fading = 1.0;  // exponential, unity mean
    bool blocked = false;
};

enum class SinrRegime { mm_out, mm_in, mu };

struct SinrValue {
    double value = 0.0;  // dimensionless, >= 0; 0 only for the blocked/absent mmWave case
    SinrRegime regime = SinrRegime::mu;
};

struct MmInterferer {
    LinkSample link;
    bool aligned = false;  // main lobe pointed at the receiver
};

inline double path_gain(double r, double alpha) {
    if (!(r > 0.0)) throw Error(Errc::domain_error, "path_gain needs r > 0");
    return std::pow(r, -alpha);
}

// SINR_mu = g r^-a / (sum_i g_i r_i^-a + sigma2). The interferer list must
// already be restricted to active BSs (or scheduled uplink users).
inline SinrValue sinr_mu(const LinkSample& serving, std::span<const LinkSample> interferers,
                         double alpha_mu, double sigma2) {
    double denom = sigma2;
    for (const LinkSample& i : interferers) denom += i.fading * path_gain(i.distance, alpha_mu);
    return {serving.fading * path_gain(serving.distance, alpha_mu) / denom, SinrRegime::mu};
}

// Outdoor mmWave SINR; 0 when the serving link is absent or blocked. Aligned,
// non-blocked interferers contribute with the same unit lobe gain as the
// serving link.
inline SinrValue sinr_mm_out(const std::optional<LinkSample>& serving,
                             std::span<const MmInterferer> interferers, double alpha_mm,
                             double sigma2) {
    if (!serving || serving->blocked) return {0.0, SinrRegime::mm_out};
    double denom = sigma2;
    for (const MmInterferer& i : interferers)
        if (i.aligned && !i.link.blocked) denom += i.link.fading * path_gain(i.link.distance, alpha_mm);
    return {serving->fading * path_gain(serving->distance, alpha_mm) / denom, SinrRegime::mm_out};
}

// Indoor mmWave SINR with the in-room exponent fixed at 2. Callers guarantee
// the interferers share the receiver's room; walls block everything else.
inline SinrValue sinr_mm_in(const LinkSample& serving, std::span<const MmInterferer> interferers,
                            double sigma2) {
    double denom = sigma2;
    for (const MmInterferer& i : interferers)
        if (i.aligned && !i.link.blocked) denom += i.link.fading * path_gain(i.link.distance, 2.0);
    return {serving.fading * path_gain(serving.distance, 2.0) / denom, SinrRegime::mm_in};
}

// An interfering beam points at the receiver with probability theta / 2pi.
inline bool draw_alignment(double theta, Rng& rng) {
    if (!(theta > 0.0 && theta <= 2.0 * std::numbers::pi))
        throw Error(Errc::domain_error, "draw_alignment needs 0 < theta <= 2*pi");
    return bernoulli(rng, theta / (2.0 * std::numbers::pi));
}

}  // namespace udn
