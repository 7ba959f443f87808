#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "udn/analytic.hpp"
#include "udn/geometry.hpp"
#include "udn/propagation.hpp"
#include "udn/rng.hpp"
#include "udn/scenario.hpp"

namespace udn {

// Monte Carlo estimate of the typical user's ergodic spectral efficiency in
// nats/sec/Hz: E[log(1 + SINR)] weighted by the user's scheduled share of
// its serving BS's resource blocks (the share is 1 in the ultra-dense
// regime, where cells hold at most one user).
struct SeEstimate {
    Regime regime = Regime::mu_dl;
    double mean = 0.0;
    double stderr_ = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::int64_t n_trials = 0;
    double zero_rate = 0.0;  // fraction of trials with SINR = 0 (blocked / absent association)
    double ci_level = 0.95;
    std::uint64_t seed = 0;
    std::int64_t eps_clamps = 0;     // links clamped to the minimum-distance guard
    bool stderr_target_met = true;   // false = InsufficientTrials warning
};

// Normal quantile (Acklam's rational approximation polished by one Halley
// step through erfc); used for the confidence interval z-value.
inline double inv_norm_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) throw Error(Errc::domain_error, "inv_norm_cdf needs p in (0,1)");
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

namespace mc_detail {

struct TrialOutcome {
    double value = 0.0;
    bool zero = false;
    std::int64_t eps_clamps = 0;
};

// Per-thread scratch; reused across trials so the hot loop does not allocate.
struct Workspace {
    PointSet bs;
    PointSet users;
    DiskSet disks;
    PointGrid bs_grid;
    DiskGrid disk_grid;
    std::vector<char> bs_active;
    std::vector<int> active_list;
    std::vector<int> assoc;          // per-user serving BS index, -1 when absent
    std::vector<int> bs_user_count;  // associated users per BS
    std::vector<LinkSample> mu_interferers;
    std::vector<MmInterferer> mm_interferers;
    std::vector<int> probe_disks;
};

inline void sample_ppp_into(std::vector<Vec2>& out, double density, double L, Rng& rng) {
    const std::int64_t n = poisson_count(rng, density * L * L);
    out.clear();
    out.resize(static_cast<std::size_t>(n));
    for (auto& p : out) {
        p.x = uniform(rng, 0.0, L);
        p.y = uniform(rng, 0.0, L);
    }
}

inline double guarded_dist(double d, double eps, std::int64_t& clamps) {
    if (d < eps) {
        ++clamps;
        return eps;
    }
    return d;
}

// Nearest-association of every user to ws.bs, filling assoc/bs_active/
// active_list. mm = true applies the mmWave rule: outdoor users take the
// nearest non-blocked BS (absent allowed), indoor users the nearest BS
// outright (their room is assumed line-of-sight; walls only strip outside
// interference, matching the indoor analysis).
inline void associate(Workspace& ws, bool mm) {
    ws.assoc.assign(ws.users.size(), -1);
    ws.bs_active.assign(ws.bs.size(), 0);
    ws.bs_user_count.assign(ws.bs.size(), 0);
    ws.active_list.clear();
    if (ws.bs.empty()) return;
    for (std::size_t u = 0; u < ws.users.size(); ++u) {
        const Vec2 pos = ws.users.points[u];
        int serving = -1;
        if (!mm || ws.disk_grid.empty()) {
            serving = ws.bs_grid.nearest(pos).first;
        } else if (ws.disk_grid.contains(pos)) {
            serving = ws.bs_grid.nearest(pos).first;
        } else {
            auto hit = ws.bs_grid.nearest_if(
                pos, [&](int idx, double) { return ws.disk_grid.los(pos, ws.bs.points[idx]); });
            if (hit) serving = hit->first;
        }
        ws.assoc[u] = serving;
        if (serving >= 0) {
            ++ws.bs_user_count[serving];
            if (!ws.bs_active[serving]) {
                ws.bs_active[serving] = 1;
                ws.active_list.push_back(serving);
            }
        }
    }
    std::sort(ws.active_list.begin(), ws.active_list.end());
}

// The probe is one of 1 + k users sharing its serving BS's resource blocks
// under uniform scheduling, so its achieved efficiency is log(1+SINR)/(1+k).
// In the ultra-dense regime k = 0 almost surely and this is E log(1+SINR).
inline double slot_share(const Workspace& ws, int serving_bs) {
    return 1.0 / (1.0 + static_cast<double>(ws.bs_user_count[serving_bs]));
}

struct BlockStat {
    double sum = 0.0;
    double sumsq = 0.0;
    std::int64_t zeros = 0;
    std::int64_t clamps = 0;
};

// Deterministic parallel trial loop: per-trial RNG streams derived from
// (master seed, trial index), fixed-size blocks folded in block order with
// compensated summation, so the result is bit-identical for any worker count.
template <class TrialFn>
SeEstimate run_trials(Regime regime, const ValidatedScenario& vs, int threads, TrialFn&& fn) {
    const std::int64_t n = vs.s.sim.trials;
    constexpr std::int64_t kBlock = 64;
    const std::int64_t nblocks = (n + kBlock - 1) / kBlock;
    std::vector<BlockStat> blocks(static_cast<std::size_t>(nblocks));
    int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    nthreads = std::clamp(nthreads, 1, 256);
    nthreads = static_cast<int>(std::min<std::int64_t>(nthreads, nblocks));

    std::atomic<std::int64_t> next{0};
    auto work = [&]() {
        Workspace ws;
        for (;;) {
            const std::int64_t b = next.fetch_add(1, std::memory_order_relaxed);
            if (b >= nblocks) break;
            BlockStat st;
            const std::int64_t lo = b * kBlock;
            const std::int64_t hi = std::min(n, lo + kBlock);
            for (std::int64_t t = lo; t < hi; ++t) {
                Rng rng = make_rng(trial_seed(vs.s.sim.seed, t));
                const TrialOutcome out = fn(rng, ws);
                st.sum += out.value;
                st.sumsq += out.value * out.value;
                st.zeros += out.zero ? 1 : 0;
                st.clamps += out.eps_clamps;
            }
            blocks[static_cast<std::size_t>(b)] = st;
        }
    };
    if (nthreads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    double sum = 0.0, sum_c = 0.0, sumsq = 0.0, sumsq_c = 0.0;
    std::int64_t zeros = 0, clamps = 0;
    auto neumaier = [](double& acc, double& comp, double v) {
        const double t = acc + v;
        comp += (std::abs(acc) >= std::abs(v)) ? (acc - t) + v : (v - t) + acc;
        acc = t;
    };
    for (const BlockStat& st : blocks) {
        neumaier(sum, sum_c, st.sum);
        neumaier(sumsq, sumsq_c, st.sumsq);
        zeros += st.zeros;
        clamps += st.clamps;
    }
    sum += sum_c;
    sumsq += sumsq_c;

    SeEstimate est;
    est.regime = regime;
    est.n_trials = n;
    est.seed = vs.s.sim.seed;
    est.ci_level = vs.s.sim.ci_level;
    est.mean = sum / static_cast<double>(n);
    const double var =
        n > 1 ? std::max(0.0, (sumsq - static_cast<double>(n) * est.mean * est.mean) /
                                  static_cast<double>(n - 1))
              : 0.0;
    est.stderr_ = std::sqrt(var / static_cast<double>(n));
    const double z = inv_norm_cdf(0.5 * (1.0 + vs.s.sim.ci_level));
    est.ci_low = est.mean - z * est.stderr_;
    est.ci_high = est.mean + z * est.stderr_;
    est.zero_rate = static_cast<double>(zeros) / static_cast<double>(n);
    est.eps_clamps = clamps;
    est.stderr_target_met =
        est.mean > 0.0 ? est.stderr_ <= vs.s.sim.rel_stderr_target * est.mean : est.stderr_ == 0.0;
    return est;
}

}  // namespace mc_detail

// Indices of BSs serving at least one user under nearest association
// (mmWave rule when `disks` is supplied). Sorted ascending.
inline std::vector<int> active_bs(const PointSet& bs, const PointSet& users, const DiskSet* disks,
                                  double window_side) {
    mc_detail::Workspace ws;
    ws.bs = bs;
    ws.users = users;
    if (disks) ws.disks = *disks;
    if (!ws.bs.empty()) ws.bs_grid.build(ws.bs.points, window_side);
    ws.disk_grid.build(ws.disks, window_side);
    mc_detail::associate(ws, disks != nullptr);
    return ws.active_list;
}

// --- uWave estimators --------------------------------------------------------
// Typical user probed at the window center (an added point, so the ambient
// processes stay untouched). Interference comes from the other active BSs;
// a BS with no serving user is off.

inline SeEstimate estimate_mu_dl(const ValidatedScenario& vs, int threads = 0) {
    const double L = vs.s.sim.window_side;
    const double eps = 1e-6 * L;
    const double alpha = vs.s.radio.alpha_mu;
    const double sigma2 = vs.s.radio.sigma2;
    return mc_detail::run_trials(Regime::mu_dl, vs, threads, [&, L, eps](Rng& rng, auto& ws) {
        mc_detail::TrialOutcome out;
        mc_detail::sample_ppp_into(ws.bs.points, vs.s.dens.lambda_mu, L, rng);
        mc_detail::sample_ppp_into(ws.users.points, vs.s.dens.lambda_u, L, rng);
        if (ws.bs.empty()) {
            out.zero = true;
            return out;
        }
        ws.bs_grid.build(ws.bs.points, L);
        const Vec2 probe{0.5 * L, 0.5 * L};
        const auto [serving_idx, serving_dist] = ws.bs_grid.nearest(probe);
        LinkSample serving{mc_detail::guarded_dist(serving_dist, eps, out.eps_clamps), exp_unit(rng),
                           false};
        mc_detail::associate(ws, /*mm=*/false);
        ws.mu_interferers.clear();
        for (int i : ws.active_list) {
            if (i == serving_idx) continue;
            const double d = torus_dist(probe, ws.bs.points[i], L);
            ws.mu_interferers.push_back(
                {mc_detail::guarded_dist(d, eps, out.eps_clamps), exp_unit(rng), false});
        }
        const SinrValue sinr = sinr_mu(serving, ws.mu_interferers, alpha, sigma2);
        out.value = std::log1p(sinr.value) * mc_detail::slot_share(ws, serving_idx);
        out.zero = sinr.value == 0.0;
        return out;
    });
}

// Uplink: the typical BS is the one serving the probe user, and the probe is
// its desired transmitter. Every other user transmits on the uplink band at
// the same time (frequency reuse 1, no intra-cell coordination), so users of
// nearby cells and even of the typical cell itself interfere at the typical
// BS; their distances are not ordered relative to the desired link. In the
// ultra-dense regime cells hold at most one user and this coincides with the
// downlink statistics.
inline SeEstimate estimate_mu_ul(const ValidatedScenario& vs, int threads = 0) {
    const double L = vs.s.sim.window_side;
    const double eps = 1e-6 * L;
    const double alpha = vs.s.radio.alpha_mu;
    const double sigma2 = vs.s.radio.sigma2;
    return mc_detail::run_trials(Regime::mu_ul, vs, threads, [&, L, eps](Rng& rng, auto& ws) {
        mc_detail::TrialOutcome out;
        mc_detail::sample_ppp_into(ws.bs.points, vs.s.dens.lambda_mu, L, rng);
        mc_detail::sample_ppp_into(ws.users.points, vs.s.dens.lambda_u, L, rng);
        if (ws.bs.empty()) {
            out.zero = true;
            return out;
        }
        ws.bs_grid.build(ws.bs.points, L);
        const Vec2 probe{0.5 * L, 0.5 * L};
        const auto [bs0, serving_dist] = ws.bs_grid.nearest(probe);
        const Vec2 bs0_pos = ws.bs.points[bs0];
        LinkSample desired{mc_detail::guarded_dist(serving_dist, eps, out.eps_clamps), exp_unit(rng),
                           false};
        ws.mu_interferers.clear();
        for (const Vec2& user : ws.users.points) {
            const double d = torus_dist(user, bs0_pos, L);
            ws.mu_interferers.push_back(
                {mc_detail::guarded_dist(d, eps, out.eps_clamps), exp_unit(rng), false});
        }
        const SinrValue sinr = sinr_mu(desired, ws.mu_interferers, alpha, sigma2);
        out.value = std::log1p(sinr.value);
        out.zero = sinr.value == 0.0;
        return out;
    });
}

// --- mmWave estimators -------------------------------------------------------

namespace mc_detail {

inline void sample_mm_world(const ValidatedScenario& vs, Rng& rng, Workspace& ws) {
    const double L = vs.s.sim.window_side;
    sample_ppp_into(ws.bs.points, vs.s.dens.lambda_mm, L, rng);
    sample_ppp_into(ws.users.points, vs.s.dens.lambda_u, L, rng);
    ws.disks.radius = vs.s.dens.radius_in;
    sample_ppp_into(ws.disks.centers, vs.s.dens.lambda_g, L, rng);
    if (!ws.bs.empty()) ws.bs_grid.build(ws.bs.points, L);
    ws.disk_grid.build(ws.disks, L);
}

// Outdoor-receiver mmWave trial body, shared by mm_out and the overall
// mixture. The receiver associates with the nearest non-blocked BS; aligned
// active BSs with a clear path interfere at full lobe gain.
inline TrialOutcome mm_outdoor_value(const ValidatedScenario& vs, Rng& rng, Workspace& ws,
                                     Vec2 probe) {
    const double L = vs.s.sim.window_side;
    const double eps = 1e-6 * L;
    TrialOutcome out;
    auto hit = ws.bs_grid.nearest_if(
        probe, [&](int idx, double) { return ws.disk_grid.los(probe, ws.bs.points[idx]); });
    if (!hit) {
        out.zero = true;
        return out;
    }
    LinkSample serving{guarded_dist(hit->second, eps, out.eps_clamps), exp_unit(rng), false};
    ws.mm_interferers.clear();
    for (int i : ws.active_list) {
        if (i == hit->first) continue;
        if (!draw_alignment(vs.s.radio.theta, rng)) continue;
        if (!ws.disk_grid.los(probe, ws.bs.points[i])) continue;
        const double d = torus_dist(probe, ws.bs.points[i], L);
        ws.mm_interferers.push_back({{guarded_dist(d, eps, out.eps_clamps), exp_unit(rng), false}, true});
    }
    const SinrValue sinr =
        sinr_mm_out(serving, ws.mm_interferers, vs.s.radio.alpha_mm_out, vs.s.radio.sigma2);
    out.value = std::log1p(sinr.value) * slot_share(ws, hit->first);
    out.zero = sinr.value == 0.0;
    return out;
}

// Indoor-receiver trial body. The serving link uses the nearest-BS distance
// (rooms are line-of-sight inside); only aligned active BSs inside one of the
// receiver's rooms interfere, at the in-room exponent 2.
inline TrialOutcome mm_indoor_value(const ValidatedScenario& vs, Rng& rng, Workspace& ws, Vec2 probe,
                                    const std::vector<int>& rooms) {
    const double L = vs.s.sim.window_side;
    const double eps = 1e-6 * L;
    TrialOutcome out;
    if (ws.bs.empty()) {
        out.zero = true;
        return out;
    }
    const auto [serving_idx, serving_dist] = ws.bs_grid.nearest(probe);
    LinkSample serving{guarded_dist(serving_dist, eps, out.eps_clamps), exp_unit(rng), false};
    ws.mm_interferers.clear();
    for (int i : ws.active_list) {
        if (i == serving_idx) continue;
        bool same_room = false;
        for (int d : rooms)
            if (ws.disk_grid.point_in_disk(ws.bs.points[i], d)) {
                same_room = true;
                break;
            }
        if (!same_room) continue;
        if (!draw_alignment(vs.s.radio.theta, rng)) continue;
        const double d = torus_dist(probe, ws.bs.points[i], L);
        ws.mm_interferers.push_back({{guarded_dist(d, eps, out.eps_clamps), exp_unit(rng), false}, true});
    }
    const SinrValue sinr = sinr_mm_in(serving, ws.mm_interferers, vs.s.radio.sigma2);
    out.value = std::log1p(sinr.value) * slot_share(ws, serving_idx);
    out.zero = sinr.value == 0.0;
    return out;
}

}  // namespace mc_detail

// Typical user at a uniformly sampled outdoor location.
inline SeEstimate estimate_mm_out(const ValidatedScenario& vs, int threads = 0) {
    const double L = vs.s.sim.window_side;
    return mc_detail::run_trials(Regime::mm_out, vs, threads, [&, L](Rng& rng, auto& ws) {
        mc_detail::sample_mm_world(vs, rng, ws);
        Vec2 probe;
        bool outdoor = false;
        for (int attempt = 0; attempt < 10000 && !outdoor; ++attempt) {
            probe = {uniform(rng, 0.0, L), uniform(rng, 0.0, L)};
            outdoor = !ws.disk_grid.contains(probe);
        }
        if (!outdoor || ws.bs.empty()) {
            mc_detail::TrialOutcome out;
            out.zero = true;
            return out;
        }
        mc_detail::associate(ws, /*mm=*/true);
        return mc_detail::mm_outdoor_value(vs, rng, ws, probe);
    });
}

// Typical user inside a uniformly chosen indoor disk.
inline SeEstimate estimate_mm_in(const ValidatedScenario& vs, int threads = 0) {
    if (!(vs.s.dens.lambda_g > 0.0))
        throw Error(Errc::domain_error, "estimate_mm_in requires lambda_g > 0");
    const double L = vs.s.sim.window_side;
    return mc_detail::run_trials(Regime::mm_in, vs, threads, [&, L](Rng& rng, auto& ws) {
        mc_detail::sample_mm_world(vs, rng, ws);
        if (ws.disks.empty() || ws.bs.empty()) {
            mc_detail::TrialOutcome out;
            out.zero = true;
            return out;
        }
        const int disk = static_cast<int>(uniform_index(rng, static_cast<std::int64_t>(ws.disks.size())));
        const double rad = ws.disks.radius * std::sqrt(uniform(rng, 0.0, 1.0));
        const double ang = uniform(rng, 0.0, 2.0 * std::numbers::pi);
        const Vec2 probe = wrap_point(
            {ws.disks.centers[disk].x + rad * std::cos(ang), ws.disks.centers[disk].y + rad * std::sin(ang)},
            L);
        mc_detail::associate(ws, /*mm=*/true);
        ws.probe_disks.assign(1, disk);
        return mc_detail::mm_indoor_value(vs, rng, ws, probe, ws.probe_disks);
    });
}

// Overall downlink mmWave: the typical location is uniform over the window,
// so the indoor/outdoor mixture arises with its natural probability.
inline SeEstimate estimate_mm_overall(const ValidatedScenario& vs, int threads = 0) {
    const double L = vs.s.sim.window_side;
    return mc_detail::run_trials(Regime::mm, vs, threads, [&, L](Rng& rng, auto& ws) {
        mc_detail::sample_mm_world(vs, rng, ws);
        const Vec2 probe{uniform(rng, 0.0, L), uniform(rng, 0.0, L)};
        if (ws.bs.empty()) {
            mc_detail::TrialOutcome out;
            out.zero = true;
            return out;
        }
        mc_detail::associate(ws, /*mm=*/true);
        ws.disk_grid.disks_containing(probe, ws.probe_disks);
        if (ws.probe_disks.empty()) return mc_detail::mm_outdoor_value(vs, rng, ws, probe);
        return mc_detail::mm_indoor_value(vs, rng, ws, probe, ws.probe_disks);
    });
}

inline SeEstimate estimate_regime(Regime r, const ValidatedScenario& vs, int threads = 0) {
    switch (r) {
        case Regime::mu_dl: return estimate_mu_dl(vs, threads);
        case Regime::mu_ul: return estimate_mu_ul(vs, threads);
        case Regime::mm_out: return estimate_mm_out(vs, threads);
        case Regime::mm_in: return estimate_mm_in(vs, threads);
        case Regime::mm: return estimate_mm_overall(vs, threads);
    }
    throw Error(Errc::invalid_argument, "estimate_regime");
}

// --- CSV row contract --------------------------------------------------------

inline std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string se_csv_header() {
    return "regime,params_hash,mean,stderr,ci_low,ci_high,zero_rate,trials,seed";
}

inline std::string se_csv_row(const SeEstimate& e, const Scenario& s) {
    char hash[17];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(serialize_scenario(s))));
    std::string row = regime_name(e.regime);
    row += ',';
    row += hash;
    for (double v : {e.mean, e.stderr_, e.ci_low, e.ci_high, e.zero_rate}) {
        row += ',';
        row += detail::format_double(v);
    }
    row += ',' + std::to_string(e.n_trials);
    row += ',' + std::to_string(e.seed);
    return row;
}

}  // namespace udn
