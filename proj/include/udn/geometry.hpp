#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "udn/errors.hpp"
#include "udn/rng.hpp"

namespace udn {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm2(Vec2 a) { return dot(a, a); }

// --- torus metric -----------------------------------------------------------
// The window is [0, L)^2 with wrap-around. Working on a torus removes window
// edge effects, so a probe at the window center behaves like the typical
// point of a process on the infinite plane.

inline double wrap_coord(double v, double L) {
    double w = v - L * std::floor(v / L);
    if (w >= L) w -= L;  // guards the v = -epsilon rounding case
    return w;
}

inline Vec2 wrap_point(Vec2 p, double L) { return {wrap_coord(p.x, L), wrap_coord(p.y, L)}; }

// Displacement b - a with each component wrapped into [-L/2, L/2].
inline Vec2 torus_delta(Vec2 a, Vec2 b, double L) {
    return {std::remainder(b.x - a.x, L), std::remainder(b.y - a.y, L)};
}

inline double torus_dist2(Vec2 a, Vec2 b, double L) { return norm2(torus_delta(a, b, L)); }
inline double torus_dist(Vec2 a, Vec2 b, double L) { return std::sqrt(torus_dist2(a, b, L)); }

// --- point/disk processes ---------------------------------------------------

enum class PointKind { mm_bs, mu_bs, user };

struct PointSet {
    std::vector<Vec2> points;
    PointKind kind = PointKind::user;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

struct DiskSet {
    std::vector<Vec2> centers;
    double radius = 0.0;

    std::size_t size() const { return centers.size(); }
    bool empty() const { return centers.empty(); }

    // Diagnostic only: overlapping disks are sampled as-is and merely counted.
    std::size_t overlap_pairs(double L) const {
        std::size_t n = 0;
        for (std::size_t i = 0; i < centers.size(); ++i)
            for (std::size_t j = i + 1; j < centers.size(); ++j)
                if (torus_dist(centers[i], centers[j], L) < 2.0 * radius) ++n;
        return n;
    }
};

struct Deployment {
    PointSet mm_bs;
    PointSet mu_bs;
    PointSet users;
    DiskSet disks;
    double window_side = 0.0;
};

// Homogeneous PPP on the window: Poisson(density * L^2) points, i.i.d. uniform.
inline PointSet sample_ppp(double density, double window_side, PointKind kind, Rng& rng) {
    if (density < 0.0) throw Error(Errc::negative_density, "sample_ppp density");
    PointSet set;
    set.kind = kind;
    const std::int64_t n = poisson_count(rng, density * window_side * window_side);
    set.points.resize(static_cast<std::size_t>(n));
    for (auto& p : set.points) {
        p.x = uniform(rng, 0.0, window_side);
        p.y = uniform(rng, 0.0, window_side);
    }
    return set;
}

// Boolean model: disk centers form a PPP, all disks share one radius.
inline DiskSet sample_disks(double lambda_g, double radius, double window_side, Rng& rng) {
    if (lambda_g < 0.0) throw Error(Errc::negative_density, "sample_disks lambda_g");
    if (radius < 0.0) throw Error(Errc::negative_density, "sample_disks radius");
    DiskSet disks;
    disks.radius = radius;
    PointSet centers = sample_ppp(lambda_g, window_side, PointKind::user, rng);
    disks.centers = std::move(centers.points);
    return disks;
}

// --- blockage queries (exact reference versions) ----------------------------

// Strictly inside at least one disk.
inline bool is_indoor(Vec2 p, const DiskSet& disks, double L) {
    const double r2 = disks.radius * disks.radius;
    for (const Vec2& c : disks.centers)
        if (torus_dist2(p, c, L) < r2) return true;
    return false;
}

namespace detail {

// Number of t in (0,1) where a + t*delta crosses the circle |q - center| = R.
// `center` must already be in the segment's unwrapped frame.
inline int segment_circle_crossings(Vec2 a, Vec2 delta, Vec2 center, double radius) {
    const Vec2 f = a - center;
    const double A = norm2(delta);
    const double B = dot(f, delta);
    const double C = norm2(f) - radius * radius;
    const double disc = B * B - A * C;
    if (disc <= 0.0 || A == 0.0) return 0;
    const double sq = std::sqrt(disc);
    int n = 0;
    const double t1 = (-B - sq) / A;
    const double t2 = (-B + sq) / A;
    if (t1 > 0.0 && t1 < 1.0) ++n;
    if (t2 > 0.0 && t2 < 1.0) ++n;
    return n;
}

// Disk center copy nearest to the segment midpoint, in the unwrapped frame of
// segment a -> a + delta. Valid whenever R < L/8 (enforced at validation):
// any disk touching the segment then has exactly this one relevant copy.
inline Vec2 disk_frame_center(Vec2 a, Vec2 delta, Vec2 center, double L) {
    const Vec2 mid = a + delta * 0.5;
    return {mid.x + std::remainder(center.x - mid.x, L),
            mid.y + std::remainder(center.y - mid.y, L)};
}

}  // namespace detail

// True iff the torus geodesic a -> b crosses no disk boundary, or both
// endpoints lie inside one common disk. Disk boundaries are the impenetrable
// walls; disk interiors are line-of-sight (a chord entering and leaving a
// disk counts two wall crossings and blocks).
inline bool los_clear(Vec2 a, Vec2 b, const DiskSet& disks, double L) {
    if (disks.empty()) return true;
    const double r2 = disks.radius * disks.radius;
    const Vec2 delta = torus_delta(a, b, L);
    for (const Vec2& c : disks.centers)
        if (torus_dist2(a, c, L) < r2 && torus_dist2(b, c, L) < r2) return true;
    for (const Vec2& c : disks.centers) {
        const Vec2 cf = detail::disk_frame_center(a, delta, c, L);
        if (detail::segment_circle_crossings(a, delta, cf, disks.radius) > 0) return false;
    }
    return true;
}

// Nearest member in the torus metric; ties broken by lowest index.
inline std::pair<std::size_t, double> nearest(Vec2 p, const PointSet& s, double L) {
    if (s.empty()) throw Error(Errc::invalid_argument, "nearest() on empty point set");
    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        const double d2 = torus_dist2(p, s.points[i], L);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = i;
        }
    }
    return {best, std::sqrt(best_d2)};
}

// Nearest member with a clear line of sight; empty if every member is blocked.
inline std::optional<std::pair<std::size_t, double>> nearest_los(Vec2 p, const PointSet& s,
                                                                 const DiskSet& disks, double L) {
    std::optional<std::pair<std::size_t, double>> best;
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        const double d = torus_dist(p, s.points[i], L);
        if (best && d >= best->second) continue;
        if (los_clear(p, s.points[i], disks, L)) best = {{i, d}};
    }
    return best;
}

// --- spatial grids ----------------------------------------------------------
// Counting-sort bucket grids over the torus. Used by the Monte Carlo engine;
// they must agree exactly with the reference queries above (property-tested).

class PointGrid {
public:
    void build(const std::vector<Vec2>& pts, double L) {
        pts_ = &pts;
        L_ = L;
        n_ = std::clamp<int>(static_cast<int>(std::sqrt(static_cast<double>(pts.size()) / 2.0)), 1, 256);
        cell_ = L / n_;
        const std::size_t cells = static_cast<std::size_t>(n_) * n_;
        start_.assign(cells + 1, 0);
        order_.resize(pts.size());
        cell_of_.resize(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            cell_of_[i] = cell_index(pts[i]);
            ++start_[cell_of_[i] + 1];
        }
        for (std::size_t c = 1; c <= cells; ++c) start_[c] += start_[c - 1];
        cursor_.assign(start_.begin(), start_.end() - 1);
        for (std::size_t i = 0; i < pts.size(); ++i) order_[cursor_[cell_of_[i]]++] = static_cast<int>(i);
    }

    bool empty() const { return !pts_ || pts_->empty(); }

    std::pair<int, double> nearest(Vec2 p) const {
        auto hit = nearest_if(p, [](int, double) { return true; });
        if (!hit) throw Error(Errc::invalid_argument, "PointGrid::nearest on empty grid");
        return {hit->first, hit->second};
    }

    // Nearest point satisfying pred(index, distance). pred is only evaluated
    // for candidates that would improve the current best, so expensive
    // predicates (line-of-sight) run O(1) times in typical geometry.
    template <class Pred>
    std::optional<std::pair<int, double>> nearest_if(Vec2 p, Pred&& pred) const {
        if (empty()) return std::nullopt;
        const auto& pts = *pts_;
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        const int cx = static_cast<int>(p.x / cell_) % n_;
        const int cy = static_cast<int>(p.y / cell_) % n_;
        const int rmax = n_ / 2 + 1;
        for (int r = 0; r <= rmax; ++r) {
            if (best >= 0 && static_cast<double>(r - 1) * cell_ > best_d) break;
            auto scan_cell = [&](int ix, int iy) {
                const std::size_t c = static_cast<std::size_t>((iy % n_ + n_) % n_) * n_ +
                                      static_cast<std::size_t>((ix % n_ + n_) % n_);
                for (int k = start_[c]; k < start_[c + 1]; ++k) {
                    const int idx = order_[k];
                    const double d = torus_dist(p, pts[idx], L_);
                    if (d < best_d || (d == best_d && best >= 0 && idx < best)) {
                        if (pred(idx, d)) {
                            best_d = d;
                            best = idx;
                        }
                    }
                }
            };
            if (r == 0) {
                scan_cell(cx, cy);
                continue;
            }
            for (int ix = cx - r; ix <= cx + r; ++ix) {
                scan_cell(ix, cy - r);
                scan_cell(ix, cy + r);
            }
            for (int iy = cy - r + 1; iy <= cy + r - 1; ++iy) {
                scan_cell(cx - r, iy);
                scan_cell(cx + r, iy);
            }
        }
        if (best < 0) {
            // Predicate rejected everything reachable through the ring walk;
            // exhaustive pass settles it (covers wrap double-visit corners).
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const double d = torus_dist(p, pts[i], L_);
                if (d < best_d && pred(static_cast<int>(i), d)) {
                    best_d = d;
                    best = static_cast<int>(i);
                }
            }
            if (best < 0) return std::nullopt;
        }
        return {{best, best_d}};
    }

private:
    std::size_t cell_index(Vec2 p) const {
        int ix = static_cast<int>(p.x / cell_);
        int iy = static_cast<int>(p.y / cell_);
        ix = std::clamp(ix, 0, n_ - 1);
        iy = std::clamp(iy, 0, n_ - 1);
        return static_cast<std::size_t>(iy) * n_ + ix;
    }

    const std::vector<Vec2>* pts_ = nullptr;
    double L_ = 1.0;
    double cell_ = 1.0;
    int n_ = 1;
    std::vector<int> start_;
    std::vector<int> order_;
    std::vector<std::size_t> cell_of_;  // scratch, reused across build() calls
    std::vector<int> cursor_;           // scratch
};

class DiskGrid {
public:
    void build(const DiskSet& disks, double L) {
        disks_ = &disks;
        L_ = L;
        const double min_cell = std::max(2.0 * disks.radius, L / 64.0);
        n_ = std::clamp<int>(static_cast<int>(L / min_cell), 1, 64);
        cell_ = L / n_;
        const std::size_t cells = static_cast<std::size_t>(n_) * n_;
        start_.assign(cells + 1, 0);
        order_.resize(disks.centers.size());
        std::vector<std::size_t> cell_of(disks.centers.size());
        for (std::size_t i = 0; i < disks.centers.size(); ++i) {
            cell_of[i] = cell_index(disks.centers[i]);
            ++start_[cell_of[i] + 1];
        }
        for (std::size_t c = 1; c <= cells; ++c) start_[c] += start_[c - 1];
        std::vector<int> cursor(start_.begin(), start_.end() - 1);
        for (std::size_t i = 0; i < disks.centers.size(); ++i)
            order_[cursor[cell_of[i]]++] = static_cast<int>(i);
    }

    bool empty() const { return !disks_ || disks_->empty(); }

    bool contains(Vec2 p) const {
        if (empty()) return false;
        const double r2 = (*disks_).radius * (*disks_).radius;
        bool found = false;
        for_each_near_point(p, [&](int idx) {
            if (torus_dist2(p, (*disks_).centers[idx], L_) < r2) found = true;
            return !found;
        });
        return found;
    }

    // Indices of disks strictly containing p.
    void disks_containing(Vec2 p, std::vector<int>& out) const {
        out.clear();
        if (empty()) return;
        const double r2 = (*disks_).radius * (*disks_).radius;
        for_each_near_point(p, [&](int idx) {
            if (torus_dist2(p, (*disks_).centers[idx], L_) < r2) out.push_back(idx);
            return true;
        });
        std::sort(out.begin(), out.end());
    }

    bool point_in_disk(Vec2 p, int disk) const {
        return torus_dist2(p, (*disks_).centers[disk], L_) < (*disks_).radius * (*disks_).radius;
    }

    // Same contract as the reference los_clear().
    bool los(Vec2 a, Vec2 b) const {
        if (empty()) return true;
        const Vec2 delta = torus_delta(a, b, L_);
        const double r2 = (*disks_).radius * (*disks_).radius;
        bool same_disk = false;
        for_each_near_point(a, [&](int idx) {
            const Vec2& c = (*disks_).centers[idx];
            if (torus_dist2(a, c, L_) < r2 && torus_dist2(b, c, L_) < r2) same_disk = true;
            return !same_disk;
        });
        if (same_disk) return true;
        bool blocked = false;
        for_each_near_segment(a, delta, [&](int idx) {
            const Vec2 cf = detail::disk_frame_center(a, delta, (*disks_).centers[idx], L_);
            if (detail::segment_circle_crossings(a, delta, cf, (*disks_).radius) > 0) blocked = true;
            return !blocked;
        });
        return !blocked;
    }

private:
    std::size_t cell_index(Vec2 p) const {
        int ix = static_cast<int>(p.x / cell_);
        int iy = static_cast<int>(p.y / cell_);
        ix = std::clamp(ix, 0, n_ - 1);
        iy = std::clamp(iy, 0, n_ - 1);
        return static_cast<std::size_t>(iy) * n_ + ix;
    }

    // Visits every disk whose center could be within R of p. Visitor returns
    // false to stop early.
    template <class Fn>
    void for_each_near_point(Vec2 p, Fn&& fn) const {
        if (empty()) return;
        const double R = (*disks_).radius;
        visit_box(p.x - R, p.x + R, p.y - R, p.y + R, fn);
    }

    // Visits every disk whose center could be within R of segment a -> a+delta.
    template <class Fn>
    void for_each_near_segment(Vec2 a, Vec2 delta, Fn&& fn) const {
        if (empty()) return;
        const double R = (*disks_).radius;
        const double x0 = std::min(a.x, a.x + delta.x) - R;
        const double x1 = std::max(a.x, a.x + delta.x) + R;
        const double y0 = std::min(a.y, a.y + delta.y) - R;
        const double y1 = std::max(a.y, a.y + delta.y) + R;
        visit_box(x0, x1, y0, y1, fn);
    }

    template <class Fn>
    void visit_box(double x0, double x1, double y0, double y1, Fn&& fn) const {
        int ix0 = static_cast<int>(std::floor(x0 / cell_));
        int ix1 = static_cast<int>(std::floor(x1 / cell_));
        int iy0 = static_cast<int>(std::floor(y0 / cell_));
        int iy1 = static_cast<int>(std::floor(y1 / cell_));
        ix1 = std::min(ix1, ix0 + n_ - 1);  // never cover a cell twice
        iy1 = std::min(iy1, iy0 + n_ - 1);
        for (int iy = iy0; iy <= iy1; ++iy) {
            const std::size_t row = static_cast<std::size_t>((iy % n_ + n_) % n_) * n_;
            for (int ix = ix0; ix <= ix1; ++ix) {
                const std::size_t c = row + static_cast<std::size_t>((ix % n_ + n_) % n_);
                for (int k = start_[c]; k < start_[c + 1]; ++k)
                    if (!fn(order_[k])) return;
            }
        }
    }

    const DiskSet* disks_ = nullptr;
    double L_ = 1.0;
    double cell_ = 1.0;
    int n_ = 1;
    std::vector<int> start_;
    std::vector<int> order_;
};

}  // namespace udn
