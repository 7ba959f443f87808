#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace udn {

// Adaptive Gauss-Kronrod 7-15 on a finite interval. The integrands here are
// smooth with algebraic tails, so plain interval bisection on the K15 error
// estimate converges quickly.
template <class Func>
double integrate(Func&& f, double a, double b, double rel_tol = 1e-12, double abs_tol = 1e-15) {
    // Nodes on [0,1] half-interval: {abscissa, Gauss weight, Kronrod weight}.
    static const double nw[8][3] = {
        {0.000000000000000, 0.417959183673469, 0.209482141084728},
        {0.405845151377397, 0.381830050505119, 0.190350578064785},
        {0.741531185599394, 0.279705391489277, 0.140653259715525},
        {0.949107912342759, 0.129484966168870, 0.063092092629979},
        {0.207784955007898, 0.0, 0.204432940075298},
        {0.586087235467691, 0.0, 0.169004726639267},
        {0.864864423359769, 0.0, 0.104790010322250},
        {0.991455371120813, 0.0, 0.022935322010529},
    };
    auto gk = [&](double lo, double hi, double& err) {
        const double mid = 0.5 * (lo + hi);
        const double h = hi - mid;
        const double y0 = f(mid);
        double g7 = nw[0][1] * y0;
        double k15 = nw[0][2] * y0;
        for (int i = 1; i < 8; ++i) {
            const double dx = h * nw[i][0];
            const double yi = f(mid + dx) + f(mid - dx);
            g7 += nw[i][1] * yi;
            k15 += nw[i][2] * yi;
        }
        g7 *= h;
        k15 *= h;
        err = std::abs(g7 - k15);
        return k15;
    };

    struct Interval {
        double lo, hi;
        int depth;
    };
    std::vector<Interval> stack{{a, b, 0}};
    double sum = 0.0;
    double comp = 0.0;  // Neumaier compensation
    constexpr int kMaxDepth = 48;
    while (!stack.empty()) {
        const Interval iv = stack.back();
        stack.pop_back();
        double err = 0.0;
        const double s = gk(iv.lo, iv.hi, err);
        if (err <= rel_tol * std::abs(s) + abs_tol || iv.depth >= kMaxDepth) {
            const double t = sum + s;
            comp += (std::abs(sum) >= std::abs(s)) ? (sum - t) + s : (s - t) + sum;
            sum = t;
            continue;
        }
        const double mid = 0.5 * (iv.lo + iv.hi);
        stack.push_back({iv.lo, mid, iv.depth + 1});
        stack.push_back({mid, iv.hi, iv.depth + 1});
    }
    return sum + comp;
}

}  // namespace udn
