#include "hypent/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace hypent {

NelderMeadResult nelder_mead(const std::function<double(const Vec&)>& f, const Vec& x0,
                             const Vec& steps, const NelderMeadOptions& opts,
                             const std::function<void(const Vec&, double)>& on_accept) {
    const auto n = static_cast<int>(x0.size());
    int evals = 0;
    auto eval = [&](const Vec& x) {
        ++evals;
        const double v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };

    std::vector<Vec> pts(static_cast<std::size_t>(n + 1), x0);
    std::vector<double> vals(static_cast<std::size_t>(n + 1));
    for (int i = 0; i < n; ++i) pts[static_cast<std::size_t>(i + 1)][i] += steps[i];
    for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = eval(pts[i]);

    std::vector<std::size_t> order(pts.size());
    double best_seen = std::numeric_limits<double>::infinity();
    bool converged = false;
    while (evals < opts.max_evals) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        const std::size_t lo = order.front(), hi = order.back(), nh = order[order.size() - 2];
        if (vals[lo] < best_seen) {
            best_seen = vals[lo];
            if (on_accept) on_accept(pts[lo], vals[lo]);
        }

        double diam = 0.0;
        for (const auto& p : pts) diam = std::max(diam, (p - pts[lo]).cwiseAbs().maxCoeff());
        const double spread = std::abs(vals[hi] - vals[lo]);
        if (std::isfinite(vals[hi]) && spread <= opts.f_tol * (1.0 + std::abs(vals[lo])) &&
            diam <= std::max(opts.x_tol, 1e3 * opts.x_tol * spread)) {
            converged = true;
            break;
        }
        if (diam <= 1e-3 * opts.x_tol) {
            converged = true;
            break;
        }

        Vec centroid = Vec::Zero(n);
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (i != hi) centroid += pts[i];
        centroid /= n;

        const Vec xr = centroid + (centroid - pts[hi]);
        const double fr = eval(xr);
        if (fr < vals[lo]) {
            const Vec xe = centroid + 2.0 * (centroid - pts[hi]);
            const double fe = eval(xe);
            if (fe < fr) {
                pts[hi] = xe;
                vals[hi] = fe;
            } else {
                pts[hi] = xr;
                vals[hi] = fr;
            }
            continue;
        }
        if (fr < vals[nh]) {
            pts[hi] = xr;
            vals[hi] = fr;
            continue;
        }
        const bool outside = fr < vals[hi];
        const Vec xc = outside ? Vec(centroid + 0.5 * (xr - centroid))
                               : Vec(centroid + 0.5 * (pts[hi] - centroid));
        const double fc = eval(xc);
        if (fc < (outside ? fr : vals[hi])) {
            pts[hi] = xc;
            vals[hi] = fc;
            continue;
        }
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i == lo) continue;
            pts[i] = pts[lo] + 0.5 * (pts[i] - pts[lo]);
            vals[i] = eval(pts[i]);
        }
    }
    const auto best = static_cast<std::size_t>(
        std::min_element(vals.begin(), vals.end()) - vals.begin());
    if (vals[best] < best_seen && on_accept) on_accept(pts[best], vals[best]);
    return {pts[best], vals[best], evals, converged};
}

}  // namespace hypent
