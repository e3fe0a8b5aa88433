#include "hypent/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <vector>

namespace hypent {
namespace {

// Kronrod abscissae (positive half, descending) and weights; every other
// node from index 1 is a Gauss node.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    Jet integral, l1, err;
    double priority;
    bool operator<(const Panel& o) const { return priority < o.priority; }
};

Panel gk15(const JetIntegrand& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const Jet fc = f(c);
    const int m = fc.order();
    Jet resk = fc * kWgk[7];
    Jet resg = fc * kWg[3];
    Jet l1(m);
    for (int k = 0; k <= m; ++k) l1[k] = std::abs(fc[k]) * kWgk[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const Jet f1 = f(c - dx);
        const Jet f2 = f(c + dx);
        resk += (f1 + f2) * kWgk[j];
        if (j % 2 == 1) resg += (f1 + f2) * kWg[j / 2];
        for (int k = 0; k <= m; ++k) l1[k] += (std::abs(f1[k]) + std::abs(f2[k])) * kWgk[j];
    }
    Panel p{a, b, resk * h, l1 * std::abs(h), Jet(m), 0.0};
    for (int k = 0; k <= m; ++k) p.err[k] = std::abs((resk[k] - resg[k]) * h);
    return p;
}

}  // namespace

QuadratureResult integrate_adaptive(const JetIntegrand& f, double a, double b,
                                    const QuadratureOptions& opts) {
    return integrate_adaptive(f, std::vector<double>{a, b}, opts);
}

QuadratureResult integrate_adaptive(const JetIntegrand& f, const std::vector<double>& breaks,
                                    const QuadratureOptions& opts) {
    if (breaks.size() < 2) throw std::invalid_argument("integrate_adaptive: need two limits");
    std::vector<Panel> initial;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        initial.push_back(gk15(f, breaks[i], breaks[i + 1]));
    const int m = initial.front().integral.order();
    Jet l1(m), err(m);
    for (const auto& p : initial) {
        l1 += p.l1;
        err += p.err;
    }

    auto rel_excess = [&](const Jet& e, const Jet& scale) {
        double worst = 0.0;
        for (int k = 0; k <= m; ++k) {
            const double allowed = opts.rel_tol * scale[k] + opts.abs_tol;
            const double ratio = allowed > 0.0 ? e[k] / allowed : (e[k] > 0.0 ? 1e300 : 0.0);
            worst = std::max(worst, ratio);
        }
        return worst;
    };
    auto priority_of = [&](Panel& p) {
        double pr = 0.0;
        for (int k = 0; k <= m; ++k) {
            const double s = l1[k] > 0.0 ? l1[k] : 1.0;
            pr = std::max(pr, p.err[k] / s);
        }
        p.priority = pr;
    };
    std::priority_queue<Panel> work;
    for (auto& p : initial) {
        priority_of(p);
        work.push(p);
    }

    int panels = static_cast<int>(initial.size());
    while (rel_excess(err, l1) > 1.0) {
        if (panels >= opts.max_panels) {
            double achieved = 0.0;
            for (int k = 0; k <= m; ++k)
                achieved = std::max(achieved, l1[k] > 0.0 ? err[k] / l1[k] : 0.0);
            throw QuadratureError("adaptive quadrature did not converge", achieved);
        }
        Panel worst = work.top();
        work.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Panel left = gk15(f, worst.a, mid);
        Panel right = gk15(f, mid, worst.b);
        l1 += (left.l1 + right.l1) - worst.l1;
        err += (left.err + right.err) - worst.err;
        priority_of(left);
        priority_of(right);
        work.push(left);
        work.push(right);
        ++panels;
    }

    // Re-sum from the panel list to shed the drift of incremental updates.
    Jet sum(m), esum(m);
    while (!work.empty()) {
        sum += work.top().integral;
        esum += work.top().err;
        work.pop();
    }
    return {sum, esum, panels};
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const QuadratureOptions& opts) {
    auto wrapped = [&f](double x) { return Jet(0, f(x)); };
    return integrate_adaptive(JetIntegrand(wrapped), a, b, opts).value.value();
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0, p1 = x;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        nodes[lo] = -x;
        nodes[hi] = x;
        weights[lo] = weights[hi] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

}  // namespace hypent
