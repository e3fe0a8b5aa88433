#include "hypent/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "hypent/heatkernel.hpp"
#include "hypent/optimize.hpp"
#include "hypent/parallel.hpp"
#include "hypent/quadrature.hpp"

namespace hypent {
namespace {

constexpr double kPi = std::numbers::pi;

double volume_after(const BoundaryCurve& g, const Vec& a) {
    const auto& p = g.points();
    auto image = [&](std::size_t i) {
        const Vec y = mobius_translate_coords(a, p[i].direction());
        return Vec(y / y.norm());
    };
    const std::size_t n = p.size();
    const std::size_t edges = g.closed() ? n : n - 1;
    Vec first = image(0), prev = first;
    double s = 0.0;
    for (std::size_t i = 1; i <= edges; ++i) {
        const Vec cur = i < n ? image(i) : first;
        s += sphere_dist(prev, cur);
        prev = cur;
    }
    return s;
}

Mat disk_frame_at_origin(const GeodesicDisk& d) {
    Eigen::HouseholderQR<Mat> qr(d.frame);
    return qr.householderQ() * Mat::Identity(d.frame.rows(), d.frame.cols());
}

}  // namespace

BoundaryCurve::BoundaryCurve(std::vector<IdealPoint> points, bool closed)
    : pts_(std::move(points)), closed_(closed) {
    if (pts_.size() < 2) throw std::invalid_argument("BoundaryCurve: need >= 2 points");
    for (const auto& p : pts_)
        if (p.dim() != pts_.front().dim())
            throw std::invalid_argument("BoundaryCurve: mixed dimensions");
    const std::size_t edges = closed_ ? pts_.size() : pts_.size() - 1;
    for (std::size_t i = 0; i < edges; ++i)
        if (sphere_dist(pts_[i].direction(), pts_[(i + 1) % pts_.size()].direction()) <= 0.0)
            throw std::invalid_argument("BoundaryCurve: repeated consecutive point");
}

double spherical_volume(const BoundaryCurve& g) { return volume_after(g, Vec::Zero(g.dim())); }

BoundaryCurve transform(const BoundaryCurve& g, const BallIsometry& T) {
    std::vector<IdealPoint> out;
    out.reserve(g.points().size());
    for (const auto& p : g.points()) out.push_back(T.extend_to_boundary(p));
    return BoundaryCurve(std::move(out), g.closed());
}

BoundaryCurve latitude_circle(double theta, int samples) {
    if (samples < 3) throw std::invalid_argument("latitude_circle: need >= 3 samples");
    std::vector<IdealPoint> pts;
    for (int k = 0; k < samples; ++k) {
        const double ph = 2.0 * kPi * k / samples;
        Vec u(3);
        u << std::sin(theta) * std::cos(ph), std::sin(theta) * std::sin(ph), std::cos(theta);
        pts.push_back(IdealPoint::from_direction(u));
    }
    return BoundaryCurve(std::move(pts), true);
}

BoundaryCurve ideal_boundary(const GeodesicDisk& d, int samples) {
    if (d.dim() != 2) throw std::invalid_argument("ideal_boundary: disk must be 2-dimensional");
    if (samples < 3) throw std::invalid_argument("ideal_boundary: need >= 3 samples");
    const Mat q = disk_frame_at_origin(d);
    std::vector<IdealPoint> pts;
    for (int k = 0; k < samples; ++k) {
        const double ph = 2.0 * kPi * k / samples;
        const Vec u = std::cos(ph) * q.col(0) + std::sin(ph) * q.col(1);
        const Vec y = mobius_translate_coords(d.base.coords(), u);
        pts.push_back(IdealPoint::from_direction(y));
    }
    return BoundaryCurve(std::move(pts), true);
}

double boundary_volume_from(const BoundaryCurve& g, const BallPoint& p0) {
    return volume_after(g, -p0.coords());
}

ConformalVolumeResult conformal_volume(const BoundaryCurve& g, const ConformalVolumeConfig& cfg) {
    if (!g.closed()) throw std::invalid_argument("conformal_volume: curve must be closed");
    if (!(cfg.cap > 0.0 && cfg.cap < 1.0)) throw std::invalid_argument("conformal_volume: cap must lie in (0, 1)");
    const int d = g.dim();
    const double xcap = 2.0 * std::atanh(cfg.cap);
    auto to_a = [](const Vec& x) {
        const double n = x.norm();
        return n == 0.0 ? Vec(x) : Vec(std::tanh(0.5 * n) * x / n);
    };
    auto objective = [&](const Vec& x) {
        if (x.norm() > xcap) return std::numeric_limits<double>::infinity();
        return -volume_after(g, to_a(x));
    };

    ConformalVolumeResult res;
    res.identity_value = spherical_volume(g);

    // Seeds: origin, coordinate axes and curve directions at two depths.
    std::vector<Vec> dirs;
    for (int i = 0; i < d; ++i) {
        dirs.push_back(Vec::Unit(d, i));
        dirs.push_back(-Vec::Unit(d, i));
    }
    const std::size_t stride = std::max<std::size_t>(1, g.points().size() / 4);
    for (std::size_t i = 0; i < g.points().size(); i += stride) {
        dirs.push_back(g.points()[i].direction());
        dirs.push_back(-g.points()[i].direction());
    }
    std::vector<Vec> seeds{Vec::Zero(d)};
    for (double depth : {0.5, 1.5})
        for (const auto& u : dirs) seeds.push_back(depth * u);
    std::vector<double> seed_val(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) seed_val[i] = -objective(seeds[i]);
    res.evaluations += static_cast<int>(seeds.size());
    std::vector<std::size_t> order(seeds.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return seed_val[a] > seed_val[b]; });
    const std::size_t starts = std::min<std::size_t>(static_cast<std::size_t>(cfg.starts), seeds.size());

    std::vector<NelderMeadResult> runs(starts);
    parallel_for(starts, cfg.threads, [&](std::size_t si) {
        std::mt19937_64 rng(cfg.seed * 1000003ULL + si);
        std::uniform_real_distribution<double> jitter(-0.1, 0.1);
        Vec steps(d);
        for (int i = 0; i < d; ++i) steps[i] = 0.3 * (1.0 + jitter(rng));
        NelderMeadOptions nmo;
        nmo.max_evals = cfg.max_evals;
        nmo.f_tol = 1e-13;
        nmo.x_tol = 1e-8;
        runs[si] = nelder_mead(objective, seeds[order[si]], steps, nmo);
    });

    Vec best = seeds[order.front()];
    double best_val = seed_val[order.front()];
    for (const auto& r : runs) {
        res.evaluations += r.evals;
        if (-r.f > best_val) {
            best_val = -r.f;
            best = r.x;
        }
    }
    res.value = best_val;
    res.argmax_translation = to_a(best);
    res.status = best.norm() >= 0.99 * xcap ? SearchStatus::BoundaryOfSearchDomain
                                            : SearchStatus::Converged;
    return res;
}

BoundaryLimitResult boundary_limit(const Submanifold& s, const BallPoint& p0,
                                   const std::vector<double>& radii) {
    if (radii.size() < 2) throw std::invalid_argument("boundary_limit: need >= 2 radii");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] > radii[i - 1])) throw std::invalid_argument("boundary_limit: radii must increase");
    BoundaryLimitResult res;
    res.radii = radii;
    const int n = submanifold_dim(s);
    for (double r : radii) {
        SliceResult sl;
        if (const auto* d = std::get_if<GeodesicDisk>(&s))
            sl = sphere_slice(*d, p0, r);
        else if (const auto* m = std::get_if<TriMeshSurface>(&s))
            sl = sphere_slice(*m, p0, r);
        else
            throw std::invalid_argument("boundary_limit: needs a disk or a triangle mesh");
        if (sl.skipped > 0)
            res.warnings.push_back(std::to_string(sl.skipped) + " tangential triangles skipped at r = " +
                                   std::to_string(r));
        res.ratios.push_back(sl.volume / std::pow(std::sinh(r), n - 1));
    }
    const std::size_t k = radii.size();
    const double r1 = radii[k - 2], r2 = radii[k - 1];
    const double q1 = res.ratios[k - 2], q2 = res.ratios[k - 1];
    const double w = std::exp(-2.0 * r2) / (std::exp(-2.0 * r1) - std::exp(-2.0 * r2));
    res.limit = q2 + (q2 - q1) * w;
    if (k >= 3) {
        const double d1 = res.ratios[k - 2] - res.ratios[k - 3];
        const double d2 = q2 - q1;
        const double noise = 1e-12 * std::max(1.0, std::abs(q2));
        if (d1 * d2 < 0.0 && std::abs(d2) > noise && std::abs(d1) > noise)
            res.warnings.push_back("non-monotone tail in the slice ratios");
    }
    return res;
}

LimitPropResult limit_prop_check(const GeodesicDisk& d, const BallPoint& p0,
                                 const std::vector<double>& taus) {
    if (taus.size() < 2) throw std::invalid_argument("limit_prop_check: need >= 2 values of tau");
    LimitPropResult res;
    res.taus = taus;
    const FFunctional F(d);
    for (double tau : taus) res.values.push_back(F(p0, tau));

    res.limit = res.values.back();
    res.boundary_side = boundary_limit(d, p0).limit / sphere_volume(d.dim() - 1);

    // Part of F within distance 5 of p0 at the largest tau.
    const double tau = taus.back();
    const DiskFoot foot = disk_foot(d, p0);
    const double b = foot.offset;
    constexpr double kInner = 5.0;
    if (kInner > b) {
        const double cb = std::cosh(b);
        const double smax = std::acosh(std::cosh(kInner) / cb);
        const int n = d.dim();
        auto f = [&](double s) {
            const double m = n == 1 ? 2.0 : disk_slice_measure(d, foot, s);
            if (!(m > 0.0) || !(s > 0.0 || n == 1)) return Jet(0, 0.0);
            const double h = std::sinh(0.5 * s);
            const double z = 2.0 * h * h * cb + 2.0 * std::sinh(0.5 * b) * std::sinh(0.5 * b);
            const double dist = 2.0 * std::asinh(std::sqrt(0.5 * z));
            return Jet(0, std::exp(log_kernel(n, tau, dist) + std::log(m) +
                                   (n - 1) * std::log(std::sinh(std::max(s, 1e-300)))));
        };
        QuadratureOptions opts;
        opts.rel_tol = 1e-10;
        res.bounded_contribution = integrate_adaptive(JetIntegrand(f), 0.0, smax, opts).value.value();
    }
    return res;
}

ComparisonReport entropy_vs_conformal(const GeodesicDisk& d, const ComparisonConfig& cfg) {
    if (d.dim() != 2) throw std::invalid_argument("entropy_vs_conformal: disk must be 2-dimensional");
    ComparisonReport rep;
    const GeodesicDisk truncated(d.base, d.frame, std::min(d.truncation, cfg.truncation));
    rep.entropy_result = entropy(truncated, cfg.entropy);
    const auto& er = rep.entropy_result;
    rep.warnings = er.warnings;
    if (d.truncation > cfg.truncation) {
        try {
            rep.entropy_tail = f_functional(d, er.argmax_p0, er.argmax_tau) -
                               f_functional(truncated, er.argmax_p0, er.argmax_tau);
        } catch (const std::exception& e) {
            rep.warnings.push_back(std::string("tail estimate unavailable: ") + e.what());
        }
    }
    if (rep.entropy_tail > 0.01) rep.warnings.push_back("truncation tail exceeds 1%");
    rep.entropy = er.value + rep.entropy_tail;

    rep.conformal_result = conformal_volume(ideal_boundary(d, cfg.boundary_samples), cfg.conformal);
    rep.conformal_ratio = rep.conformal_result.value / sphere_volume(1);
    rep.difference = rep.entropy - rep.conformal_ratio;
    rep.inequality_holds = rep.entropy + 0.01 >= rep.conformal_ratio;
    return rep;
}

}  // namespace hypent
