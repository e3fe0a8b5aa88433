#include "hypent/functional.hpp"

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
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_kernel_or_neg_inf(int n, double tau, double d) {
    return d > kMaxRho ? kNegInf : log_kernel(n, tau, d);
}

// d from cosh d - 1 = z without cancellation.
double dist_from_zeta(double z) { return 2.0 * std::asinh(std::sqrt(0.5 * std::max(z, 0.0))); }

double integrate(const std::function<double(double)>& f, std::vector<double> breaks,
                 double rel_tol) {
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    if (breaks.size() < 2) return 0.0;
    QuadratureOptions opts;
    opts.rel_tol = rel_tol;
    opts.max_panels = 4000;
    auto jf = [&](double x) { return Jet(0, f(x)); };
    return integrate_adaptive(JetIntegrand(jf), breaks, opts).value.value();
}

double sphere_functional(const GeodesicSphere& g, const BallPoint& p0, double tau, double rel) {
    const int n = g.sphere_dim();
    const double r = g.radius;
    const double a = hyp_dist(g.center, p0);
    const double log_sh = std::log(std::sinh(r));
    if (a < 1e-13)
        return std::exp(std::log(sphere_volume(n)) + n * log_sh + log_kernel_or_neg_inf(n, tau, r));

    const double log_w = std::log(sphere_volume(n - 1)) + n * log_sh;
    const double shh = std::sinh(0.5 * (r - a));
    const double zeta0 = 2.0 * shh * shh;
    const double ss = std::sinh(r) * std::sinh(a);
    auto f = [&](double th) {
        const double sh = std::sin(0.5 * th);
        const double d = dist_from_zeta(zeta0 + 2.0 * ss * sh * sh);
        double l = log_kernel_or_neg_inf(n, tau, d) + log_w;
        if (n > 1) {
            const double st = std::sin(th);
            if (!(st > 0.0)) return 0.0;
            l += (n - 1) * std::log(st);
        }
        return std::exp(l);
    };
    std::vector<double> breaks{0.0, kPi};
    for (double k : {1.0, 4.0, 16.0}) {
        const double x = k * std::sqrt(tau / (2.0 * ss));
        if (x < 1.0) breaks.push_back(2.0 * std::asin(x));
    }
    return integrate(f, breaks, rel);
}

double disk_functional(const GeodesicDisk& disk, const BallPoint& p0, double tau, double rel) {
    const int n = disk.dim();
    const DiskFoot foot = disk_foot(disk, p0);
    const double b = foot.offset;
    const double cb = std::cosh(b);
    const double hb = 2.0 * std::sinh(0.5 * b) * std::sinh(0.5 * b);
    auto dist_at = [&](double s) {
        const double h = std::sinh(0.5 * s);
        return dist_from_zeta(2.0 * h * h * cb + hb);
    };
    // In-disk radius about the foot at which d(p0, .) reaches D.
    auto s_of_d = [&](double D) {
        if (D <= b) return 0.0;
        const double num = 2.0 * std::sinh(0.5 * (D + b)) * std::sinh(0.5 * (D - b));
        return 2.0 * std::asinh(std::sqrt(num / (2.0 * cb)));
    };
    const double dcut = (n - 1) * tau + 16.0 * std::sqrt(tau) + b + 5.0;
    const double scut = s_of_d(std::min(dcut, kMaxRho));
    const double R = disk.truncation;

    if (n == 1) {
        double lo = -scut, hi = scut;
        if (disk.truncated()) {
            lo = std::max(lo, -R - foot.signed_foot);
            hi = std::min(hi, R - foot.signed_foot);
        }
        const bool cut_short = dcut > kMaxRho &&
                               (!disk.truncated() || R + std::abs(foot.signed_foot) > scut);
        if (cut_short) throw std::domain_error("f_functional: tau too large for this disk");
        if (!(hi > lo)) return 0.0;
        auto f = [&](double u) { return std::exp(log_kernel_or_neg_inf(1, tau, dist_at(std::abs(u)))); };
        std::vector<double> breaks{lo, hi};
        auto add = [&](double x) {
            if (x > lo && x < hi) breaks.push_back(x);
        };
        add(0.0);
        for (double k : {1.0, 4.0, 16.0}) {
            const double s = s_of_d(b + k * std::sqrt(tau));
            add(s);
            add(-s);
        }
        return integrate(f, breaks, rel);
    }

    double upper = scut;
    if (disk.truncated()) upper = std::min(upper, R + foot.base_to_foot);
    const bool cut_short =
        dcut > kMaxRho && (!disk.truncated() || R + foot.base_to_foot > scut);
    if (cut_short) throw std::domain_error("f_functional: tau too large for this disk");
    auto f = [&](double s) {
        if (s <= 0.0) return 0.0;
        const double m = disk_slice_measure(disk, foot, s);
        if (!(m > 0.0)) return 0.0;
        return std::exp(log_kernel_or_neg_inf(n, tau, dist_at(s)) + std::log(m) +
                        (n - 1) * std::log(std::sinh(s)));
    };
    std::vector<double> breaks{0.0, upper};
    auto add = [&](double x) {
        if (x > 0.0 && x < upper) breaks.push_back(x);
    };
    for (double k : {1.0, 4.0, 16.0}) add(s_of_d(b + k * std::sqrt(tau)));
    if (disk.truncated()) {
        add(std::abs(R - foot.base_to_foot));
        add(R + foot.base_to_foot);
    }
    return integrate(f, breaks, rel);
}

std::vector<BallPoint> seed_points(const Submanifold& s, int count) {
    std::vector<BallPoint> pool;
    if (const auto* c = std::get_if<DiscreteCurve>(&s)) {
        pool = c->vertices();
    } else if (const auto* m = std::get_if<TriMeshSurface>(&s)) {
        pool = m->vertices();
    } else if (const auto* g = std::get_if<GeodesicSphere>(&s)) {
        VolumeOptions vo;
        vo.angular_nodes = 8;
        for (const auto& e : volume_elements(s, vo)) pool.push_back(e.point);
        (void)g;
    } else if (const auto* d = std::get_if<GeodesicDisk>(&s)) {
        const double r = std::min(d->truncation, 2.0) * 0.5;
        for (Eigen::Index j = 0; j < d->frame.cols(); ++j) {
            pool.push_back(exp_map(d->base, r * Vec(d->frame.col(j))));
            pool.push_back(exp_map(d->base, -r * Vec(d->frame.col(j))));
        }
    }
    std::vector<BallPoint> out;
    if (pool.empty() || count <= 0) return out;
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(count), pool.size());
    for (std::size_t i = 0; i < k; ++i) out.push_back(pool[i * pool.size() / k]);
    return out;
}

std::pair<BallPoint, double> search_ball(const Submanifold& s) {
    auto from_points = [](const std::vector<BallPoint>& v) {
        const BallPoint c = hyperbolic_centroid(v);
        double r = 0.0;
        for (const auto& p : v) r = std::max(r, hyp_dist(c, p));
        return std::make_pair(c, r);
    };
    if (const auto* c = std::get_if<DiscreteCurve>(&s)) return from_points(c->vertices());
    if (const auto* m = std::get_if<TriMeshSurface>(&s)) return from_points(m->vertices());
    if (const auto* g = std::get_if<GeodesicSphere>(&s)) return {g->center, g->radius};
    const auto& d = std::get<GeodesicDisk>(s);
    if (!d.truncated()) throw std::invalid_argument("entropy: disk must be truncated");
    return {d.base, d.truncation};
}

}  // namespace

FunctionalQuery::FunctionalQuery(BallPoint p, double t, int dim) : p0(std::move(p)), tau(t), n(dim) {
    if (!(tau > 0.0)) throw std::invalid_argument("FunctionalQuery: tau must be > 0");
}

FFunctional::FFunctional(Submanifold s, FunctionalOptions opts)
    : s_(std::move(s)), opts_(opts), n_(submanifold_dim(s_)) {
    if (std::holds_alternative<DiscreteCurve>(s_) || std::holds_alternative<TriMeshSurface>(s_))
        samples_ = volume_elements(s_, opts_.volume);
}

double FFunctional::operator()(const BallPoint& p0, double tau) const {
    if (!(tau > 0.0)) throw std::invalid_argument("f_functional: tau must be > 0");
    if (p0.dim() != ambient_dim(s_)) throw std::invalid_argument("f_functional: dimension mismatch");
    if (const auto* g = std::get_if<GeodesicSphere>(&s_))
        return sphere_functional(*g, p0, tau, opts_.rel_tol);
    if (const auto* d = std::get_if<GeodesicDisk>(&s_))
        return disk_functional(*d, p0, tau, opts_.rel_tol);
    double sum = 0.0;
    for (const auto& e : samples_) {
        const double l = log_kernel_or_neg_inf(n_, tau, hyp_dist(e.point, p0));
        sum += e.weight * std::exp(l);
    }
    return sum;
}

double f_functional(const Submanifold& s, const BallPoint& p0, double tau,
                    const FunctionalOptions& opts) {
    return FFunctional(s, opts)(p0, tau);
}

double ReferenceConstants::euclidean_entropy_S1() { return std::sqrt(2.0 * kPi / std::exp(1.0)); }
double ReferenceConstants::euclidean_entropy_S2() { return 4.0 / std::exp(1.0); }
double ReferenceConstants::euclidean_entropy_S1xR() { return euclidean_entropy_S1(); }
double ReferenceConstants::vol_sphere(int m) { return sphere_volume(m); }

std::string to_string(SearchStatus s) {
    return s == SearchStatus::Converged ? "converged" : "boundary-of-search-domain";
}

EntropyResult entropy(const Submanifold& s, const EntropyConfig& cfg) {
    if (!(cfg.tau_min > 0.0) || !(cfg.tau_max > cfg.tau_min) || cfg.tau_grid < 1 ||
        cfg.starts < 1)
        throw std::invalid_argument("entropy: invalid search configuration");
    const FFunctional F(s, cfg.functional);
    const int d = ambient_dim(s);
    const auto [center, extent] = search_ball(s);
    const double R1 = extent + cfg.radius_margin;
    const double lt_min = std::log(cfg.tau_min), lt_max = std::log(cfg.tau_max);

    EntropyResult res;
    res.search_center = center;
    res.search_radius = R1;

    std::vector<BallPoint> p_seeds{center};
    for (auto& p : seed_points(s, cfg.vertex_seeds)) p_seeds.push_back(p);
    struct Seed {
        std::size_t p;
        double log_tau;
        double value;
    };
    std::vector<Seed> seeds;
    for (std::size_t i = 0; i < p_seeds.size(); ++i)
        for (int k = 0; k < cfg.tau_grid; ++k)
            seeds.push_back({i,
                             cfg.tau_grid == 1 ? 0.5 * (lt_min + lt_max)
                                               : lt_min + (lt_max - lt_min) * k / (cfg.tau_grid - 1.0),
                             kNegInf});
    std::vector<std::string> seed_warn(seeds.size());
    parallel_for(seeds.size(), cfg.threads, [&](std::size_t i) {
        try {
            const double v = F(p_seeds[seeds[i].p], std::exp(seeds[i].log_tau));
            if (std::isfinite(v))
                seeds[i].value = v;
            else
                seed_warn[i] = "non-finite F at a seed; discarded";
        } catch (const std::exception& e) {
            seed_warn[i] = std::string("seed probe failed: ") + e.what();
        }
    });
    res.evaluations += static_cast<int>(seeds.size());
    for (const auto& sd : seeds)
        if (std::isfinite(sd.value))
            res.trace.push_back({p_seeds[sd.p].coords(), std::exp(sd.log_tau), sd.value, -1});
    for (auto& w : seed_warn)
        if (!w.empty()) res.warnings.push_back(w);

    std::vector<std::size_t> order(seeds.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (seeds[a].value != seeds[b].value) return seeds[a].value > seeds[b].value;
        return seeds[a].log_tau < seeds[b].log_tau;
    });
    const std::size_t starts = std::min<std::size_t>(static_cast<std::size_t>(cfg.starts), order.size());

    struct StartResult {
        Vec p;
        double tau = 0.0;
        double value = kNegInf;
        std::vector<TraceEntry> trace;
        int evals = 0;
        int discarded = 0;
    };
    std::vector<StartResult> runs(starts);
    parallel_for(starts, cfg.threads, [&](std::size_t si) {
        const Seed& sd = seeds[order[si]];
        StartResult& out = runs[si];
        BallPoint chart = p_seeds[sd.p];
        double log_tau = sd.log_tau;
        std::mt19937_64 rng(cfg.seed * 1000003ULL + si);
        std::uniform_real_distribution<double> jitter(-0.1, 0.1);

        for (int pass = 0; pass < 2; ++pass) {
            auto to_point = [&](const Vec& x) { return exp_map(chart, x.head(d)); };
            auto objective = [&](const Vec& x) {
                if (x[d] < lt_min || x[d] > lt_max) return std::numeric_limits<double>::infinity();
                try {
                    const BallPoint p = to_point(x);
                    if (hyp_dist(p, center) > R1) return std::numeric_limits<double>::infinity();
                    const double v = F(p, std::exp(x[d]));
                    if (!std::isfinite(v)) {
                        ++out.discarded;
                        return std::numeric_limits<double>::infinity();
                    }
                    return -v;
                } catch (const std::exception&) {
                    ++out.discarded;
                    return std::numeric_limits<double>::infinity();
                }
            };
            Vec x0 = Vec::Zero(d + 1);
            x0[d] = log_tau;
            const double scale = (pass == 0 ? 1.0 : 0.2) *
                                 std::clamp(std::sqrt(std::exp(log_tau)), 1e-3, 1.0);
            Vec steps(d + 1);
            for (int i = 0; i < d; ++i) steps[i] = scale * (1.0 + jitter(rng));
            steps[d] = (pass == 0 ? 0.7 : 0.15) * (1.0 + jitter(rng));
            if (x0[d] + steps[d] > lt_max) steps[d] = -steps[d];
            NelderMeadOptions nmo;
            nmo.max_evals = cfg.max_evals;
            nmo.f_tol = 1e-12;
            nmo.x_tol = 1e-7;
            const auto nm = nelder_mead(objective, x0, steps, nmo, [&](const Vec& x, double v) {
                if (!std::isfinite(v)) return;
                out.trace.push_back({to_point(x).coords(), std::exp(x[d]), -v, static_cast<int>(si)});
            });
            out.evals += nm.evals;
            if (std::isfinite(nm.f) && -nm.f >= out.value) {
                out.value = -nm.f;
                out.p = to_point(nm.x).coords();
                out.tau = std::exp(nm.x[d]);
            }
            if (out.value > kNegInf) {
                chart = BallPoint(out.p);
                log_tau = std::log(out.tau);
            }
        }
    });

    // Seed-grid best is a candidate as well, so the result dominates every seed.
    const Seed& top = seeds[order.front()];
    res.value = top.value;
    res.argmax_p0 = p_seeds[top.p];
    res.argmax_tau = std::exp(top.log_tau);
    int discarded = 0;
    for (const auto& r : runs) {
        res.evaluations += r.evals;
        discarded += r.discarded;
        res.trace.insert(res.trace.end(), r.trace.begin(), r.trace.end());
        if (r.value > res.value || (r.value == res.value && r.tau < res.argmax_tau)) {
            res.value = r.value;
            res.argmax_p0 = BallPoint(r.p);
            res.argmax_tau = r.tau;
        }
    }
    if (discarded > 0)
        res.warnings.push_back(std::to_string(discarded) + " probes discarded (non-finite or failed)");
    if (!std::isfinite(res.value)) throw std::runtime_error("entropy: no finite probe");

    const double lt = std::log(res.argmax_tau);
    const double span = lt_max - lt_min;
    const bool near_tau = lt - lt_min <= 0.01 * span || lt_max - lt <= 0.01 * span;
    const bool near_p = hyp_dist(res.argmax_p0, center) >= 0.99 * R1;
    res.status = (near_tau || near_p) ? SearchStatus::BoundaryOfSearchDomain : SearchStatus::Converged;
    return res;
}

SmallTauResult small_tau_limit(const Submanifold& s, const BallPoint& p0,
                               const std::vector<double>& taus, const FunctionalOptions& opts) {
    if (taus.size() < 2) throw std::invalid_argument("small_tau_limit: need >= 2 values of tau");
    const FFunctional F(s, opts);
    SmallTauResult res;
    res.taus = taus;
    double h = 0.0;
    if (const auto* c = std::get_if<DiscreteCurve>(&s)) h = c->max_edge();
    if (const auto* m = std::get_if<TriMeshSurface>(&s)) {
        for (const auto& t : m->triangles())
            for (int i = 0; i < 3; ++i)
                h = std::max(h, hyp_dist(m->vertices()[t[i]], m->vertices()[t[(i + 1) % 3]]));
    }
    for (double tau : taus) {
        res.values.push_back(F(p0, tau));
        if (h > std::sqrt(tau) / 4.0)
            res.warnings.push_back("mesh too coarse for tau = " + std::to_string(tau) +
                                   " (needs h <= sqrt(tau)/4)");
    }
    const std::size_t k = taus.size();
    const double t1 = taus[k - 2], t2 = taus[k - 1];
    const double f1 = res.values[k - 2], f2 = res.values[k - 1];
    res.limit = f2 + (f2 - f1) * t2 / (t1 - t2);
    return res;
}

}  // namespace hypent
