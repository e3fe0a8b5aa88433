#include "hypent/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hypent/convexity.hpp"
#include "hypent/heatkernel.hpp"
#include "hypent/quadrature.hpp"

namespace hypent {
namespace {

// squared sine of the turning angle below which a vertex triple is collinear
constexpr double kCollinearTol = 1e-12;
constexpr double kMinTau = 1e-6;

struct VertexFrame {
    Vec h;        // coordinate curvature velocity
    Vec tangent;  // Euclidean unit tangent
    bool degenerate = false;
};

struct Circle {
    Vec center;
    double radius = 0.0;
    Vec u, w;  // orthonormal basis of the circle's plane
    bool valid = false;
};

Circle circle_through(const Vec& a, const Vec& b, const Vec& c) {
    Circle k;
    const Vec u = a - b, w = c - b;
    const double uu = u.squaredNorm(), ww = w.squaredNorm(), uw = u.dot(w);
    const double det = uu * ww - uw * uw;
    if (!(det > kCollinearTol * uu * ww)) return k;
    const double alpha = ww * (uu - uw) / (2.0 * det);
    const double beta = uu * (ww - uw) / (2.0 * det);
    const Vec o = alpha * u + beta * w;
    k.center = b + o;
    k.radius = o.norm();
    k.u = u.normalized();
    k.w = (w - w.dot(k.u) * k.u).normalized();
    k.valid = true;
    return k;
}

VertexFrame vertex_frame(const Vec& a, const Vec& b, const Vec& c) {
    VertexFrame f;
    const Vec chord = c - a;
    const Vec u = a - b, w = c - b;
    const double uu = u.squaredNorm(), ww = w.squaredNorm(), uw = u.dot(w);
    const double det = uu * ww - uw * uw;
    Vec he = Vec::Zero(b.size());
    Vec t = chord.normalized();
    if (det > kCollinearTol * uu * ww) {
        const Vec o = (ww * (uu - uw) / (2.0 * det)) * u + (uu * (ww - uw) / (2.0 * det)) * w;
        const double o2 = o.squaredNorm();
        he = o / o2;
        const Vec oh = o / std::sqrt(o2);
        t = (chord - chord.dot(oh) * oh).normalized();
    } else {
        f.degenerate = true;
    }
    const double one_minus = 1.0 - b.squaredNorm();
    const double lambda = 2.0 / one_minus;
    const Vec g = 2.0 * b / one_minus;
    const Vec gperp = g - g.dot(t) * t;
    f.h = (he - gperp) / (lambda * lambda);
    f.tangent = t;
    return f;
}

std::vector<VertexFrame> frames(const std::vector<Vec>& x, bool closed, int* degenerate) {
    const std::size_t n = x.size();
    std::vector<VertexFrame> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!closed && (i == 0 || i + 1 == n)) {
            const Vec t = (i == 0 ? x[1] - x[0] : x[n - 1] - x[n - 2]).normalized();
            out[i] = {Vec::Zero(x[i].size()), t, false};
            continue;
        }
        out[i] = vertex_frame(x[(i + n - 1) % n], x[i], x[(i + 1) % n]);
        if (out[i].degenerate && degenerate) ++*degenerate;
    }
    return out;
}

std::vector<Vec> coords_of(const DiscreteCurve& c) {
    std::vector<Vec> x;
    x.reserve(c.vertices().size());
    for (const auto& p : c.vertices()) x.push_back(p.coords());
    return x;
}

std::vector<Vec> velocity(const std::vector<Vec>& x, bool closed) {
    auto f = frames(x, closed, nullptr);
    std::vector<Vec> v(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) v[i] = std::move(f[i].h);
    return v;
}

std::vector<Vec> axpy(const std::vector<Vec>& x, double s, const std::vector<Vec>& k) {
    std::vector<Vec> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + s * k[i];
    return y;
}

Vec project_to_circle(const Circle& k, const Vec& p) {
    const Vec r = p - k.center;
    const Vec in_plane = r.dot(k.u) * k.u + r.dot(k.w) * k.w;
    const double n = in_plane.norm();
    if (!(n > 0.0)) return p;
    return k.center + (k.radius / n) * in_plane;
}

// F, Q and defect integrals for a geodesic sphere.
struct SphereTerms {
    double F, Q, D;
};

SphereTerms sphere_terms(const GeodesicSphere& g, const BallPoint& p0, double tau) {
    const int n = g.sphere_dim();
    const double r = g.radius;
    const double sr = std::sinh(r), cr = std::cosh(r);
    const double nh = n * cr / sr;
    const double a = hyp_dist(g.center, p0);
    if (a < 1e-13) {
        const KernelValue k = kernel(n, tau, r);
        const double vk = g.volume() * k.value;
        const double gp = sr * sr * k.ylog2;
        const double def = (k.dlog1 + nh) * (k.dlog1 + nh);
        return {vk, vk * gp, vk * def};
    }
    const double log_w = std::log(sphere_volume(n - 1)) + n * std::log(sr);
    const double sa = std::sinh(a), ca = std::cosh(a);
    const double hh = std::sinh(0.5 * (r - a));
    auto f = [&](double th) {
        Jet out(2);
        const double s2 = std::sin(0.5 * th);
        const double z = 2.0 * hh * hh + 2.0 * sr * sa * s2 * s2;
        const double d = 2.0 * std::asinh(std::sqrt(0.5 * std::max(z, 0.0)));
        if (d > kMaxRho || !(d > 0.0)) return out;
        double lw = log_w;
        if (n > 1) {
            const double st = std::sin(th);
            if (!(st > 0.0)) return out;
            lw += (n - 1) * std::log(st);
        }
        const KernelValue k = kernel(n, tau, d);
        const double w = std::exp(k.log_value + lw);
        const double sd = std::sinh(d);
        const double cb = std::clamp((cr * std::cosh(d) - ca) / (sr * sd), -1.0, 1.0);
        const double gp = sd * sd * k.ylog2;
        const double def = (k.dlog1 * cb + nh) * (k.dlog1 * cb + nh);
        out[0] = w;
        out[1] = w * gp * cb * cb;
        out[2] = w * def;
        return out;
    };
    QuadratureOptions opts;
    opts.rel_tol = 1e-10;
    std::vector<double> breaks{0.0, std::numbers::pi};
    for (double kk : {1.0, 4.0, 16.0}) {
        const double x = kk * std::sqrt(tau / (2.0 * sr * sa));
        if (x < 1.0) breaks.insert(breaks.end() - 1, 2.0 * std::asin(x));
    }
    std::sort(breaks.begin(), breaks.end());
    const Jet v = integrate_adaptive(JetIntegrand(f), breaks, opts).value;
    return {v[0], v[1], v[2]};
}

}  // namespace

std::vector<Vec> hyperbolic_curvature(const DiscreteCurve& c, std::vector<std::string>* warnings) {
    int degenerate = 0;
    auto f = frames(coords_of(c), c.closed(), &degenerate);
    if (degenerate > 0 && warnings)
        warnings->push_back(std::to_string(degenerate) + " collinear vertex triples (zero curvature)");
    std::vector<Vec> h(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) h[i] = std::move(f[i].h);
    return h;
}

std::vector<double> curvature_norms(const DiscreteCurve& c) {
    const auto h = hyperbolic_curvature(c);
    std::vector<double> k(h.size());
    for (std::size_t i = 0; i < h.size(); ++i)
        k[i] = conformal_factor(c.vertices()[i]) * h[i].norm();
    return k;
}

FlowState step_curve(const FlowState& s, double dt) {
    const auto& curve = std::get<DiscreteCurve>(s.shape);
    const bool closed = curve.closed();
    const std::vector<Vec> x = coords_of(curve);
    auto inside = [](const std::vector<Vec>& y) {
        for (const auto& p : y)
            if (!(p.norm() < 1.0 - kBoundaryMargin)) return false;
        return true;
    };
    const auto k1 = velocity(x, closed);
    const auto x2 = axpy(x, 0.5 * dt, k1);
    if (!inside(x2)) throw FlowAbort("step_curve: stage left the ball", s);
    const auto k2 = velocity(x2, closed);
    const auto x3 = axpy(x, 0.5 * dt, k2);
    if (!inside(x3)) throw FlowAbort("step_curve: stage left the ball", s);
    const auto k3 = velocity(x3, closed);
    const auto x4 = axpy(x, dt, k3);
    if (!inside(x4)) throw FlowAbort("step_curve: stage left the ball", s);
    const auto k4 = velocity(x4, closed);

    std::vector<BallPoint> next;
    next.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const Vec y = x[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (!(y.norm() < 1.0 - kBoundaryMargin)) throw FlowAbort("step_curve: vertex left the ball", s);
        next.emplace_back(y);
    }
    double disp = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        disp = std::max(disp, hyp_dist(curve.vertices()[i], next[i]));
    if (disp > 0.5 * curve.min_edge()) throw FlowAbort("step_curve: displacement too large", s);
    try {
        return {s.time + dt, DiscreteCurve(std::move(next), closed), dt, disp};
    } catch (const std::invalid_argument& e) {
        throw FlowAbort(std::string("step_curve: ") + e.what(), s);
    }
}

DiscreteCurve resample_uniform(const DiscreteCurve& c) {
    const auto& v = c.vertices();
    const std::size_t n = v.size();
    const std::size_t edges = c.edge_count();
    std::vector<double> cum(edges + 1, 0.0);
    for (std::size_t j = 0; j < edges; ++j) cum[j + 1] = cum[j] + c.edge_length(j);
    const double total = cum.back();
    const std::size_t targets = c.closed() ? n : n - 1;

    auto circle_at = [&](std::size_t i) -> Circle {
        if (!c.closed() && (i == 0 || i + 1 >= n)) return {};
        return circle_through(v[(i + n - 1) % n].coords(), v[i % n].coords(), v[(i + 1) % n].coords());
    };

    std::vector<BallPoint> out;
    out.reserve(n);
    out.push_back(v[0]);
    std::size_t j = 0;
    for (std::size_t k = 1; k < targets; ++k) {
        const double s = total * static_cast<double>(k) / static_cast<double>(targets);
        while (j + 1 < edges && cum[j + 1] < s) ++j;
        const double f = std::clamp((s - cum[j]) / (cum[j + 1] - cum[j]), 0.0, 1.0);
        const BallPoint& a = v[j];
        const BallPoint& b = v[(j + 1) % n];
        Vec p = geodesic_point(a, b, f).coords();
        const Circle ca = circle_at(j), cb = circle_at(j + 1);
        if (ca.valid && cb.valid)
            p = (1.0 - f) * project_to_circle(ca, p) + f * project_to_circle(cb, p);
        else if (ca.valid)
            p = project_to_circle(ca, p);
        else if (cb.valid)
            p = project_to_circle(cb, p);
        out.emplace_back(p);
    }
    if (!c.closed()) out.push_back(v.back());
    return DiscreteCurve(std::move(out), c.closed());
}

std::vector<FlowState> run_curve(const DiscreteCurve& initial, const CurveFlowControls& ctl) {
    if (!(ctl.t_end > 0.0) || !(ctl.cfl > 0.0))
        throw std::invalid_argument("run_curve: t_end and cfl must be > 0");
    std::vector<FlowState> traj;
    FlowState s{0.0, initial, 0.0, 0.0};
    traj.push_back(s);
    double next_record = ctl.record_interval;
    long steps = 0;
    const double eps = 1e-14 * std::max(1.0, ctl.t_end);
    auto length = [](const FlowState& st) { return std::get<DiscreteCurve>(st.shape).length(); };

    while (s.time < ctl.t_end - eps && length(s) >= ctl.min_length) {
        const double h = std::get<DiscreteCurve>(s.shape).min_edge();
        double dt = std::min(ctl.cfl * h * h, ctl.t_end - s.time);
        if (ctl.record_interval > 0.0 && next_record - s.time > eps)
            dt = std::min(dt, next_record - s.time);
        int rejections = 0;
        for (;;) {
            try {
                s = step_curve(s, dt);
                break;
            } catch (const FlowAbort& e) {
                if (++rejections >= ctl.max_rejections)
                    throw FlowAbort(std::string("run_curve: aborted after repeated rejections (") +
                                        e.what() + ")",
                                    s);
                dt *= 0.5;
            }
        }
        ++steps;
        if (ctl.resample_every > 0 && steps % ctl.resample_every == 0)
            s.shape = resample_uniform(std::get<DiscreteCurve>(s.shape));
        if (ctl.record_interval <= 0.0) {
            traj.push_back(s);
        } else if (s.time >= next_record - eps) {
            traj.push_back(s);
            while (next_record <= s.time + eps) next_record += ctl.record_interval;
        }
        if (steps >= ctl.max_steps) throw FlowAbort("run_curve: step limit reached", s);
    }
    if (traj.back().time != s.time) traj.push_back(s);
    return traj;
}

double sphere_extinction_time(int n, double r0) {
    if (n < 1 || !(r0 > 0.0)) throw std::invalid_argument("sphere_flow: need n >= 1 and r0 > 0");
    return std::log(std::cosh(r0)) / n;
}

double sphere_flow(int n, double r0, double t) {
    const double tstar = sphere_extinction_time(n, r0);
    if (t < 0.0) throw std::invalid_argument("sphere_flow: t must be >= 0");
    if (t >= tstar)
        throw std::domain_error("sphere_flow: t beyond extinction time t* = " + std::to_string(tstar));
    const double h = std::sinh(0.5 * r0);
    const double zeta = 2.0 * h * h + std::cosh(r0) * std::expm1(-n * t);  // cosh r - 1
    return 2.0 * std::asinh(std::sqrt(0.5 * std::max(zeta, 0.0)));
}

std::vector<FlowState> run_sphere(const GeodesicSphere& initial, const std::vector<double>& times) {
    std::vector<FlowState> out;
    double prev = 0.0;
    for (double t : times) {
        const double r = sphere_flow(initial.sphere_dim(), initial.radius, t);
        out.push_back({t, GeodesicSphere(initial.center, r), t - prev, 0.0});
        prev = t;
    }
    return out;
}

std::vector<double> MonotonicityRecord::slopes() const {
    std::vector<double> s;
    for (std::size_t i = 0; i + 1 < times.size(); ++i)
        s.push_back((F_values[i + 1] - F_values[i]) / (times[i + 1] - times[i]));
    return s;
}

MonotonicityRecord monotonicity_probe(const std::vector<FlowState>& traj, double t0,
                                      const BallPoint& p0) {
    MonotonicityRecord rec;
    rec.t0 = t0;
    rec.p0 = p0;
    for (const auto& st : traj) {
        if (!(t0 > st.time)) throw std::invalid_argument("monotonicity_probe: t0 must exceed every trajectory time");
        const double tau = std::max(t0 - st.time, kMinTau);
        double F = 0.0, Q = 0.0, D = 0.0;
        if (const auto* g = std::get_if<GeodesicSphere>(&st.shape)) {
            const auto terms = sphere_terms(*g, p0, tau);
            F = terms.F;
            Q = terms.Q;
            D = terms.D;
        } else {
            const auto& c = std::get<DiscreteCurve>(st.shape);
            F = f_functional(c, p0, tau);
            const auto x = coords_of(c);
            const auto fr = frames(x, c.closed(), nullptr);
            const std::size_t n = x.size();
            for (std::size_t i = 0; i < n; ++i) {
                double w = 0.0;
                if (c.closed() || i > 0) w += 0.5 * c.edge_length((i + n - 1) % n);
                if (c.closed() || i + 1 < n) w += 0.5 * c.edge_length(i);
                const BallPoint& p = c.vertices()[i];
                const double rho = hyp_dist(p, p0);
                if (!(rho > 1e-12)) continue;
                const KernelValue k = kernel(1, tau, rho);
                const Vec e = radial_direction(p, p0);
                const Vec eperp = e - e.dot(fr[i].tangent) * fr[i].tangent;
                const double lambda = conformal_factor(p);
                const double sh = std::sinh(rho);
                Q += w * k.value * sh * sh * k.ylog2 * eperp.squaredNorm();
                D += w * k.value * (k.dlog1 * eperp - lambda * fr[i].h).squaredNorm();
            }
        }
        rec.times.push_back(st.time);
        rec.F_values.push_back(F);
        rec.Q_integrals.push_back(Q);
        rec.defect_integrals.push_back(D);
    }
    return rec;
}

IdentityCheck monotonicity_identity_check(const MonotonicityRecord& rec) {
    IdentityCheck out;
    const auto s = rec.slopes();
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double rhs = 0.5 * (rec.Q_integrals[i] + rec.defect_integrals[i] +
                                  rec.Q_integrals[i + 1] + rec.defect_integrals[i + 1]);
        const double r = std::abs(s[i] + rhs);
        out.residuals.push_back(r);
        out.max_residual = std::max(out.max_residual, r);
        out.scale = std::max(out.scale, std::abs(s[i]));
    }
    return out;
}

std::pair<BallPoint, double> fitted_circle(const DiscreteCurve& c) {
    const BallPoint ctr = hyperbolic_centroid(c.vertices());
    double sum = 0.0;
    for (const auto& p : c.vertices()) sum += hyp_dist(ctr, p);
    return {ctr, sum / static_cast<double>(c.vertices().size())};
}

}  // namespace hypent
