#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hypent/flow.hpp"
#include "support.hpp"

using namespace hypent;
using namespace testing;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<FlowState> circle_flow(int vertices, double r_stop) {
    CurveFlowControls ctl;
    ctl.t_end = std::log(std::cosh(1.0));
    ctl.min_length = 2 * kPi * std::sinh(r_stop);
    ctl.record_interval = ctl.t_end / 400;
    return run_curve(circle_polyline(BallPoint::origin(2), 1.0, vertices), ctl);
}

// RK4 for dr/dt = -n coth r up to the time where r reaches r_end.
double sphere_ode_time(int n, double r0, double r_end) {
    // integrate dt/dr = -tanh(r)/n from r0 down to r_end
    const int steps = 20000;
    const double h = (r_end - r0) / steps;
    double t = 0, r = r0;
    auto f = [&](double x) { return -std::tanh(x) / n; };
    for (int i = 0; i < steps; ++i) {
        const double k1 = f(r), k2 = f(r + h / 2), k4 = f(r + h);
        t += h * (k1 + 4 * k2 + k4) / 6;
        r += h;
    }
    return t;
}

}  // namespace

TEST_CASE("curvature of hyperbolic circles") {
    for (double r : {0.3, 1.0, 2.0}) {
        const DiscreteCurve c = circle_polyline(BallPoint::origin(2), r, 512);
        const auto H = hyperbolic_curvature(c);
        const auto norms = curvature_norms(c);
        for (std::size_t i = 0; i < H.size(); ++i) {
            const BallPoint& x = c.vertices()[i];
            CHECK(rel_err(conformal_factor(x) * H[i].norm(), 1 / std::tanh(r)) < 1e-3);
            CHECK(norms[i] == doctest::Approx(conformal_factor(x) * H[i].norm()));
            CHECK(H[i].dot(x.coords()) < 0);
        }
    }
}

TEST_CASE("geodesics have zero curvature") {
    std::vector<BallPoint> v;
    for (double s = -2; s <= 2.0001; s += 0.25) v.push_back(exp_origin(Vec::Unit(2, 0), s));
    const DiscreteCurve line(v, false);
    for (const auto& h : hyperbolic_curvature(line)) CHECK(h.norm() < 1e-10);
    // an off-centre geodesic is a Euclidean arc orthogonal to the boundary
    std::mt19937_64 rng(1);
    const BallIsometry T = random_isometry(rng, 2, 1.0);
    std::vector<BallPoint> w;
    for (const auto& p : v) w.push_back(T.apply(p));
    for (double k : curvature_norms(DiscreteCurve(w, false))) CHECK(k < 1e-8);
}

TEST_CASE("curvature is isometry invariant") {
    std::mt19937_64 rng(2);
    Vec q(2);
    q << 0.2, -0.3;
    const DiscreteCurve c = circle_polyline(BallPoint(q), 0.6, 64);
    const auto k = curvature_norms(c);
    const BallIsometry T = random_isometry(rng, 2, 1.5);
    const auto kt = curvature_norms(std::get<DiscreteCurve>(apply_isometry(T, c)));
    for (std::size_t i = 0; i < k.size(); ++i) CHECK(std::abs(k[i] - kt[i]) < 1e-6);
}

TEST_CASE("shrinking circle follows the cosh law") {
    const auto traj = circle_flow(512, 0.3);
    REQUIRE(traj.size() > 10);
    for (const auto& s : traj) {
        const double pred = std::cosh(1.0) * std::exp(-s.time);
        const double r = fitted_circle(std::get<DiscreteCurve>(s.shape)).second;
        CHECK(std::abs(std::cosh(r) - pred) / pred < 5e-3);
    }
    const auto last = fitted_circle(std::get<DiscreteCurve>(traj.back().shape)).second;
    CHECK(last < 0.31);
    const double extinction = traj.back().time + std::log(std::cosh(last));
    CHECK(std::abs(extinction - 0.4338) / 0.4338 < 0.01);
}

TEST_CASE("smoothed polygon shortens") {
    // square with rounded corners
    std::vector<BallPoint> v;
    const int per_side = 12, per_corner = 6;
    const double a = 0.3, rr = 0.1;
    const double cx[] = {a, -a, -a, a}, cy[] = {a, a, -a, -a};
    for (int k = 0; k < 4; ++k) {
        const double th0 = kPi / 2 * k;
        for (int j = 0; j < per_corner; ++j) {
            const double th = th0 + kPi / 2 * j / per_corner;
            Vec x(2);
            x << cx[k] + rr * std::cos(th), cy[k] + rr * std::sin(th);
            v.emplace_back(x);
        }
        const double th1 = th0 + kPi / 2;
        Vec p(2), q(2);
        p << cx[k] + rr * std::cos(th1), cy[k] + rr * std::sin(th1);
        const int next = (k + 1) % 4;
        q << cx[next] + rr * std::cos(th1), cy[next] + rr * std::sin(th1);
        for (int j = 0; j < per_side; ++j) v.emplace_back(Vec(p + (q - p) * j / per_side));
    }
    CurveFlowControls ctl;
    ctl.t_end = 0.05;
    ctl.record_interval = 0.005;
    const auto traj = run_curve(DiscreteCurve(v, true), ctl);
    REQUIRE(traj.size() >= 5);
    for (std::size_t i = 1; i < traj.size(); ++i)
        CHECK(std::get<DiscreteCurve>(traj[i].shape).length() < std::get<DiscreteCurve>(traj[i - 1].shape).length());
}

TEST_CASE("flow is isometry equivariant") {
    std::mt19937_64 rng(3);
    Vec q(2);
    q << 0.1, 0.2;
    const DiscreteCurve c = circle_polyline(BallPoint(q), 0.7, 48);
    const BallIsometry T = random_isometry(rng, 2, 1.0);
    FlowState a{0.0, c}, b{0.0, std::get<DiscreteCurve>(apply_isometry(T, c))};
    for (int i = 0; i < 50; ++i) {
        a = step_curve(a, 2e-4);
        b = step_curve(b, 2e-4);
    }
    const auto& va = std::get<DiscreteCurve>(a.shape).vertices();
    const auto& vb = std::get<DiscreteCurve>(b.shape).vertices();
    for (std::size_t i = 0; i < va.size(); ++i) CHECK(hyp_dist(T.apply(va[i]), vb[i]) < 1e-5);
}

TEST_CASE("resampling keeps the circle and equalizes edges") {
    std::vector<BallPoint> v;
    for (int k = 0; k < 64; ++k) {
        const double th = 2 * kPi * (k + 0.4 * std::sin(3.0 * k)) / 64;
        v.push_back(exp_origin((Vec(2) << std::cos(th), std::sin(th)).finished(), 0.8));
    }
    const DiscreteCurve u = resample_uniform(DiscreteCurve(v, true));
    CHECK(u.vertices().size() == 64);
    CHECK(u.max_edge() / u.min_edge() < 1.01);
    for (const auto& p : u.vertices()) CHECK(std::abs(hyp_dist(p, BallPoint::origin(2)) - 0.8) < 1e-3);
}

TEST_CASE("exact sphere flow") {
    CHECK(sphere_flow(2, 1.0, 0.0) == doctest::Approx(1.0));
    CHECK(sphere_extinction_time(2, 1.0) == doctest::Approx(0.5 * std::log(std::cosh(1.0))).epsilon(1e-14));
    CHECK(sphere_extinction_time(2, 1.0) == doctest::Approx(0.21690).epsilon(1e-4));
    for (double r_end : {0.8, 0.3, 0.05}) {
        const double t = sphere_ode_time(2, 1.0, r_end);
        CHECK(sphere_flow(2, 1.0, t) == doctest::Approx(r_end).epsilon(1e-8));
    }
    for (double r : {0.2, 1.0, 3.0}) {
        const double h = 1e-5;
        auto la = [](double x) { return std::log(4 * kPi * std::sinh(x) * std::sinh(x)); };
        CHECK(std::abs((la(r + h) - la(r - h)) / (2 * h) - 2 / std::tanh(r)) < 1e-8);
    }
    CHECK_THROWS_AS(sphere_flow(2, 1.0, 0.3), std::domain_error);
    const auto traj = run_sphere(GeodesicSphere(BallPoint::origin(3), 1.0), {0.0, 0.1, 0.2});
    REQUIRE(traj.size() == 3);
    for (const auto& s : traj) CHECK(std::get<GeodesicSphere>(s.shape).radius > 0.0);
}

TEST_CASE("monotonicity along the shrinking circle") {
    const auto traj = circle_flow(128, 0.1);
    const double T = std::log(std::cosh(1.0));
    SUBCASE("centred probe") {
        const auto rec = monotonicity_probe(traj, T, BallPoint::origin(2));
        for (double s : rec.slopes()) CHECK(s <= 1e-4);
        for (double q : rec.Q_integrals) CHECK(q >= -1e-6);
        CHECK(monotonicity_identity_check(rec).relative() < 0.05);
    }
    SUBCASE("offset probe") {
        const BallPoint p0 = exp_origin(Vec::Unit(2, 0), 0.7);
        const auto rec = monotonicity_probe(traj, T + 0.2, p0);
        for (double s : rec.slopes()) CHECK(s <= -1e-6);
        for (double q : rec.Q_integrals) CHECK(q >= -1e-6);
        CHECK(monotonicity_identity_check(rec).relative() < 0.05);
    }
    SUBCASE("probe time must follow the trajectory") {
        CHECK_THROWS_AS(monotonicity_probe(traj, 0.1, BallPoint::origin(2)), std::invalid_argument);
    }
}

TEST_CASE("a static geodesic through p0") {
    std::vector<BallPoint> v;
    for (double s = -10; s <= 10.0001; s += 0.01) v.push_back(exp_origin(Vec::Unit(2, 1), s));
    const DiscreteCurve line(v, false);
    std::vector<FlowState> traj;
    for (double t = 0; t <= 0.9001; t += 0.1) traj.push_back(FlowState{t, line});
    const auto rec = monotonicity_probe(traj, 1.0, BallPoint::origin(2));
    for (std::size_t i = 0; i < rec.times.size(); ++i) {
        CHECK(rec.F_values[i] == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::abs(rec.Q_integrals[i]) < 1e-10);
        CHECK(std::abs(rec.defect_integrals[i]) < 1e-10);
    }
    CHECK(monotonicity_identity_check(rec).max_residual < 1e-10);
}

TEST_CASE("sphere identity with centred base point") {
    const double te = sphere_extinction_time(2, 1.0);
    std::vector<double> times;
    for (int i = 0; i <= 100; ++i) times.push_back(0.9 * te * i / 100);
    const auto rec = monotonicity_probe(run_sphere(GeodesicSphere(BallPoint::origin(3), 1.0), times), te,
                                        BallPoint::origin(3));
    for (double s : rec.slopes()) CHECK(s <= 1e-4);
    CHECK(monotonicity_identity_check(rec).relative() < 1e-3);
}
