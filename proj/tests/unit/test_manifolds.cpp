#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hypent/manifolds.hpp"
#include "support.hpp"

using namespace hypent;
using namespace testing;

namespace {

constexpr double kPi = std::numbers::pi;

Mat plane_frame() {
    Mat f = Mat::Zero(3, 2);
    f(0, 0) = 1;
    f(1, 1) = 1;
    return f;
}

BallPoint above(double b) {
    Vec p(3);
    p << 0, 0, std::tanh(b / 2);
    return BallPoint(p);
}

// Radius about the foot where the disk z = 0 meets the sphere of radius r
// about above(b), found by bisection on sampled disk points.
double brute_force_slice_radius(double b, double r, double phi) {
    const BallPoint p0 = above(b);
    Vec u(3);
    u << std::cos(phi), std::sin(phi), 0;
    double lo = 0, hi = r + 1;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (hyp_dist(exp_origin(u, mid), p0) < r ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("representation invariants") {
    const BallPoint o = BallPoint::origin(2);
    Vec x(2);
    x << 0.3, 0;
    CHECK_THROWS_AS(DiscreteCurve({o, BallPoint(x)}, true), std::invalid_argument);
    CHECK_NOTHROW(DiscreteCurve({o, BallPoint(x)}, false));
    CHECK_THROWS_AS(DiscreteCurve({o, o, BallPoint(x)}, false), std::invalid_argument);
    CHECK_THROWS_AS(DiscreteCurve({o, BallPoint(x)}, false, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(GeodesicSphere(BallPoint::origin(3), 0.0), std::invalid_argument);
    Mat bad = plane_frame();
    bad(0, 1) = 0.1;
    CHECK_THROWS_AS(GeodesicDisk(BallPoint::origin(3), bad), std::invalid_argument);

    const TriMeshSurface m = sphere_mesh(BallPoint::origin(3), 1.0, 1);
    auto tris = m.triangles();
    tris[0][1] = 1000;
    CHECK_THROWS_AS(TriMeshSurface(m.vertices(), tris), std::invalid_argument);
    tris = m.triangles();
    tris[0][1] = tris[0][0];
    CHECK_THROWS_AS(TriMeshSurface(m.vertices(), tris), std::invalid_argument);
    tris = m.triangles();
    std::swap(tris[0][1], tris[0][2]);
    CHECK_THROWS_AS(TriMeshSurface(m.vertices(), tris), std::invalid_argument);

    Vec far(2);
    far << 1.0 - 1e-7, 0;
    const DiscreteCurve edge({o, BallPoint(far)}, false);
    CHECK_THROWS_AS(volume_elements(edge), std::invalid_argument);
}

TEST_CASE("volume elements") {
    SUBCASE("hyperbolic circle circumference") {
        const double v = total_volume(circle_polyline(BallPoint::origin(2), 1.0, 512));
        CHECK(rel_err(v, 2 * kPi * std::sinh(1.0)) < 1e-3);
    }
    SUBCASE("geodesic sphere area") {
        CHECK(rel_err(total_volume(GeodesicSphere(BallPoint::origin(3), 1.0)), 4 * kPi * std::pow(std::sinh(1.0), 2)) < 1e-12);
        CHECK(rel_err(GeodesicSphere(BallPoint::origin(3), 1.0).volume(), 4 * kPi * std::pow(std::sinh(1.0), 2)) < 1e-14);
        std::mt19937_64 rng(1);
        const BallPoint c = random_point(rng, 2, 1.0);
        CHECK(rel_err(total_volume(GeodesicSphere(c, 0.7)), 2 * kPi * std::sinh(0.7)) < 1e-12);
    }
    SUBCASE("single unit edge") {
        const BallPoint a = BallPoint::origin(2);
        const BallPoint b = exp_origin(Vec::Unit(2, 0), 1.0);
        const auto s = volume_elements(DiscreteCurve({a, b}, false));
        REQUIRE(s.size() == 1);
        CHECK(std::abs(s[0].weight - 1.0) < 1e-10);
    }
    SUBCASE("truncated disk area") {
        for (double R : {0.5, 2.0, 6.0}) {
            const GeodesicDisk d(BallPoint::origin(3), plane_frame(), R);
            CHECK(rel_err(total_volume(d), 2 * kPi * (std::cosh(R) - 1)) < 1e-10);
        }
    }
}

TEST_CASE("normal defect") {
    std::mt19937_64 rng(2);
    SUBCASE("disk through p0 is a cone") {
        const GeodesicDisk d(BallPoint::origin(3), plane_frame(), 3.0);
        Vec p(3);
        p << 0.2, -0.1, 0;
        for (double v : normal_defect(d, BallPoint(p))) CHECK(v <= 1e-6);
    }
    SUBCASE("sphere about p0 is fully normal") {
        const BallPoint c = random_point(rng, 3, 1.0);
        for (double v : normal_defect(GeodesicSphere(c, 0.8), c)) CHECK(std::abs(v - 1.0) < 1e-8);
    }
    SUBCASE("off-centre circle") {
        Vec q(2);
        q << 0.3, 0.1;
        const auto vals = normal_defect(circle_polyline(BallPoint(q), 0.5, 64), BallPoint::origin(2));
        int interior = 0;
        for (double v : vals) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0 + 1e-9);
            if (v > 1e-3 && v < 1 - 1e-3) ++interior;
        }
        CHECK(interior > 48);
    }
}

TEST_CASE("refinement") {
    SUBCASE("geodesic midpoints keep polyline length") {
        const DiscreteCurve c = circle_polyline(BallPoint::origin(2), 1.3, 17);
        CHECK(std::abs(refine(c).length() - c.length()) < 1e-12);
        CHECK(refine(c).vertices().size() == 34);
    }
    SUBCASE("circle length converges at second order") {
        const double exact = 2 * kPi * std::sinh(1.0);
        std::vector<double> err;
        for (int n : {16, 32, 64, 128}) err.push_back(exact - circle_polyline(BallPoint::origin(2), 1.0, n).length());
        for (std::size_t i = 1; i < err.size(); ++i) {
            const double ratio = err[i - 1] / err[i];
            CHECK(ratio > 3.5);
            CHECK(ratio < 4.5);
            CHECK(std::log2(ratio) >= 1.9);
        }
    }
    SUBCASE("mesh sphere area") {
        const double exact = 4 * kPi * std::pow(std::sinh(1.0), 2);
        std::vector<double> err;
        for (int k = 0; k <= 4; ++k) err.push_back(std::abs(total_volume(sphere_mesh(BallPoint::origin(3), 1.0, k)) - exact));
        for (std::size_t i = 2; i < err.size(); ++i) CHECK(err[i] < err[i - 1]);
        CHECK(err.back() / exact < 5e-3);
        const TriMeshSurface m = sphere_mesh(BallPoint::origin(3), 1.0, 2);
        VolumeOptions o;
        o.refine_levels = 2;
        CHECK(std::abs(total_volume(m, o) - exact) < std::abs(total_volume(m) - exact));
        // geodesic-midpoint refinement converges on the polyhedron itself
        const double a0 = total_volume(m), a1 = total_volume(refine(m)), a2 = total_volume(refine(refine(m)));
        CHECK(std::abs(a2 - a1) < 0.5 * std::abs(a1 - a0));
    }
}

TEST_CASE("sphere slices of disks") {
    const GeodesicDisk d(BallPoint::origin(3), plane_frame());
    CHECK(sphere_slice(d, BallPoint::origin(3), 2.0).volume == doctest::Approx(2 * kPi * std::sinh(2.0)).epsilon(1e-14));
    CHECK(sphere_slice(d, BallPoint::origin(3), 2.0).volume == doctest::Approx(22.788).epsilon(1e-4));
    for (double b : {0.25, 0.5, 1.0})
        for (double r : {1.5, 3.0}) {
            const double analytic = 2 * kPi * std::sinh(std::acosh(std::cosh(r) / std::cosh(b)));
            CHECK(rel_err(sphere_slice(d, above(b), r).volume, analytic) < 1e-12);
            for (double phi : {0.0, 1.0, 4.0})
                CHECK(rel_err(2 * kPi * std::sinh(brute_force_slice_radius(b, r, phi)), analytic) < 1e-9);
        }
    CHECK(sphere_slice(d, above(1.0), 0.5).volume == 0.0);
    CHECK(std::abs(sphere_slice(d, BallPoint::origin(3), 8.0).volume / std::sinh(8.0) - 2 * kPi) < 1e-3 * 2 * kPi);
    const DiskFoot f = disk_foot(d, above(0.7));
    CHECK(f.offset == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(f.foot.coords().norm() < 1e-12);
}

TEST_CASE("sphere slices of meshes") {
    // Sphere S_R(c) met by the sphere of radius r about p0 at distance D from
    // c: cosh r = cosh R cosh D - sinh R sinh D cos(alpha).
    const double R = 1.0, D = 0.6, r = 1.2;
    Vec p(3);
    p << 0, 0, std::tanh(D / 2);
    const double ca = (std::cosh(R) * std::cosh(D) - std::cosh(r)) / (std::sinh(R) * std::sinh(D));
    const double exact = 2 * kPi * std::sinh(R) * std::sqrt(1 - ca * ca);
    const SliceResult s = sphere_slice(sphere_mesh(BallPoint::origin(3), R, 4), BallPoint(p), r);
    CHECK(rel_err(s.volume, exact) < 1e-2);
    CHECK(s.skipped == 0);
}

TEST_CASE("isometry invariance") {
    std::mt19937_64 rng(3);
    const BallIsometry T = random_isometry(rng, 3, 1.0);
    Vec pc(3);
    pc << 0.1, 0.2, -0.1;
    const BallPoint p0(pc);
    std::vector<Submanifold> shapes{sphere_mesh(BallPoint::origin(3), 0.8, 2),
                                    GeodesicSphere(BallPoint::origin(3), 0.8),
                                    GeodesicDisk(BallPoint::origin(3), plane_frame(), 2.0),
                                    circle_polyline(BallPoint::origin(3), 0.9, 40)};
    for (const auto& s : shapes) {
        INFO(kind_name(s));
        const Submanifold t = apply_isometry(T, s);
        CHECK(submanifold_dim(t) == submanifold_dim(s));
        CHECK(ambient_dim(t) == 3);
        if (!std::holds_alternative<TriMeshSurface>(s)) {
            CHECK(rel_err(total_volume(t), total_volume(s)) < 1e-8);
            const auto a = normal_defect(s, p0), b = normal_defect(t, T.apply(p0));
            REQUIRE(a.size() == b.size());
            if (std::holds_alternative<DiscreteCurve>(s))
                for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-8);
        } else {
            // flat ball-coordinate triangles are not isometry-equivariant;
            // the discrepancy vanishes under refinement
            VolumeOptions o;
            o.refine_levels = 3;
            CHECK(rel_err(total_volume(t, o), total_volume(s, o)) < 1e-2);
        }
    }
}
