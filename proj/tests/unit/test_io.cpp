#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "hypent/io.hpp"
#include "support.hpp"

using namespace hypent;
using namespace testing;

namespace {

std::string temp_file(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("hypent_io_" + name)).string();
}

bool same_points(const std::vector<BallPoint>& a, const std::vector<BallPoint>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if ((a[i].coords() - b[i].coords()).norm() > 1e-15) return false;
    return true;
}

}  // namespace

TEST_CASE("submanifold round trips") {
    Vec c(3);
    c << 0.1, -0.2, 0.3;
    SUBCASE("curve") {
        const DiscreteCurve k = circle_polyline(BallPoint(Vec(c.head(2))), 0.5, 17);
        const auto back = std::get<DiscreteCurve>(parse_submanifold(submanifold_to_json(k)));
        CHECK(back.closed());
        CHECK(same_points(back.vertices(), k.vertices()));
    }
    SUBCASE("trimesh") {
        const TriMeshSurface m = sphere_mesh(BallPoint(c), 0.4, 1);
        const auto back = std::get<TriMeshSurface>(parse_submanifold(submanifold_to_json(m, 2)));
        CHECK(same_points(back.vertices(), m.vertices()));
        CHECK(back.triangles() == m.triangles());
    }
    SUBCASE("sphere") {
        const auto back = std::get<GeodesicSphere>(parse_submanifold(submanifold_to_json(GeodesicSphere(BallPoint(c), 1.25))));
        CHECK(back.radius == 1.25);
        CHECK((back.center.coords() - c).norm() == 0.0);
    }
    SUBCASE("disk") {
        Mat f = Mat::Zero(3, 2);
        f(0, 0) = f(1, 1) = 1;
        const auto inf = std::get<GeodesicDisk>(parse_submanifold(submanifold_to_json(GeodesicDisk(BallPoint::origin(3), f))));
        CHECK_FALSE(inf.truncated());
        const auto tr = std::get<GeodesicDisk>(parse_submanifold(submanifold_to_json(GeodesicDisk(BallPoint(c), f, 3.0))));
        CHECK(tr.truncation == 3.0);
        CHECK((tr.frame - f).norm() < 1e-15);
    }
}

TEST_CASE("boundary and trajectory round trips") {
    const BoundaryCurve g = latitude_circle(1.0, 12);
    const BoundaryCurve gb = parse_boundary(boundary_to_json(g));
    CHECK(gb.closed());
    REQUIRE(gb.points().size() == 12);
    for (std::size_t i = 0; i < 12; ++i)
        CHECK((gb.points()[i].direction() - g.points()[i].direction()).norm() < 1e-15);

    std::vector<FlowState> traj{FlowState{0.0, circle_polyline(BallPoint::origin(2), 1.0, 8)},
                                FlowState{0.5, GeodesicSphere(BallPoint::origin(3), 0.7)}};
    const auto back = parse_trajectory(trajectory_to_json(traj));
    REQUIRE(back.size() == 2);
    CHECK(back[1].time == 0.5);
    CHECK(std::holds_alternative<DiscreteCurve>(back[0].shape));
    CHECK(std::get<GeodesicSphere>(back[1].shape).radius == 0.7);
}

TEST_CASE("file round trip and file errors") {
    const std::string path = temp_file("curve.json");
    const DiscreteCurve k = circle_polyline(BallPoint::origin(2), 0.5, 9);
    write_text(path, submanifold_to_json(k));
    CHECK(same_points(std::get<DiscreteCurve>(read_submanifold(path)).vertices(), k.vertices()));
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_submanifold(path), FileError);
    CHECK_THROWS_AS(read_boundary(temp_file("missing.json")), FileError);
    CHECK_THROWS_AS(write_text("/nonexistent_dir/x.json", "{}"), FileError);
}

TEST_CASE("schema errors") {
    const char* bad[] = {
        "not json",
        "[]",
        R"({"ambient_dim": 2, "submanifold_dim": 1, "kind": "curve", "vertices": [[0,0],[0.1,0]]})",
        R"({"model": "upper_half", "ambient_dim": 2, "submanifold_dim": 1, "kind": "curve", "vertices": [[0,0],[0.1,0]]})",
        R"({"model": "poincare_ball", "ambient_dim": 2, "submanifold_dim": 1, "kind": "blob"})",
        R"({"model": "poincare_ball", "ambient_dim": 2, "submanifold_dim": 2, "kind": "curve", "vertices": [[0,0],[0.1,0]]})",
        R"({"model": "poincare_ball", "ambient_dim": 3, "submanifold_dim": 1, "kind": "curve", "vertices": [[0,0],[0.1,0]]})",
        R"({"model": "poincare_ball", "ambient_dim": 2, "submanifold_dim": 1, "kind": "curve", "vertices": [[0,"a"],[0.1,0]]})",
        R"({"model": "poincare_ball", "ambient_dim": 3, "submanifold_dim": 2, "kind": "trimesh", "vertices": [[0,0,0],[0.1,0,0],[0,0.1,0]], "elements": [[0,1]]})",
        R"({"model": "poincare_ball", "ambient_dim": 3, "submanifold_dim": 2, "kind": "disk", "base": [0,0,0], "frame": [[1,0,0]]})",
    };
    for (const char* s : bad) {
        INFO(s);
        CHECK_THROWS_AS(parse_submanifold(s), SchemaError);
    }
    // geometrically invalid content is reported by the constructors
    CHECK_THROWS_AS(parse_submanifold(R"({"model": "poincare_ball", "ambient_dim": 2, "submanifold_dim": 1,
        "kind": "curve", "vertices": [[0,0],[1.5,0]]})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_boundary(R"({"points": [[1,0,0]], "closed": false})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_trajectory("[]"), SchemaError);
}
