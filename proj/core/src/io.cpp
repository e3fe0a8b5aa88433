#include "hypent/io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace hypent {
namespace {

using json = nlohmann::json;

json vec_json(const Vec& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Vec json_vec(const json& j, const char* what) {
    if (!j.is_array() || j.empty()) throw SchemaError(std::string(what) + ": expected a non-empty array");
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw SchemaError(std::string(what) + ": expected numbers");
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return v;
}

const json& field(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw SchemaError(std::string("missing field '") + key + "'");
    return *it;
}

std::vector<BallPoint> json_points(const json& j, int dim) {
    if (!j.is_array()) throw SchemaError("vertices: expected an array");
    std::vector<BallPoint> pts;
    for (const auto& v : j) {
        Vec x = json_vec(v, "vertex");
        if (x.size() != dim) throw SchemaError("vertex dimension differs from ambient_dim");
        pts.emplace_back(std::move(x));
    }
    return pts;
}

json to_json(const Submanifold& s) {
    json j;
    j["model"] = "poincare_ball";
    j["ambient_dim"] = ambient_dim(s);
    j["submanifold_dim"] = submanifold_dim(s);
    j["kind"] = kind_name(s);
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, DiscreteCurve>) {
                json v = json::array();
                for (const auto& p : m.vertices()) v.push_back(vec_json(p.coords()));
                j["vertices"] = v;
                j["closed"] = m.closed();
            } else if constexpr (std::is_same_v<T, TriMeshSurface>) {
                json v = json::array(), e = json::array();
                for (const auto& p : m.vertices()) v.push_back(vec_json(p.coords()));
                for (const auto& t : m.triangles()) e.push_back({t[0], t[1], t[2]});
                j["vertices"] = v;
                j["elements"] = e;
                j["closed"] = true;
            } else if constexpr (std::is_same_v<T, GeodesicSphere>) {
                j["center"] = vec_json(m.center.coords());
                j["radius"] = m.radius;
                j["closed"] = true;
            } else {
                j["base"] = vec_json(m.base.coords());
                json f = json::array();
                for (Eigen::Index c = 0; c < m.frame.cols(); ++c) f.push_back(vec_json(m.frame.col(c)));
                j["frame"] = f;
                j["truncation"] = m.truncated() ? json(m.truncation) : json(nullptr);
                j["closed"] = false;
            }
        },
        s);
    return j;
}

Submanifold from_json(const json& j) {
    if (!j.is_object()) throw SchemaError("submanifold: expected an object");
    if (field(j, "model") != "poincare_ball") throw SchemaError("model must be 'poincare_ball'");
    const int d = field(j, "ambient_dim").get<int>();
    const int n = field(j, "submanifold_dim").get<int>();
    if (d < 2) throw SchemaError("ambient_dim must be >= 2");
    if (n < 1 || n >= d) throw SchemaError("submanifold_dim must lie in [1, ambient_dim)");
    const std::string kind = field(j, "kind").get<std::string>();
    if (kind == "curve") {
        if (n != 1) throw SchemaError("curve: submanifold_dim must be 1");
        return DiscreteCurve(json_points(field(j, "vertices"), d), j.value("closed", false));
    }
    if (kind == "trimesh") {
        if (n != 2 || d != 3) throw SchemaError("trimesh: requires submanifold_dim 2 in ambient_dim 3");
        std::vector<TriMeshSurface::Triangle> tri;
        for (const auto& e : field(j, "elements")) {
            if (!e.is_array() || e.size() != 3) throw SchemaError("elements: expected index triples");
            tri.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<int>()});
        }
        return TriMeshSurface(json_points(field(j, "vertices"), d), std::move(tri));
    }
    if (kind == "sphere") {
        if (n != d - 1) throw SchemaError("sphere: submanifold_dim must be ambient_dim - 1");
        Vec c = json_vec(field(j, "center"), "center");
        if (c.size() != d) throw SchemaError("center dimension differs from ambient_dim");
        return GeodesicSphere(BallPoint(std::move(c)), field(j, "radius").get<double>());
    }
    if (kind == "disk") {
        Vec b = json_vec(field(j, "base"), "base");
        if (b.size() != d) throw SchemaError("base dimension differs from ambient_dim");
        const json& f = field(j, "frame");
        if (!f.is_array() || static_cast<int>(f.size()) != n)
            throw SchemaError("frame: expected submanifold_dim columns");
        Mat frame(d, n);
        for (int c = 0; c < n; ++c) {
            const Vec col = json_vec(f[static_cast<std::size_t>(c)], "frame column");
            if (col.size() != d) throw SchemaError("frame column dimension differs from ambient_dim");
            frame.col(c) = col;
        }
        double trunc = std::numeric_limits<double>::infinity();
        if (auto it = j.find("truncation"); it != j.end() && !it->is_null()) trunc = it->get<double>();
        return GeodesicDisk(BallPoint(std::move(b)), std::move(frame), trunc);
    }
    throw SchemaError("unknown kind '" + kind + "'");
}

template <class F>
auto parse_with(const std::string& text, F&& f) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("malformed JSON: ") + e.what());
    }
    try {
        return f(j);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("schema: ") + e.what());
    }
}

}  // namespace

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot write '" + path + "'");
    out << text;
    if (!out) throw FileError("write failed for '" + path + "'");
}

Submanifold parse_submanifold(const std::string& text) {
    return parse_with(text, [](const json& j) { return from_json(j); });
}

std::string submanifold_to_json(const Submanifold& s, int indent) { return to_json(s).dump(indent); }

Submanifold read_submanifold(const std::string& path) { return parse_submanifold(read_text(path)); }

BoundaryCurve parse_boundary(const std::string& text) {
    return parse_with(text, [](const json& j) {
        if (!j.is_object()) throw SchemaError("boundary: expected an object");
        std::vector<IdealPoint> pts;
        for (const auto& p : field(j, "points")) pts.emplace_back(json_vec(p, "point"));
        return BoundaryCurve(std::move(pts), j.value("closed", true));
    });
}

std::string boundary_to_json(const BoundaryCurve& g, int indent) {
    json pts = json::array();
    for (const auto& p : g.points()) pts.push_back(vec_json(p.direction()));
    return json{{"points", pts}, {"closed", g.closed()}}.dump(indent);
}

BoundaryCurve read_boundary(const std::string& path) { return parse_boundary(read_text(path)); }

std::string trajectory_to_json(const std::vector<FlowState>& traj, int indent) {
    json a = json::array();
    for (const auto& s : traj) {
        const Submanifold sub = std::visit([](const auto& m) { return Submanifold(m); }, s.shape);
        a.push_back({{"time", s.time}, {"submanifold", to_json(sub)}});
    }
    return a.dump(indent);
}

std::vector<FlowState> parse_trajectory(const std::string& text) {
    return parse_with(text, [](const json& j) {
        if (!j.is_array() || j.empty()) throw SchemaError("trajectory: expected a non-empty array");
        std::vector<FlowState> out;
        for (const auto& f : j) {
            const Submanifold s = from_json(field(f, "submanifold"));
            const double t = field(f, "time").get<double>();
            if (const auto* c = std::get_if<DiscreteCurve>(&s))
                out.push_back(FlowState{t, *c});
            else if (const auto* sp = std::get_if<GeodesicSphere>(&s))
                out.push_back(FlowState{t, *sp});
            else
                throw SchemaError("trajectory frames must be curves or spheres");
        }
        return out;
    });
}

}  // namespace hypent
