#include "hypent/manifolds.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

#include "hypent/heatkernel.hpp"
#include "hypent/quadrature.hpp"

namespace hypent {
namespace {

constexpr double kPi = std::numbers::pi;

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

Mat orthonormalize(const Mat& m) {
    Eigen::HouseholderQR<Mat> qr(m);
    Mat q = qr.householderQ() * Mat::Identity(m.rows(), m.cols());
    return q;
}

// Orthonormal basis of the complement of unit vector u.
Mat complement(const Vec& u) {
    const auto d = u.size();
    const Mat um = u;
    Eigen::HouseholderQR<Mat> qr(um);
    Mat q = qr.householderQ() * Mat::Identity(d, d);
    return q.rightCols(d - 1);
}

BallPoint lerp(const BallPoint& a, const BallPoint& b, double s) {
    return BallPoint((1.0 - s) * a.coords() + s * b.coords());
}

// Tangent basis at exp_map(base, x') for the linear subspace span(q) through
// the origin, transported by the translation to base.
Mat disk_tangent(const GeodesicDisk& d, const Mat& q, const Vec& xprime) {
    Mat t(q.rows(), q.cols());
    for (Eigen::Index j = 0; j < q.cols(); ++j)
        t.col(j) = mobius_translate_differential(d.base.coords(), xprime, q.col(j));
    return orthonormalize(t);
}

}  // namespace

DiscreteCurve::DiscreteCurve(std::vector<BallPoint> vertices, bool closed, double max_edge)
    : v_(std::move(vertices)), closed_(closed) {
    const std::size_t need = closed_ ? 3 : 2;
    if (v_.size() < need)
        throw std::invalid_argument("DiscreteCurve: need >= 3 vertices if closed, >= 2 if open");
    for (const auto& p : v_)
        if (p.dim() != v_.front().dim())
            throw std::invalid_argument("DiscreteCurve: mixed vertex dimensions");
    for (std::size_t i = 0; i < edge_count(); ++i) {
        const double len = edge_length(i);
        if (!(len > 0.0))
            throw std::invalid_argument("DiscreteCurve: repeated consecutive vertex at " +
                                        std::to_string(i));
        if (len > max_edge)
            throw std::invalid_argument("DiscreteCurve: edge " + std::to_string(i) +
                                        " exceeds the mesh parameter");
    }
}

double DiscreteCurve::edge_length(std::size_t i) const {
    return hyp_dist(v_[i], v_[(i + 1) % v_.size()]);
}

double DiscreteCurve::length() const {
    double s = 0.0;
    for (std::size_t i = 0; i < edge_count(); ++i) s += edge_length(i);
    return s;
}

double DiscreteCurve::max_edge() const {
    double m = 0.0;
    for (std::size_t i = 0; i < edge_count(); ++i) m = std::max(m, edge_length(i));
    return m;
}

double DiscreteCurve::min_edge() const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < edge_count(); ++i) m = std::min(m, edge_length(i));
    return m;
}

TriMeshSurface::TriMeshSurface(std::vector<BallPoint> vertices, std::vector<Triangle> triangles)
    : v_(std::move(vertices)), tri_(std::move(triangles)) {
    if (v_.empty() || tri_.empty()) throw std::invalid_argument("TriMeshSurface: empty mesh");
    for (const auto& p : v_)
        if (p.dim() != 3) throw std::invalid_argument("TriMeshSurface: vertices must lie in H^3");
    std::set<std::pair<int, int>> directed;
    const int nv = static_cast<int>(v_.size());
    for (std::size_t k = 0; k < tri_.size(); ++k) {
        const auto& t = tri_[k];
        for (int i = 0; i < 3; ++i) {
            if (t[i] < 0 || t[i] >= nv)
                throw std::invalid_argument("TriMeshSurface: index out of range in triangle " +
                                            std::to_string(k));
            const int a = t[i], b = t[(i + 1) % 3];
            if (a == b)
                throw std::invalid_argument("TriMeshSurface: repeated vertex in triangle " +
                                            std::to_string(k));
            if (hyp_dist(v_[a], v_[b]) <= 1e-10)
                throw std::invalid_argument("TriMeshSurface: degenerate triangle " +
                                            std::to_string(k));
            if (!directed.insert({a, b}).second)
                throw std::invalid_argument("TriMeshSurface: inconsistent orientation at edge (" +
                                            std::to_string(a) + "," + std::to_string(b) + ")");
        }
    }
}

GeodesicSphere::GeodesicSphere(BallPoint c, double r) : center(std::move(c)), radius(r) {
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw std::invalid_argument("GeodesicSphere: radius must be finite and > 0");
}

double GeodesicSphere::volume() const {
    return sphere_volume(sphere_dim()) * std::pow(std::sinh(radius), sphere_dim());
}

GeodesicDisk::GeodesicDisk(BallPoint b, Mat f, double r)
    : base(std::move(b)), frame(std::move(f)), truncation(r) {
    if (frame.rows() != base.dim() || frame.cols() < 1 || frame.cols() > base.dim())
        throw std::invalid_argument("GeodesicDisk: frame must be d x n with 1 <= n <= d");
    const Mat g = frame.transpose() * frame - Mat::Identity(frame.cols(), frame.cols());
    if (g.cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("GeodesicDisk: frame is not orthonormal");
    if (!(truncation > 0.0)) throw std::invalid_argument("GeodesicDisk: truncation must be > 0");
}

int submanifold_dim(const Submanifold& s) {
    return std::visit(overloaded{[](const DiscreteCurve&) { return 1; },
                                 [](const TriMeshSurface&) { return 2; },
                                 [](const GeodesicSphere& g) { return g.sphere_dim(); },
                                 [](const GeodesicDisk& d) { return d.dim(); }},
                      s);
}

int ambient_dim(const Submanifold& s) {
    return std::visit([](const auto& x) { return x.ambient_dim(); }, s);
}

const char* kind_name(const Submanifold& s) {
    return std::visit(overloaded{[](const DiscreteCurve&) { return "curve"; },
                                 [](const TriMeshSurface&) { return "trimesh"; },
                                 [](const GeodesicSphere&) { return "sphere"; },
                                 [](const GeodesicDisk&) { return "disk"; }},
                      s);
}

Submanifold apply_isometry(const BallIsometry& T, const Submanifold& s) {
    auto map_points = [&](const std::vector<BallPoint>& v) {
        std::vector<BallPoint> out;
        out.reserve(v.size());
        for (const auto& p : v) out.push_back(T.apply(p));
        return out;
    };
    return std::visit(
        overloaded{
            [&](const DiscreteCurve& c) -> Submanifold {
                return DiscreteCurve(map_points(c.vertices()), c.closed());
            },
            [&](const TriMeshSurface& m) -> Submanifold {
                return TriMeshSurface(map_points(m.vertices()), m.triangles());
            },
            [&](const GeodesicSphere& g) -> Submanifold {
                return GeodesicSphere(T.apply(g.center), g.radius);
            },
            [&](const GeodesicDisk& d) -> Submanifold {
                const Vec rx = T.rotation_matrix() * d.base.coords();
                Mat f(d.frame.rows(), d.frame.cols());
                for (Eigen::Index j = 0; j < f.cols(); ++j)
                    f.col(j) = mobius_translate_differential(
                        T.translation(), rx, T.rotation_matrix() * d.frame.col(j));
                return GeodesicDisk(T.apply(d.base), orthonormalize(f), d.truncation);
            }},
        s);
}

double normal_fraction_sq(const Vec& e, const Mat& tangent) {
    const double along = (tangent.transpose() * e).squaredNorm();
    return std::clamp(1.0 - along, 0.0, 1.0);
}

static void reject_near_boundary(const std::vector<BallPoint>& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i].coords().norm() > 1.0 - 1e-6)
            throw std::invalid_argument("volume_elements: vertex " + std::to_string(i) +
                                        " within 1e-6 of the ideal boundary");
}

std::vector<VolumeSample> volume_elements(const Submanifold& s, const VolumeOptions& opts) {
    std::vector<VolumeSample> out;
    std::visit(
        overloaded{
            [&](const DiscreteCurve& c) {
                const auto& v = c.vertices();
                reject_near_boundary(v);
                for (std::size_t i = 0; i < c.edge_count(); ++i) {
                    const BallPoint& a = v[i];
                    const BallPoint& b = v[(i + 1) % v.size()];
                    const BallPoint mid = geodesic_point(a, b, 0.5);
                    out.push_back({mid, hyp_dist(a, b), Mat(geodesic_direction(mid, b))});
                }
            },
            [&](const TriMeshSurface& m) {
                reject_near_boundary(m.vertices());
                const int splits = 1 << std::max(0, opts.refine_levels);
                for (const auto& t : m.triangles()) {
                    const Vec& a = m.vertices()[t[0]].coords();
                    const Vec& b = m.vertices()[t[1]].coords();
                    const Vec& c = m.vertices()[t[2]].coords();
                    const Eigen::Vector3d e1 = (b - a) / splits, e2 = (c - a) / splits;
                    Mat tangent(3, 2);
                    tangent << e1, e2;
                    tangent = orthonormalize(tangent);
                    const double area = 0.5 * e1.cross(e2).norm();
                    // Barycentric sub-grid: upward and downward small triangles.
                    for (int i = 0; i < splits; ++i) {
                        for (int j = 0; i + j < splits; ++j) {
                            const Vec base = a + i * e1 + j * e2;
                            const Vec up = base + (e1 + e2) / 3.0;
                            const BallPoint pu(up);
                            const double lu = conformal_factor(pu);
                            out.push_back({pu, area * lu * lu, tangent});
                            if (i + j + 1 < splits) {
                                const BallPoint pd(base + 2.0 * (e1 + e2) / 3.0);
                                const double ld = conformal_factor(pd);
                                out.push_back({pd, area * ld * ld, tangent});
                            }
                        }
                    }
                }
            },
            [&](const GeodesicSphere& g) {
                const int n = g.sphere_dim();
                const double sh = std::sinh(g.radius);
                auto push = [&](const Vec& u, double w) {
                    const BallPoint x = exp_map(g.center, g.radius * u);
                    out.push_back({x, w, complement(radial_direction(x, g.center))});
                };
                if (n == 1) {
                    const int m = opts.angular_nodes;
                    for (int k = 0; k < m; ++k) {
                        const double th = 2.0 * kPi * (k + 0.5) / m;
                        Vec u(2);
                        u << std::cos(th), std::sin(th);
                        push(u, 2.0 * kPi * sh / m);
                    }
                } else if (n == 2) {
                    const int m = std::max(2, opts.angular_nodes / 2);
                    std::vector<double> z, w;
                    gauss_legendre(m, z, w);
                    for (int i = 0; i < m; ++i) {
                        const double st = std::sqrt(1.0 - z[i] * z[i]);
                        for (int k = 0; k < 2 * m; ++k) {
                            const double ph = 2.0 * kPi * (k + 0.5) / (2 * m);
                            Vec u(3);
                            u << st * std::cos(ph), st * std::sin(ph), z[i];
                            push(u, sh * sh * w[i] * kPi / m);
                        }
                    }
                } else {
                    throw std::invalid_argument("volume_elements: spheres of dimension > 2");
                }
            },
            [&](const GeodesicDisk& d) {
                if (!d.truncated())
                    throw std::invalid_argument("volume_elements: disk must be truncated");
                const Mat q = orthonormalize(d.frame);
                const double R = d.truncation;
                const int panels = std::max(1, static_cast<int>(std::ceil(R)));
                const int per = std::max(2, opts.radial_nodes / panels);
                std::vector<double> z, w;
                gauss_legendre(per, z, w);
                auto push = [&](const Vec& dir, double s, double weight) {
                    const Vec xp = std::tanh(0.5 * s) * dir;
                    const BallPoint x(mobius_translate_coords(d.base.coords(), xp));
                    out.push_back({x, weight, disk_tangent(d, q, xp)});
                };
                if (d.dim() == 1) {
                    for (int p = -panels; p < panels; ++p) {
                        const double lo = R * p / panels, hi = R * (p + 1) / panels;
                        for (int i = 0; i < per; ++i) {
                            const double s = 0.5 * (lo + hi) + 0.5 * (hi - lo) * z[i];
                            const Vec dir = s >= 0 ? Vec(q.col(0)) : Vec(-q.col(0));
                            push(dir, std::abs(s), 0.5 * (hi - lo) * w[i]);
                        }
                    }
                } else if (d.dim() == 2) {
                    const int m = opts.angular_nodes;
                    for (int p = 0; p < panels; ++p) {
                        const double lo = R * p / panels, hi = R * (p + 1) / panels;
                        for (int i = 0; i < per; ++i) {
                            const double s = 0.5 * (lo + hi) + 0.5 * (hi - lo) * z[i];
                            const double rw = 0.5 * (hi - lo) * w[i] * std::sinh(s);
                            for (int k = 0; k < m; ++k) {
                                const double th = 2.0 * kPi * (k + 0.5) / m;
                                const Vec dir = std::cos(th) * q.col(0) + std::sin(th) * q.col(1);
                                push(dir, s, rw * 2.0 * kPi / m);
                            }
                        }
                    }
                } else {
                    throw std::invalid_argument("volume_elements: disks of dimension > 2");
                }
            }},
        s);
    return out;
}

double total_volume(const Submanifold& s, const VolumeOptions& opts) {
    if (const auto* g = std::get_if<GeodesicSphere>(&s)) return g->volume();
    double v = 0.0;
    for (const auto& e : volume_elements(s, opts)) v += e.weight;
    return v;
}

std::vector<double> normal_defect(const Submanifold& s, const BallPoint& p0,
                                  const VolumeOptions& opts) {
    std::vector<double> out;
    for (const auto& e : volume_elements(s, opts)) {
        if (hyp_dist(e.point, p0) < 1e-12) continue;
        const Vec dir = radial_direction(e.point, p0);
        out.push_back(std::sqrt(normal_fraction_sq(dir, e.tangent)));
    }
    return out;
}

DiscreteCurve refine(const DiscreteCurve& c) {
    const auto& v = c.vertices();
    std::vector<BallPoint> out;
    out.reserve(2 * v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(v[i]);
        if (i + 1 < v.size() || c.closed())
            out.push_back(geodesic_point(v[i], v[(i + 1) % v.size()], 0.5));
    }
    return DiscreteCurve(std::move(out), c.closed());
}

TriMeshSurface refine(const TriMeshSurface& m) {
    std::vector<BallPoint> v = m.vertices();
    std::map<std::pair<int, int>, int> mids;
    auto mid = [&](int a, int b) {
        const auto key = std::minmax(a, b);
        auto it = mids.find(key);
        if (it != mids.end()) return it->second;
        v.push_back(geodesic_point(v[a], v[b], 0.5));
        const int idx = static_cast<int>(v.size()) - 1;
        mids.emplace(key, idx);
        return idx;
    };
    std::vector<TriMeshSurface::Triangle> tris;
    tris.reserve(4 * m.triangles().size());
    for (const auto& t : m.triangles()) {
        const int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
        tris.push_back({t[0], ab, ca});
        tris.push_back({ab, t[1], bc});
        tris.push_back({ca, bc, t[2]});
        tris.push_back({ab, bc, ca});
    }
    return TriMeshSurface(std::move(v), std::move(tris));
}

SliceResult sphere_slice(const TriMeshSurface& m, const BallPoint& p0, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("sphere_slice: r must be > 0");
    constexpr double kMargin = 1e-8;
    const auto& v = m.vertices();
    std::vector<double> dist(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) dist[i] = hyp_dist(v[i], p0) - r;

    SliceResult res;
    for (const auto& t : m.triangles()) {
        std::vector<BallPoint> cross;
        bool tangential = false;
        for (int i = 0; i < 3; ++i) {
            const int a = t[i], b = t[(i + 1) % 3];
            const double fa = dist[a], fb = dist[b];
            if (std::min(std::abs(fa), std::abs(fb)) < kMargin &&
                (fa * fb <= 0.0 || std::max(fa, fb) < kMargin)) {
                tangential = true;
                break;
            }
            if (fa * fb >= 0.0) continue;
            double lo = 0.0, hi = 1.0;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = hyp_dist(lerp(v[a], v[b], mid), p0) - r;
                if ((fm < 0.0) == (fa < 0.0))
                    lo = mid;
                else
                    hi = mid;
            }
            cross.push_back(lerp(v[a], v[b], 0.5 * (lo + hi)));
        }
        if (tangential) {
            ++res.skipped;
            continue;
        }
        if (cross.size() == 2) res.volume += hyp_dist(cross[0], cross[1]);
    }
    return res;
}

DiskFoot disk_foot(const GeodesicDisk& d, const BallPoint& p0) {
    const Mat q = orthonormalize(d.frame);
    const Vec x = mobius_translate_coords(-d.base.coords(), p0.coords());
    const Vec proj = q * (q.transpose() * x);
    const Vec refl = 2.0 * proj - x;
    Vec f = proj;
    if ((refl - x).norm() > 0.0) {
        f = geodesic_point(BallPoint(x), BallPoint(refl), 0.5).coords();
        f = q * (q.transpose() * f);
    }
    const double offset = 0.5 * hyp_dist(BallPoint(x), BallPoint(refl));
    const double fn = f.norm();
    const double a = 2.0 * std::atanh(fn);
    const double signed_pos = 2.0 * std::atanh(q.col(0).dot(f));
    return {BallPoint(mobius_translate_coords(d.base.coords(), f)), offset, a, signed_pos};
}

double disk_slice_measure(const GeodesicDisk& d, const DiskFoot& f, double s) {
    const double R = d.truncation;
    if (d.dim() == 1) {
        if (!d.truncated()) return 2.0;
        double count = 0.0;
        for (double pos : {f.signed_foot - s, f.signed_foot + s})
            if (std::abs(pos) <= R) count += 1.0;
        return count;
    }
    const double full = sphere_volume(d.dim() - 1);
    if (!d.truncated()) return full;
    const double a = f.base_to_foot;
    if (s + a <= R) return full;
    if (std::abs(s - a) >= R) return 0.0;
    if (d.dim() != 2)
        throw std::invalid_argument("disk_slice_measure: truncated disks of dimension > 2");
    const double c = (std::cosh(s) * std::cosh(a) - std::cosh(R)) / (std::sinh(s) * std::sinh(a));
    return 2.0 * std::acos(std::clamp(c, -1.0, 1.0));
}

SliceResult sphere_slice(const GeodesicDisk& d, const BallPoint& p0, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("sphere_slice: r must be > 0");
    const DiskFoot f = disk_foot(d, p0);
    SliceResult res;
    if (r <= f.offset) return res;
    const double s = std::acosh(std::cosh(r) / std::cosh(f.offset));
    res.volume = disk_slice_measure(d, f, s) * std::pow(std::sinh(s), d.dim() - 1);
    return res;
}

DiscreteCurve circle_polyline(const BallPoint& center, double radius, int vertices) {
    if (vertices < 3) throw std::invalid_argument("circle_polyline: need >= 3 vertices");
    std::vector<BallPoint> v;
    v.reserve(static_cast<std::size_t>(vertices));
    for (int k = 0; k < vertices; ++k) {
        const double th = 2.0 * kPi * k / vertices;
        Vec u = Vec::Zero(center.dim());
        u[0] = std::cos(th);
        u[1] = std::sin(th);
        v.push_back(exp_map(center, radius * u));
    }
    return DiscreteCurve(std::move(v), true);
}

TriMeshSurface sphere_mesh(const BallPoint& center, double radius, int subdivisions) {
    if (center.dim() != 3) throw std::invalid_argument("sphere_mesh: center must lie in H^3");
    const double p = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Eigen::Vector3d> u = {{-1, p, 0}, {1, p, 0},  {-1, -p, 0}, {1, -p, 0},
                                      {0, -1, p}, {0, 1, p},  {0, -1, -p}, {0, 1, -p},
                                      {p, 0, -1}, {p, 0, 1},  {-p, 0, -1}, {-p, 0, 1}};
    for (auto& x : u) x.normalize();
    std::vector<TriMeshSurface::Triangle> tris = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
        {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
        {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
    for (int level = 0; level < subdivisions; ++level) {
        std::map<std::pair<int, int>, int> mids;
        auto mid = [&](int a, int b) {
            const auto key = std::minmax(a, b);
            auto it = mids.find(key);
            if (it != mids.end()) return it->second;
            u.push_back((u[a] + u[b]).normalized());
            const int idx = static_cast<int>(u.size()) - 1;
            mids.emplace(key, idx);
            return idx;
        };
        std::vector<TriMeshSurface::Triangle> next;
        for (const auto& t : tris) {
            const int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
            next.push_back({t[0], ab, ca});
            next.push_back({ab, t[1], bc});
            next.push_back({ca, bc, t[2]});
            next.push_back({ab, bc, ca});
        }
        tris = std::move(next);
    }
    std::vector<BallPoint> v;
    v.reserve(u.size());
    for (const auto& x : u) v.push_back(exp_map(center, radius * Vec(x)));
    return TriMeshSurface(std::move(v), std::move(tris));
}

}  // namespace hypent
