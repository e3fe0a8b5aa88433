#pragma once

// Discrete and analytic submanifolds of the Poincare ball with hyperbolic
// volume weights.

#include <array>
#include <limits>
#include <variant>
#include <vector>

#include "hypent/hypgeo.hpp"

namespace hypent {

/// Polyline through hyperbolic geodesic edges.
class DiscreteCurve {
public:
    /// Throws std::invalid_argument on too few vertices, mixed dimensions,
    /// repeated consecutive vertices, or an edge longer than max_edge.
    DiscreteCurve(std::vector<BallPoint> vertices, bool closed,
                  double max_edge = std::numeric_limits<double>::infinity());

    const std::vector<BallPoint>& vertices() const { return v_; }
    bool closed() const { return closed_; }
    int ambient_dim() const { return v_.front().dim(); }
    std::size_t edge_count() const { return closed_ ? v_.size() : v_.size() - 1; }
    double edge_length(std::size_t i) const;
    double length() const;
    double max_edge() const;
    double min_edge() const;

private:
    std::vector<BallPoint> v_;
    bool closed_;
};

/// Triangulated surface in H^3; each triangle is flat in ball coordinates.
class TriMeshSurface {
public:
    using Triangle = std::array<int, 3>;
    TriMeshSurface(std::vector<BallPoint> vertices, std::vector<Triangle> triangles);

    const std::vector<BallPoint>& vertices() const { return v_; }
    const std::vector<Triangle>& triangles() const { return tri_; }
    int ambient_dim() const { return 3; }

private:
    std::vector<BallPoint> v_;
    std::vector<Triangle> tri_;
};

/// Geodesic sphere of dimension sphere_dim in H^{sphere_dim + 1}.
struct GeodesicSphere {
    GeodesicSphere(BallPoint center, double radius);

    BallPoint center;
    double radius;
    int sphere_dim() const { return center.dim() - 1; }
    int ambient_dim() const { return center.dim(); }
    /// omega_n sinh^n(radius).
    double volume() const;
};

/// Totally geodesic H^n through `base` with tangent frame `frame` (d x n,
/// Euclidean-orthonormal columns), truncated to the geodesic ball of radius
/// `truncation` about base (infinity allowed for analytic operations).
struct GeodesicDisk {
    GeodesicDisk(BallPoint base, Mat frame,
                 double truncation = std::numeric_limits<double>::infinity());

    BallPoint base;
    Mat frame;
    double truncation;
    int dim() const { return static_cast<int>(frame.cols()); }
    int ambient_dim() const { return base.dim(); }
    bool truncated() const { return std::isfinite(truncation); }
};

using Submanifold = std::variant<DiscreteCurve, TriMeshSurface, GeodesicSphere, GeodesicDisk>;

int submanifold_dim(const Submanifold& s);
int ambient_dim(const Submanifold& s);
const char* kind_name(const Submanifold& s);
Submanifold apply_isometry(const BallIsometry& T, const Submanifold& s);

struct VolumeSample {
    BallPoint point;
    double weight;
    Mat tangent;  ///< Euclidean-orthonormal basis of the tangent space
};

struct VolumeOptions {
    int refine_levels = 0;     ///< extra 4-way splits of mesh triangles
    int angular_nodes = 256;   ///< spheres and disks
    int radial_nodes = 96;     ///< disks (Gauss-Legendre, split in panels)
};

/// Quadrature decomposition of dVol. Disks must be truncated.
std::vector<VolumeSample> volume_elements(const Submanifold& s, const VolumeOptions& opts = {});
double total_volume(const Submanifold& s, const VolumeOptions& opts = {});

/// |grad^perp rho| at every sample, rho = d(., p0). Samples within 1e-12
/// of p0 are skipped.
std::vector<double> normal_defect(const Submanifold& s, const BallPoint& p0,
                                  const VolumeOptions& opts = {});
/// 1 - |P_T e|^2 for a unit direction e and tangent basis T, clamped to [0, 1].
double normal_fraction_sq(const Vec& e, const Mat& tangent);

/// Geodesic midpoint insertion.
DiscreteCurve refine(const DiscreteCurve& c);
/// 1 -> 4 split with geodesic edge midpoints.
TriMeshSurface refine(const TriMeshSurface& m);

struct SliceResult {
    double volume = 0.0;
    int skipped = 0;  ///< near-tangential triangles left out
};

/// Hyperbolic length of the mesh inside the metric sphere of radius r.
SliceResult sphere_slice(const TriMeshSurface& m, const BallPoint& p0, double r);
/// Analytic slice volume of a disk (n = 1: number of points).
SliceResult sphere_slice(const GeodesicDisk& d, const BallPoint& p0, double r);

/// Nearest-point data of p0 relative to a disk.
struct DiskFoot {
    BallPoint foot;
    double offset;        ///< d(p0, disk)
    double base_to_foot;  ///< d(base, foot)
    double signed_foot;   ///< n = 1: signed position of foot along frame column 0
};
DiskFoot disk_foot(const GeodesicDisk& d, const BallPoint& p0);

/// Volume of the geodesic sphere of radius s about the foot, within the
/// disk truncation, divided by sinh^{n-1}(s). n = 1 counts endpoints.
double disk_slice_measure(const GeodesicDisk& d, const DiskFoot& f, double s);

/// Geodesic circle in the (e_0, e_1) plane of H^d.
DiscreteCurve circle_polyline(const BallPoint& center, double radius, int vertices);
/// Icosahedron-based mesh of a geodesic sphere in H^3.
TriMeshSurface sphere_mesh(const BallPoint& center, double radius, int subdivisions);

}  // namespace hypent
