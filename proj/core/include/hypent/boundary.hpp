#pragma once

// Ideal-boundary computations: spherical and conformal volume of curves on
// the sphere at infinity, sinh-normalized slice limits, the large-tau limit
// of F, and the entropy / conformal-volume comparison for geodesic disks.

#include <cstdint>
#include <string>
#include <vector>

#include "hypent/functional.hpp"
#include "hypent/manifolds.hpp"

namespace hypent {

class BoundaryCurve {
public:
    /// Throws std::invalid_argument on fewer than 2 points, mixed
    /// dimensions or repeated consecutive points.
    BoundaryCurve(std::vector<IdealPoint> points, bool closed);

    const std::vector<IdealPoint>& points() const { return pts_; }
    bool closed() const { return closed_; }
    int dim() const { return pts_.front().dim(); }

private:
    std::vector<IdealPoint> pts_;
    bool closed_;
};

/// Sum of great-circle distances between consecutive points.
double spherical_volume(const BoundaryCurve& g);

/// Image under the boundary extension of an isometry.
BoundaryCurve transform(const BoundaryCurve& g, const BallIsometry& T);

/// Circle at polar angle theta from the last coordinate axis on S^2.
BoundaryCurve latitude_circle(double theta, int samples);

/// Ideal boundary circle of a 2-dimensional geodesic disk.
BoundaryCurve ideal_boundary(const GeodesicDisk& d, int samples);

/// Spherical volume of g seen from p0 (p0 translated to the origin).
double boundary_volume_from(const BoundaryCurve& g, const BallPoint& p0);

struct ConformalVolumeConfig {
    int starts = 12;
    double cap = 1.0 - 1e-4;  ///< |a| bound
    int max_evals = 400;
    std::uint64_t seed = 0;
    int threads = 0;
};

struct ConformalVolumeResult {
    double value = 0.0;
    Vec argmax_translation;
    SearchStatus status = SearchStatus::Converged;
    double identity_value = 0.0;
    int evaluations = 0;
};

/// sup over Mobius translations a of spherical_volume(t_a(g)).
ConformalVolumeResult conformal_volume(const BoundaryCurve& g, const ConformalVolumeConfig& cfg = {});

struct BoundaryLimitResult {
    std::vector<double> radii;
    std::vector<double> ratios;  ///< slice volume / sinh^{n-1}(r)
    double limit = 0.0;          ///< extrapolated in e^{-2r}
    std::vector<std::string> warnings;
};

/// Disks (analytic) or meshes.
BoundaryLimitResult boundary_limit(const Submanifold& s, const BallPoint& p0,
                                   const std::vector<double>& radii = {4, 5, 6, 7, 8});

struct LimitPropResult {
    std::vector<double> taus;
    std::vector<double> values;
    double limit = 0.0;
    double boundary_side = 0.0;  ///< boundary_limit / omega_{n-1}
    /// int over Sigma within distance 5 of p0 at the largest tau
    double bounded_contribution = 0.0;
};

LimitPropResult limit_prop_check(const GeodesicDisk& d, const BallPoint& p0,
                                 const std::vector<double>& taus = {5, 10, 20, 40});

struct ComparisonConfig {
    EntropyConfig entropy;
    ConformalVolumeConfig conformal;
    int boundary_samples = 256;
    double truncation = 6.0;  ///< disk truncation used for the entropy search
};

struct ComparisonReport {
    double entropy = 0.0;       ///< truncated-disk entropy plus tail estimate
    double entropy_tail = 0.0;  ///< tail estimate alone
    double conformal_ratio = 0.0;  ///< lambda_c / omega_{n-1}
    double difference = 0.0;       ///< entropy - conformal_ratio
    bool inequality_holds = false; ///< entropy + 1% >= conformal_ratio
    EntropyResult entropy_result;
    ConformalVolumeResult conformal_result;
    std::vector<std::string> warnings;
};

ComparisonReport entropy_vs_conformal(const GeodesicDisk& d, const ComparisonConfig& cfg = {});

}  // namespace hypent
