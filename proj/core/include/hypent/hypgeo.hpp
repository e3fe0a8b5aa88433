#pragma once

// Poincare ball model of hyperbolic space H^d with metric
//   g = 4 |dx|^2 / (1 - |x|^2)^2.
// Dimension is runtime data so one code path serves H^2, H^3, H^4.

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace hypent {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Points within this distance of the unit sphere are rejected.
inline constexpr double kBoundaryMargin = 1e-12;

class BallPoint {
public:
    /// Throws std::invalid_argument if |coords| >= 1 - 1e-12 or d < 2.
    explicit BallPoint(Vec coords);
    static BallPoint origin(int dim);

    const Vec& coords() const { return x_; }
    int dim() const { return static_cast<int>(x_.size()); }
    double norm2() const { return x_.squaredNorm(); }
    /// 1 - |x|^2, computed without cancellation near the boundary.
    double one_minus_norm2() const;

private:
    Vec x_;
};

class IdealPoint {
public:
    /// Throws std::invalid_argument unless ||direction| - 1| <= 1e-12.
    explicit IdealPoint(Vec direction);
    /// Normalizes any non-zero vector onto the sphere.
    static IdealPoint from_direction(const Vec& v);

    const Vec& direction() const { return u_; }
    int dim() const { return static_cast<int>(u_.size()); }

private:
    Vec u_;
};

/// Isometry in normal form x -> translate(a)(R x).
class BallIsometry {
public:
    BallIsometry(Vec translation, Mat rotation);
    static BallIsometry identity(int dim);
    static BallIsometry rotation(Mat rotation);

    const Vec& translation() const { return a_; }
    const Mat& rotation_matrix() const { return r_; }
    int dim() const { return static_cast<int>(a_.size()); }

    BallPoint apply(const BallPoint& p) const;
    IdealPoint extend_to_boundary(const IdealPoint& xi) const;
    /// Raw coordinate action; valid on the closed ball.
    Vec apply_coords(const Vec& x) const;

    BallIsometry inverse() const;
    /// (*this) o other, renormalized into translate o rotation form.
    BallIsometry compose(const BallIsometry& other) const;

private:
    Vec a_;
    Mat r_;
};

/// Hyperbolic distance; throws on dimension mismatch.
double hyp_dist(const BallPoint& p, const BallPoint& q);

/// Mobius translation taking 0 to a. Throws if |a| >= 1.
BallIsometry mobius_translate(const Vec& a);

/// The translation formula applied to raw coordinates (|x| <= 1 allowed).
Vec mobius_translate_coords(const Vec& a, const Vec& x);

/// Differential of x -> mobius_translate_coords(a, x) applied to w.
Vec mobius_translate_differential(const Vec& a, const Vec& x, const Vec& w);

BallPoint apply_isometry(const BallIsometry& t, const BallPoint& p);
IdealPoint extend_to_boundary(const BallIsometry& t, const IdealPoint& xi);

/// Point at hyperbolic arclength s * d(p, q) from p on the geodesic to q.
BallPoint geodesic_point(const BallPoint& p, const BallPoint& q, double s);

/// Hessian of a radial function f(rho) split as
///   f'' drho (x) drho + coth(rho) f' (g - drho (x) drho).
/// Returns (radial, tangential) coefficients. Throws if rho <= 0.
std::pair<double, double> radial_hessian_coeffs(double rho, double f1, double f2);

/// Conformal factor lambda(x) = 2 / (1 - |x|^2).
double conformal_factor(const BallPoint& x);

/// Euclidean unit vector along the hyperbolic gradient of d(., p0) at x.
/// By conformality it also gives the metric direction. Requires x != p0.
Vec radial_direction(const BallPoint& x, const BallPoint& p0);

/// Euclidean unit tangent at p of the geodesic from p towards q.
Vec geodesic_direction(const BallPoint& p, const BallPoint& q);

/// Point at hyperbolic distance r from the origin along unit vector u.
BallPoint exp_origin(const Vec& u, double r);

/// Exponential map at p in Euclidean-coordinate tangent vectors whose
/// Euclidean length is the hyperbolic step length.
BallPoint exp_map(const BallPoint& p, const Vec& v);

/// Weighted barycenter computed in the hyperboloid model.
BallPoint hyperbolic_centroid(const std::vector<BallPoint>& pts,
                              const std::vector<double>& weights = {});

/// Unit-sphere great-circle distance.
double sphere_dist(const Vec& u, const Vec& v);

}  // namespace hypent
