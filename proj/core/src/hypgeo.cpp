#include "hypent/hypgeo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hypent {
namespace {

void require_same_dim(int a, int b, const char* what) {
    if (a != b)
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                    std::to_string(a) + " vs " + std::to_string(b) + ")");
}

}  // namespace

BallPoint::BallPoint(Vec coords) : x_(std::move(coords)) {
    if (x_.size() < 2) throw std::invalid_argument("BallPoint: ambient dimension must be >= 2");
    if (!x_.allFinite()) throw std::invalid_argument("BallPoint: non-finite coordinates");
    if (x_.norm() >= 1.0 - kBoundaryMargin)
        throw std::invalid_argument("BallPoint: |x| >= 1 - 1e-12 (outside the open ball)");
}

BallPoint BallPoint::origin(int dim) { return BallPoint(Vec::Zero(dim)); }

double BallPoint::one_minus_norm2() const {
    const double r = x_.norm();
    return (1.0 - r) * (1.0 + r);
}

IdealPoint::IdealPoint(Vec direction) : u_(std::move(direction)) {
    if (u_.size() < 2) throw std::invalid_argument("IdealPoint: dimension must be >= 2");
    if (std::abs(u_.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("IdealPoint: direction is not a unit vector");
}

IdealPoint IdealPoint::from_direction(const Vec& v) {
    const double n = v.norm();
    if (!(n > 0.0)) throw std::invalid_argument("IdealPoint: zero direction");
    return IdealPoint(v / n);
}

BallIsometry::BallIsometry(Vec translation, Mat rotation)
    : a_(std::move(translation)), r_(std::move(rotation)) {
    if (r_.rows() != a_.size() || r_.cols() != a_.size())
        throw std::invalid_argument("BallIsometry: rotation shape does not match dimension");
    if (a_.norm() >= 1.0) throw std::invalid_argument("BallIsometry: |translation| >= 1");
    const Mat defect = r_.transpose() * r_ - Mat::Identity(r_.rows(), r_.cols());
    if (defect.cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("BallIsometry: rotation is not orthogonal");
}

BallIsometry BallIsometry::identity(int dim) {
    return BallIsometry(Vec::Zero(dim), Mat::Identity(dim, dim));
}

BallIsometry BallIsometry::rotation(Mat rotation) {
    const auto d = rotation.rows();
    return BallIsometry(Vec::Zero(d), std::move(rotation));
}

Vec BallIsometry::apply_coords(const Vec& x) const { return mobius_translate_coords(a_, r_ * x); }

BallPoint BallIsometry::apply(const BallPoint& p) const {
    require_same_dim(dim(), p.dim(), "BallIsometry::apply");
    return BallPoint(apply_coords(p.coords()));
}

IdealPoint BallIsometry::extend_to_boundary(const IdealPoint& xi) const {
    require_same_dim(dim(), xi.dim(), "BallIsometry::extend_to_boundary");
    return IdealPoint::from_direction(apply_coords(xi.direction()));
}

BallIsometry BallIsometry::inverse() const {
    // (t_a o R)^{-1} = R^T o t_{-a} = t_{-R^T a} o R^T
    const Mat rt = r_.transpose();
    return BallIsometry(-(rt * a_), rt);
}

BallIsometry BallIsometry::compose(const BallIsometry& other) const {
    require_same_dim(dim(), other.dim(), "BallIsometry::compose");
    const int d = dim();
    const Vec a = apply_coords(other.apply_coords(Vec::Zero(d)));
    // t_{-a} o (this o other) fixes 0, hence is an orthogonal linear map.
    Mat r(d, d);
    for (int i = 0; i < d; ++i) {
        const Vec e = 0.5 * Vec::Unit(d, i);
        r.col(i) = mobius_translate_coords(-a, apply_coords(other.apply_coords(e))) / 0.5;
    }
    Eigen::JacobiSVD<Mat> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return BallIsometry(a, svd.matrixU() * svd.matrixV().transpose());
}

double hyp_dist(const BallPoint& p, const BallPoint& q) {
    require_same_dim(p.dim(), q.dim(), "hyp_dist");
    // cosh d = 1 + 2|p-q|^2 / ((1-|p|^2)(1-|q|^2)), written via sinh(d/2)
    // to keep full relative precision for nearby points.
    const double diff = (p.coords() - q.coords()).norm();
    const double denom = std::sqrt(p.one_minus_norm2() * q.one_minus_norm2());
    return 2.0 * std::asinh(std::max(0.0, diff / denom));
}

Vec mobius_translate_coords(const Vec& a, const Vec& x) {
    const double ax = a.dot(x);
    const double a2 = a.squaredNorm();
    const double x2 = x.squaredNorm();
    const double num_a = 1.0 + 2.0 * ax + x2;
    const double den = 1.0 + 2.0 * ax + a2 * x2;
    return (num_a * a + (1.0 - a2) * x) / den;
}

Vec mobius_translate_differential(const Vec& a, const Vec& x, const Vec& w) {
    const double ax = a.dot(x);
    const double a2 = a.squaredNorm();
    const double x2 = x.squaredNorm();
    const double num_a = 1.0 + 2.0 * ax + x2;
    const double den = 1.0 + 2.0 * ax + a2 * x2;
    const double dnum = 2.0 * a.dot(w) + 2.0 * x.dot(w);
    const double dden = 2.0 * a.dot(w) + 2.0 * a2 * x.dot(w);
    const Vec f = (num_a * a + (1.0 - a2) * x) / den;
    return (dnum * a + (1.0 - a2) * w) / den - f * (dden / den);
}

BallIsometry mobius_translate(const Vec& a) {
    if (a.norm() >= 1.0) throw std::invalid_argument("mobius_translate: |a| >= 1");
    const auto d = a.size();
    return BallIsometry(a, Mat::Identity(d, d));
}

BallPoint apply_isometry(const BallIsometry& t, const BallPoint& p) { return t.apply(p); }

IdealPoint extend_to_boundary(const BallIsometry& t, const IdealPoint& xi) {
    return t.extend_to_boundary(xi);
}

BallPoint exp_origin(const Vec& u, double r) {
    const double n = u.norm();
    if (n == 0.0 || r == 0.0) return BallPoint::origin(static_cast<int>(u.size()));
    return BallPoint(std::tanh(0.5 * r) * u / n);
}

BallPoint exp_map(const BallPoint& p, const Vec& v) {
    require_same_dim(p.dim(), static_cast<int>(v.size()), "exp_map");
    const double len = v.norm();
    if (len == 0.0) return p;
    return BallPoint(mobius_translate_coords(p.coords(), std::tanh(0.5 * len) * v / len));
}

BallPoint geodesic_point(const BallPoint& p, const BallPoint& q, double s) {
    require_same_dim(p.dim(), q.dim(), "geodesic_point");
    const Vec qp = mobius_translate_coords(-p.coords(), q.coords());
    const double r = qp.norm();
    if (r == 0.0) return p;
    const double rho = 2.0 * std::atanh(r);
    const Vec m = std::tanh(0.5 * s * rho) * qp / r;
    return BallPoint(mobius_translate_coords(p.coords(), m));
}

std::pair<double, double> radial_hessian_coeffs(double rho, double f1, double f2) {
    if (!(rho > 0.0)) throw std::domain_error("radial_hessian_coeffs: rho must be > 0");
    return {f2, f1 / std::tanh(rho)};
}

double conformal_factor(const BallPoint& x) { return 2.0 / x.one_minus_norm2(); }

Vec radial_direction(const BallPoint& x, const BallPoint& p0) {
    require_same_dim(x.dim(), p0.dim(), "radial_direction");
    // Euclidean gradient of |x - p0|^2 / (1 - |x|^2), a monotone function
    // of d(x, p0); conformality makes it parallel to the metric gradient.
    const Vec diff = x.coords() - p0.coords();
    const Vec g = diff * x.one_minus_norm2() + diff.squaredNorm() * x.coords();
    const double n = g.norm();
    if (n == 0.0) throw std::domain_error("radial_direction: x coincides with p0");
    return g / n;
}

Vec geodesic_direction(const BallPoint& p, const BallPoint& q) { return -radial_direction(p, q); }

BallPoint hyperbolic_centroid(const std::vector<BallPoint>& pts, const std::vector<double>& weights) {
    if (pts.empty()) throw std::invalid_argument("hyperbolic_centroid: no points");
    if (!weights.empty() && weights.size() != pts.size())
        throw std::invalid_argument("hyperbolic_centroid: weight count mismatch");
    const int d = pts.front().dim();
    double t = 0.0;
    Vec s = Vec::Zero(d);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        require_same_dim(d, pts[i].dim(), "hyperbolic_centroid");
        const double w = weights.empty() ? 1.0 : weights[i];
        const double den = pts[i].one_minus_norm2();
        t += w * (2.0 - den) / den;
        s += w * 2.0 * pts[i].coords() / den;
    }
    const double lorentz = std::sqrt((t - s.norm()) * (t + s.norm()));
    t /= lorentz;
    s /= lorentz;
    return BallPoint(s / (1.0 + t));
}

double sphere_dist(const Vec& u, const Vec& v) {
    const double chord = (u - v).norm();
    return 2.0 * std::asin(std::min(1.0, 0.5 * chord));
}

}  // namespace hypent
