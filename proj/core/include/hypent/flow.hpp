#pragma once

// Mean curvature flow at desk scale: polyline curve shortening in H^2 (any
// ambient dimension is accepted) and exact geodesic-sphere flows, with the
// monotone quantity F(t) = int Phi and its drop terms.

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hypent/functional.hpp"
#include "hypent/manifolds.hpp"

namespace hypent {

using FlowShape = std::variant<DiscreteCurve, GeodesicSphere>;

struct FlowState {
    double time = 0.0;
    FlowShape shape;
    double dt = 0.0;                ///< last step size used
    double max_displacement = 0.0;  ///< hyperbolic, last step
};

/// Mean curvature vectors at the vertices as coordinate velocities
/// (kappa_h nu / lambda), from circles through consecutive vertex triples.
/// Endpoints of open curves get zero. Collinear triples get zero and a
/// warning if `warnings` is given.
std::vector<Vec> hyperbolic_curvature(const DiscreteCurve& c,
                                      std::vector<std::string>* warnings = nullptr);

/// Metric curvature |H|_g = lambda |H_coord| at each vertex.
std::vector<double> curvature_norms(const DiscreteCurve& c);

struct CurveFlowControls {
    double t_end = 1.0;
    double cfl = 0.2;             ///< dt <= cfl * (min hyperbolic edge)^2
    int resample_every = 10;
    double min_length = 1e-3;
    double record_interval = 0.0;  ///< 0: record every step
    int max_rejections = 20;
    long max_steps = 50'000'000;
};

class FlowAbort : public std::runtime_error {
public:
    FlowAbort(const std::string& what, FlowState last)
        : std::runtime_error(what), state(std::move(last)) {}
    FlowState state;
};

/// One RK4 step. Throws FlowAbort if the step is rejected (displacement
/// beyond half the minimum edge or a stage leaving the ball).
FlowState step_curve(const FlowState& s, double dt);

/// Stepping with dt halving on rejection and periodic resampling.
std::vector<FlowState> run_curve(const DiscreteCurve& initial, const CurveFlowControls& ctl);

/// Same vertex count, uniform hyperbolic spacing; new vertices are placed
/// on the circles through neighbouring vertex triples.
DiscreteCurve resample_uniform(const DiscreteCurve& c);

/// Radius of a flowing n-sphere: cosh r(t) = cosh(r0) e^{-n t}.
double sphere_flow(int n, double r0, double t);
double sphere_extinction_time(int n, double r0);
std::vector<FlowState> run_sphere(const GeodesicSphere& initial, const std::vector<double>& times);

struct MonotonicityRecord {
    double t0 = 0.0;
    BallPoint p0 = BallPoint::origin(2);
    std::vector<double> times;
    std::vector<double> F_values;
    std::vector<double> Q_integrals;
    std::vector<double> defect_integrals;

    /// Finite-difference dF/dt on each recorded interval.
    std::vector<double> slopes() const;
};

MonotonicityRecord monotonicity_probe(const std::vector<FlowState>& traj, double t0,
                                      const BallPoint& p0);

struct IdentityCheck {
    double max_residual = 0.0;
    double scale = 0.0;  ///< max |dF/dt| over intervals
    std::vector<double> residuals;
    double relative() const { return scale > 0.0 ? max_residual / scale : max_residual; }
};

/// |dF/dt + (mean of the right-hand side at the interval ends)| per interval.
IdentityCheck monotonicity_identity_check(const MonotonicityRecord& rec);

/// Hyperbolic centroid and mean distance of the vertices.
std::pair<BallPoint, double> fitted_circle(const DiscreteCurve& c);

}  // namespace hypent
