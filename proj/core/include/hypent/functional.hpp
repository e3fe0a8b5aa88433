#pragma once

// F(Sigma; p0, tau) = int_Sigma K_n(tau, d(p0, .)) dVol and the hyperbolic
// entropy, its supremum over (p0, tau).

#include <cstdint>
#include <string>
#include <vector>

#include "hypent/manifolds.hpp"

namespace hypent {

struct FunctionalQuery {
    FunctionalQuery(BallPoint p0, double tau, int n);
    BallPoint p0;
    double tau;
    int n;
};

struct FunctionalOptions {
    double rel_tol = 1e-10;  ///< analytic (1-D quadrature) routes
    VolumeOptions volume;    ///< sample-based routes
};

/// Evaluator with the sample decomposition of Sigma cached.
class FFunctional {
public:
    explicit FFunctional(Submanifold s, FunctionalOptions opts = {});
    double operator()(const BallPoint& p0, double tau) const;
    int n() const { return n_; }
    const Submanifold& submanifold() const { return s_; }

private:
    Submanifold s_;
    FunctionalOptions opts_;
    int n_;
    std::vector<VolumeSample> samples_;
};

double f_functional(const Submanifold& s, const BallPoint& p0, double tau,
                    const FunctionalOptions& opts = {});

struct ReferenceConstants {
    static double euclidean_entropy_S1();    ///< sqrt(2 pi / e)
    static double euclidean_entropy_S2();    ///< 4 / e
    static double euclidean_entropy_S1xR();  ///< equals the S^1 value
    static double vol_sphere(int m);
};

enum class SearchStatus { Converged, BoundaryOfSearchDomain };
std::string to_string(SearchStatus s);

struct EntropyConfig {
    int starts = 12;
    double tau_min = 1e-4;
    double tau_max = 1e4;
    int tau_grid = 9;
    int vertex_seeds = 8;
    double radius_margin = 5.0;
    int max_evals = 300;  ///< per start and per polishing pass
    std::uint64_t seed = 0;
    int threads = 0;
    FunctionalOptions functional;
};

struct TraceEntry {
    Vec p0;
    double tau;
    double value;
    int start;  ///< -1 for grid seeds
};

struct EntropyResult {
    double value = 0.0;
    BallPoint argmax_p0 = BallPoint::origin(2);
    double argmax_tau = 0.0;
    std::vector<TraceEntry> trace;
    SearchStatus status = SearchStatus::Converged;
    int evaluations = 0;
    BallPoint search_center = BallPoint::origin(2);
    double search_radius = 0.0;
    std::vector<std::string> warnings;
};

EntropyResult entropy(const Submanifold& s, const EntropyConfig& cfg = {});

struct SmallTauResult {
    std::vector<double> taus;
    std::vector<double> values;
    double limit = 0.0;
    std::vector<std::string> warnings;
};

/// F at a sequence of decreasing tau with a linear-in-tau extrapolation
/// from the last two values.
SmallTauResult small_tau_limit(const Submanifold& s, const BallPoint& p0,
                               const std::vector<double>& taus = {1e-2, 1e-3, 1e-4},
                               const FunctionalOptions& opts = {});

}  // namespace hypent
