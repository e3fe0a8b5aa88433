#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature for jet-valued
// integrands. Every component of the jet is integrated on the same panel
// set, so the result is the exact jet of one discretized integral.

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypent/jet.hpp"

namespace hypent {

struct QuadratureOptions {
    double rel_tol = 1e-12;
    double abs_tol = 0.0;
    int max_panels = 2000;
};

struct QuadratureResult {
    Jet value;
    Jet error;
    int panels = 0;
};

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}
    /// Worst achieved relative error over components.
    double achieved() const { return achieved_; }

private:
    double achieved_;
};

using JetIntegrand = std::function<Jet(double)>;

/// Integrates f over [a, b]. Component k is accepted once its error
/// estimate is below rel_tol * int|f_k| + abs_tol.
QuadratureResult integrate_adaptive(const JetIntegrand& f, double a, double b,
                                    const QuadratureOptions& opts = {});

/// Same, with the interval pre-split at the given increasing breakpoints
/// (first and last entries are the integration limits).
QuadratureResult integrate_adaptive(const JetIntegrand& f, const std::vector<double>& breaks,
                                    const QuadratureOptions& opts = {});

/// Scalar convenience wrapper.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const QuadratureOptions& opts = {});

/// Fixed n-point Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace hypent
