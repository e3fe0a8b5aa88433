#pragma once

// Nelder-Mead simplex search (minimization). Non-finite objective values
// are treated as +infinity, which lets callers encode box constraints.

#include <functional>

#include "hypent/hypgeo.hpp"

namespace hypent {

struct NelderMeadOptions {
    int max_evals = 400;
    double f_tol = 1e-11;  ///< spread of simplex values
    double x_tol = 1e-8;   ///< simplex diameter
};

struct NelderMeadResult {
    Vec x;
    double f = 0.0;
    int evals = 0;
    bool converged = false;
};

/// `on_accept` (optional) is called with the best vertex after every
/// iteration that improves it.
NelderMeadResult nelder_mead(const std::function<double(const Vec&)>& f, const Vec& x0,
                             const Vec& steps, const NelderMeadOptions& opts = {},
                             const std::function<void(const Vec&, double)>& on_accept = {});

}  // namespace hypent
