#pragma once

// Elementary functions that appear in the K_3 convexity gap, evaluated
// without cancellation near rho = 0.

namespace hypent {

/// rho coth(rho) - 1 (>= 0, ~ rho^2/3 at the origin).
double coth_defect(double rho);

/// g(rho) = 1 + cosh^2 - sinh^2/rho^2 - cosh sinh/rho (>= 0, ~ 7 rho^4/45).
/// Below rho = 1 the all-positive power series
///   sum_{l>=1} (8l^2 + 4l - 12) 4^{l-1} / (2l+2)! rho^{2l}
/// is summed directly.
double g_function(double rho);

/// 1/sinh^2 + coth^2 - 1/rho^2 - coth/rho = g(rho) / sinh^2(rho).
double g_over_sinh2(double rho);

}  // namespace hypent
