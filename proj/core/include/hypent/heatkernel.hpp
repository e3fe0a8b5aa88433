#pragma once

// Radial heat kernels K_n(t, rho) of hyperbolic space H^n.
//
// The Millison operator -(1/(2 pi sinh rho)) d/drho is, up to the factor
// -1/(2 pi), the derivative in y = cosh(rho). All kernels are therefore
// evaluated as Taylor jets in y:
//   * odd n = 2m+1:  K_n = e^{-m^2 t} (-1/(2 pi))^m  d^m/dy^m K_1,
//                    K_1 = (4 pi t)^{-1/2} exp(-arccosh(y)^2 / (4t)),
//     and arccosh(y)^2 is analytic at y = 1, so rho = 0 is a regular point;
//   * even n:        K_n(y) = 2 sqrt(2) e^{(2n-1)t/4} int_0^inf K_{n+1}(y + u^2) du,
//     the singular integral after the substitution u^2 = cosh s - cosh rho,
//     integrated with jets of the integrand so that derivatives come from
//     differentiating under the integral sign.
// Everything is carried in log space so large rho or small t never
// underflows the derivative information.

#include <string>

#include "hypent/jet.hpp"

namespace hypent {

enum class KernelMethod { ClosedOdd, QuadratureEven };

std::string to_string(KernelMethod m);

struct KernelQuery {
    int n = 1;
    double t = 1.0;
    double rho = 0.0;

    /// Throws std::invalid_argument on n < 1, t <= 0, rho < 0 or rho > kMaxRho.
    void validate() const;
};

/// Radii beyond this overflow cosh^2 in the jet recurrences.
inline constexpr double kMaxRho = 300.0;

struct KernelValue {
    double value = 0.0;  ///< K_n; may underflow to 0 where log_value < -745
    double d1 = 0.0;     ///< d/drho K_n
    double d2 = 0.0;     ///< d^2/drho^2 K_n
    KernelMethod method = KernelMethod::ClosedOdd;

    double log_value = 0.0;  ///< log K_n
    double dlog1 = 0.0;      ///< d/drho log K_n
    double dlog2 = 0.0;      ///< d^2/drho^2 log K_n
    /// d^2/dy^2 log K_n with y = cosh(rho). The convexity gap is
    /// sinh(rho)^2 times this value.
    double ylog2 = 0.0;
};

/// K_1(t, rho) = (4 pi t)^{-1/2} exp(-rho^2 / 4t).
KernelValue k1(double t, double rho);

/// K_3(t, rho) = (4 pi t)^{-3/2} (rho / sinh rho) exp(-t - rho^2 / 4t).
KernelValue k3(double t, double rho);

/// Odd n via iterated Millison steps from K_1. Throws for even n.
KernelValue odd_kernel(int n, double t, double rho);

/// Even n via the integral relation over K_{n+1}. Throws for odd n.
KernelValue even_kernel(int n, double t, double rho);

/// Dispatcher: n = 1 closed form; odd n >= 3 Millison chain; n = 2
/// integral relation over K_3; even n >= 4 Millison steps applied to the
/// K_2 integral.
KernelValue kernel(int n, double t, double rho);
KernelValue kernel(const KernelQuery& q);

/// log K_n only; skips derivative jets (cheapest path for functionals).
double log_kernel(int n, double t, double rho);

/// Log-jet of K_n in y = cosh(rho) about cosh(rho0), of the given order.
Jet kernel_log_jet_y(int n, double t, double rho, int order);

/// Decay envelope with unit constant for K_n:
///   t^{-n/2} e^{-(n-1)^2 t/4 - rho^2/4t - (n-1) rho/2}
///     (1+rho+t)^{(n-1)/2 - 1} (1+rho).
/// A shape reference only, never a certified bound.
double decay_bound(int n, double t, double rho);

/// Taylor jet of arccosh(y)^2 about y0 = cosh(rho).
Jet arccosh_sq_jet(double rho, int order);

/// Volume of the unit sphere S^m in R^{m+1}.
double sphere_volume(int m);

}  // namespace hypent
