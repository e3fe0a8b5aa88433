#include "hypent/heatkernel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypent/quadrature.hpp"
#include "hypent/special.hpp"

namespace hypent {
namespace {

constexpr double kPi = std::numbers::pi;
// log(2 sqrt 2): the 2 from u^2 = cosh s - cosh rho, sqrt 2 normalizes the mass.
constexpr double kLogTwoSqrt2 = 1.5 * std::numbers::ln2;
// Integrand radii beyond this contribute nothing representable.
constexpr double kRhoCap = 340.0;
// Truncate the even-kernel integral once the integrand has dropped by e^-60.
constexpr double kTailDrop = 60.0;
constexpr double kBreakLevels[] = {0.5, 2.0, 8.0, 20.0};

void check_t(double t, const char* who) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw std::invalid_argument(std::string(who) + ": t must be finite and > 0");
}

void check_rho(double rho, const char* who) {
    if (!(rho >= 0.0) || rho > kMaxRho)
        throw std::invalid_argument(std::string(who) + ": rho must lie in [0, 300]");
}

// Coefficients of arccosh(1 + z)^2 = sum_{k>=1} a_k z^k.
const std::vector<double>& acosh_sq_series() {
    static const std::vector<double> a = [] {
        std::vector<double> c(800, 0.0);
        c[1] = 2.0;
        for (std::size_t j = 1; j + 1 < c.size(); ++j) {
            const double jj = static_cast<double>(j);
            c[j + 1] = -jj * jj * c[j] / ((jj + 1.0) * (2.0 * jj + 1.0));
        }
        return c;
    }();
    return a;
}

// Jet of arccosh(y)^2 in the scaled variable w = (y - y0) / cosh(rho).
Jet scaled_acosh_sq_jet(double rho, int order) {
    const double y0 = std::cosh(rho);
    const double sh = std::sinh(rho);
    Jet b(order, rho * rho);
    if (order >= 1) b[1] = (rho == 0.0 ? 2.0 : 2.0 * rho / sh) * y0;
    if (order < 2) return b;

    const double sh_half = std::sinh(0.5 * rho);
    const double z0 = 2.0 * sh_half * sh_half;
    if (z0 <= 1.0) {
        // Re-expand the series about y = 1 at y0; the majorant stays within
        // a factor 3^order of the true coefficients for z0 <= 1.
        const auto& a = acosh_sq_series();
        const int kmax = static_cast<int>(a.size()) - 1;
        double scale = y0 * y0;
        for (int j = 2; j <= order; ++j) {
            double sum = 0.0;
            double binom_pow = 1.0;  // C(k, j) z0^{k-j}
            for (int k = j; k <= kmax; ++k) {
                const double term = a[static_cast<std::size_t>(k)] * binom_pow;
                sum += term;
                if (k > j + 8 && std::abs(term) <= 1e-18 * std::abs(sum)) break;
                binom_pow *= z0 * (k + 1.0) / (k + 1.0 - j);
            }
            b[j] = sum * scale;
            scale *= y0;
        }
        return b;
    }

    // (y^2 - 1) A'' + y A' = 2, coefficientwise, in the scaled variable.
    const double coth2 = (y0 / sh) * (y0 / sh);
    for (int j = 0; j + 2 <= order; ++j) {
        const double rhs = (j == 0 ? 2.0 * coth2 : 0.0) -
                           coth2 * (j + 1.0) * (2.0 * j + 1.0) * b[j + 1] -
                           coth2 * static_cast<double>(j) * j * b[j];
        b[j + 2] = rhs / ((j + 2.0) * (j + 1.0));
    }
    return b;
}

// log K_{2m+1} as a jet in w = (y - y0) / cosh(rho).
Jet odd_log_jet(int m, double t, double rho, int order) {
    const int total = order + m;
    if (total > Jet::kMaxOrder) throw std::invalid_argument("heat kernel: jet order too large");
    Jet g = scaled_acosh_sq_jet(rho, total) * (-0.25 / t);
    g[0] -= 0.5 * std::log(4.0 * kPi * t);
    if (m == 0) return g;

    const Jet gp = g.differentiate();
    Jet b(total, 1.0);
    for (int k = 0; k < m; ++k) b = b.differentiate() + gp * b;
    if (!(b[0] * ((m % 2 == 0) ? 1.0 : -1.0) > 0.0))
        throw std::domain_error("odd_kernel: lost sign of the Millison derivative");

    Jet l = g.truncated(order) + log_abs(b);
    l[0] -= m * (m * t + std::log(2.0 * kPi) + std::log(std::cosh(rho)));
    return l;
}

double odd_log_value(int q, double t, double rho) {
    return odd_log_jet((q - 1) / 2, t, rho, 0)[0];
}

struct IntegralJet {
    Jet c;
    double log_ref = 0.0;
};

// int_0^inf K_q(y + u^2) du as a jet in w = (y - y0) / cosh(rho), divided
// by exp(log_ref). With u = sinh v the integrand decays like a Gaussian in
// y-space and is smooth at v = 0.
IntegralJet integrate_odd(int q, double t, double rho, int order) {
    const int m = (q - 1) / 2;
    const double sh_half = std::sinh(0.5 * rho);
    const double z0 = 2.0 * sh_half * sh_half;
    const double scale = std::cosh(rho);
    const double log_ref = odd_log_value(q, t, rho);

    auto rho_at = [&](double v) {
        const double s = std::sinh(v);
        return 2.0 * std::asinh(std::sqrt(0.5 * (z0 + s * s)));
    };
    auto log_integrand = [&](double v) {
        const double rp = rho_at(v);
        if (rp > kRhoCap) return -std::numeric_limits<double>::infinity();
        return odd_log_value(q, t, rp) - log_ref + std::log(std::cosh(v));
    };

    std::vector<double> breaks{0.0};
    std::size_t level = 0;
    double peak = 0.0;
    double v = 1e-3 * std::sqrt(std::min(t, 1.0));
    for (int it = 0; it < 200; ++it, v *= 2.0) {
        const double h = log_integrand(v);
        peak = std::max(peak, h);
        const double drop = peak - h;
        while (level < std::size(kBreakLevels) && drop > kBreakLevels[level]) {
            if (v > breaks.back()) breaks.push_back(v);
            ++level;
        }
        if (drop > kTailDrop) break;
    }
    if (v > breaks.back()) breaks.push_back(v);

    auto f = [&](double vv) {
        const double rp = rho_at(vv);
        if (rp > kRhoCap) return Jet(order);
        Jet l = odd_log_jet(m, t, rp, order);
        const double ratio = scale / std::cosh(rp);
        double r = 1.0;
        for (int j = 1; j <= order; ++j) {
            r *= ratio;
            l[j] *= r;
        }
        l[0] -= log_ref;
        return exp(l) * std::cosh(vv);
    };
    // exp of a log of size |log_ref| carries about eps |log_ref| relative error.
    QuadratureOptions opts;
    opts.rel_tol = std::max(1e-12, 16.0 * std::numeric_limits<double>::epsilon() * std::abs(log_ref));
    opts.max_panels = 4000;
    return {integrate_adaptive(JetIntegrand(f), breaks, opts).value, log_ref};
}

// Even n by the integral relation over K_{n+1}.
Jet even_integral_log_jet(int n, double t, double rho, int order) {
    const IntegralJet ij = integrate_odd(n + 1, t, rho, order);
    Jet l = log_abs(ij.c);
    l[0] += ij.log_ref + kLogTwoSqrt2 + (2.0 * n - 1.0) * t / 4.0;
    return l;
}

// Even n = 2m + 2 >= 4 by m Millison steps applied to the K_2 integral.
Jet even_millison_log_jet(int n, double t, double rho, int order) {
    const int m = (n - 2) / 2;
    const IntegralJet ij = integrate_odd(3, t, rho, order + m);
    Jet e(order);
    for (int j = 0; j <= order; ++j) {
        double f = 1.0;
        for (int i = j + 1; i <= j + m; ++i) f *= i;
        e[j] = ij.c[j + m] * f;
    }
    if (!(e[0] * ((m % 2 == 0) ? 1.0 : -1.0) > 0.0))
        throw std::domain_error("kernel: lost sign of the Millison derivative of K_2");
    Jet l = log_abs(e);
    l[0] += ij.log_ref + kLogTwoSqrt2 + 0.75 * t -
            m * ((m + 1.0) * t + std::log(2.0 * kPi) + std::log(std::cosh(rho)));
    return l;
}

Jet scaled_log_jet(int n, double t, double rho, int order) {
    if (n % 2 == 1) return odd_log_jet((n - 1) / 2, t, rho, order);
    if (n == 2) return even_integral_log_jet(2, t, rho, order);
    return even_millison_log_jet(n, t, rho, order);
}

KernelValue from_scaled(const Jet& l, double rho, KernelMethod method) {
    const double th = std::tanh(rho);
    const double c = std::cosh(rho);
    KernelValue v;
    v.method = method;
    v.log_value = l[0];
    v.value = std::exp(l[0]);
    v.dlog1 = th * l[1];
    v.dlog2 = 2.0 * th * th * l[2] + l[1];
    v.ylog2 = 2.0 * l[2] / (c * c);
    v.d1 = v.value * v.dlog1;
    v.d2 = v.value * (v.dlog2 + v.dlog1 * v.dlog1);
    return v;
}

void fill_derivatives(KernelValue& v) {
    v.value = std::exp(v.log_value);
    v.d1 = v.value * v.dlog1;
    v.d2 = v.value * (v.dlog2 + v.dlog1 * v.dlog1);
}

}  // namespace

std::string to_string(KernelMethod m) {
    return m == KernelMethod::ClosedOdd ? "closed-odd" : "quadrature-even";
}

void KernelQuery::validate() const {
    if (n < 1) throw std::invalid_argument("KernelQuery: n must be >= 1");
    check_t(t, "KernelQuery");
    check_rho(rho, "KernelQuery");
}

Jet arccosh_sq_jet(double rho, int order) {
    check_rho(rho, "arccosh_sq_jet");
    Jet b = scaled_acosh_sq_jet(rho, order);
    const double s = std::cosh(rho);
    double r = 1.0;
    for (int j = 1; j <= order; ++j) {
        r /= s;
        b[j] *= r;
    }
    return b;
}

KernelValue k1(double t, double rho) {
    check_t(t, "k1");
    check_rho(rho, "k1");
    KernelValue v;
    v.method = KernelMethod::ClosedOdd;
    v.log_value = -rho * rho / (4.0 * t) - 0.5 * std::log(4.0 * kPi * t);
    v.dlog1 = -rho / (2.0 * t);
    v.dlog2 = -1.0 / (2.0 * t);
    v.ylog2 = -2.0 * arccosh_sq_jet(rho, 2)[2] / (4.0 * t);
    fill_derivatives(v);
    return v;
}

KernelValue k3(double t, double rho) {
    check_t(t, "k3");
    check_rho(rho, "k3");
    KernelValue v;
    v.method = KernelMethod::ClosedOdd;
    double log_ratio;  // log(rho / sinh rho)
    if (rho < 1e-4) {
        log_ratio = -rho * rho / 6.0;
    } else {
        log_ratio = std::log(rho) - (rho + std::log1p(-std::exp(-2.0 * rho)) - std::log(2.0));
    }
    v.log_value = -1.5 * std::log(4.0 * kPi * t) + log_ratio - t - rho * rho / (4.0 * t);
    if (rho == 0.0) {
        v.dlog1 = 0.0;
        v.dlog2 = -1.0 / 3.0 - 1.0 / (2.0 * t);
        v.ylog2 = 1.0 / (6.0 * t) + 7.0 / 45.0;
    } else {
        const double coth = 1.0 / std::tanh(rho);
        const double cd = coth_defect(rho);
        const double s = std::sinh(rho);
        const double gs = g_over_sinh2(rho);
        v.dlog1 = -cd / rho - rho / (2.0 * t);
        // 1/sinh^2 - 1/rho^2 = g/sinh^2 - coth (coth - 1/rho)
        v.dlog2 = gs - coth * cd / rho - 1.0 / (2.0 * t);
        v.ylog2 = (cd / (2.0 * t) + gs) / (s * s);
    }
    fill_derivatives(v);
    return v;
}

KernelValue odd_kernel(int n, double t, double rho) {
    if (n < 1 || n % 2 == 0) throw std::invalid_argument("odd_kernel: n must be odd and >= 1");
    check_t(t, "odd_kernel");
    check_rho(rho, "odd_kernel");
    return from_scaled(odd_log_jet((n - 1) / 2, t, rho, 2), rho, KernelMethod::ClosedOdd);
}

KernelValue even_kernel(int n, double t, double rho) {
    if (n < 2 || n % 2 == 1) throw std::invalid_argument("even_kernel: n must be even and >= 2");
    check_t(t, "even_kernel");
    check_rho(rho, "even_kernel");
    return from_scaled(even_integral_log_jet(n, t, rho, 2), rho, KernelMethod::QuadratureEven);
}

KernelValue kernel(int n, double t, double rho) { return kernel(KernelQuery{n, t, rho}); }

KernelValue kernel(const KernelQuery& q) {
    q.validate();
    if (q.n == 1) return k1(q.t, q.rho);
    const auto method = q.n % 2 == 1 ? KernelMethod::ClosedOdd : KernelMethod::QuadratureEven;
    return from_scaled(scaled_log_jet(q.n, q.t, q.rho, 2), q.rho, method);
}

double log_kernel(int n, double t, double rho) {
    KernelQuery{n, t, rho}.validate();
    if (n == 1) return -rho * rho / (4.0 * t) - 0.5 * std::log(4.0 * kPi * t);
    return scaled_log_jet(n, t, rho, 0)[0];
}

Jet kernel_log_jet_y(int n, double t, double rho, int order) {
    KernelQuery{n, t, rho}.validate();
    Jet l = scaled_log_jet(n, t, rho, order);
    const double s = std::cosh(rho);
    double r = 1.0;
    for (int j = 1; j <= order; ++j) {
        r /= s;
        l[j] *= r;
    }
    return l;
}

double decay_bound(int n, double t, double rho) {
    const double m = n - 1.0;
    const double log_env = -0.5 * n * std::log(t) - m * m * t / 4.0 - rho * rho / (4.0 * t) -
                           m * rho / 2.0 + (m / 2.0 - 1.0) * std::log1p(rho + t) +
                           std::log1p(rho);
    return std::exp(log_env);
}

double sphere_volume(int m) {
    const double h = 0.5 * (m + 1.0);
    return 2.0 * std::pow(kPi, h) / std::tgamma(h);
}

}  // namespace hypent
