#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hypent/heatkernel.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace hypent;
using testing::rel_err;

namespace {

constexpr double kPi = std::numbers::pi;
using GK = boost::math::quadrature::gauss_kronrod<double, 61>;

double mass(int n, double t) {
    auto f = [&](double r) {
        if (n > 1 && r <= 0.0) return 0.0;
        return std::exp(log_kernel(n, t, r)) * sphere_volume(n - 1) * std::pow(std::sinh(r), n - 1);
    };
    const double peak = (n - 1) * t, w = std::sqrt(2.0 * t);
    double total = 0.0, a = 0.0;
    for (double k : {-6.0, -2.0, 0.0, 2.0, 6.0, 12.0, 24.0}) {
        const double b = peak + k * w;
        if (b <= a) continue;
        total += GK::integrate(f, a, b, 15, 1e-13);
        a = b;
    }
    return total;
}

double dt_log(int n, double t, double r) {
    const double h = 1e-4 * t;
    auto d = [&](double s) { return (log_kernel(n, t + s, r) - log_kernel(n, t - s, r)) / (2 * s); };
    return (4 * d(0.5 * h) - d(h)) / 3;
}

double heat_residual(int n, double t, double r) {
    const KernelValue k = kernel(n, t, r);
    return std::abs(dt_log(n, t, r) - k.dlog2 - k.dlog1 * k.dlog1 - (n - 1) * k.dlog1 / std::tanh(r));
}

}  // namespace

TEST_CASE("one-dimensional kernel") {
    CHECK(k1(1, 0).value == doctest::Approx(1 / std::sqrt(4 * kPi)).epsilon(1e-15));
    CHECK(k1(1 / (4 * kPi), 0).value == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(k1(1, 2).value == doctest::Approx(std::exp(-1.0) / std::sqrt(4 * kPi)).epsilon(1e-15));
    CHECK(k1(1, 2).value == doctest::Approx(0.1037769).epsilon(1e-6));
    CHECK(k1(2, 1).d1 == doctest::Approx(-k1(2, 1).value / 4).epsilon(1e-14));
    CHECK(kernel(1, 1, 1).method == KernelMethod::ClosedOdd);
}

TEST_CASE("three-dimensional closed form") {
    CHECK(k3(1, 0).value == doctest::Approx(std::pow(4 * kPi, -1.5) * std::exp(-1.0)).epsilon(1e-14));
    CHECK(k3(1, 0).value == doctest::Approx(0.0082583).epsilon(1e-4));
    CHECK(k3(1, 1).value == doctest::Approx(std::pow(4 * kPi, -1.5) / std::sinh(1.0) * std::exp(-1.25)).epsilon(1e-14));
    CHECK(k3(1, 1e-6).value == doctest::Approx(k3(1, 0).value).epsilon(1e-12));
    CHECK(k3(1, 0).ylog2 == doctest::Approx(1.0 / 6 + 7.0 / 45).epsilon(1e-13));
}

TEST_CASE("Millison step from K1 reproduces K3") {
    for (double t : {0.01, 0.1, 1.0, 10.0, 100.0})
        for (double r : {0.01, 0.5, 1.0, 3.0, 9.0}) {
            const KernelValue a = k1(t, r);
            const double millison = -std::exp(-t) / (2 * kPi * std::sinh(r)) * a.d1;
            if (a.value > 1e-290) {
                CHECK(rel_err(millison, k3(t, r).value) < 1e-12);
            }
            CHECK(rel_err(odd_kernel(3, t, r).value, k3(t, r).value) < 1e-11);
        }
}

TEST_CASE("kernel mass is one") {
    for (int n : {1, 2, 3, 5})
        for (double t : {0.1, 1.0, 10.0}) {
            INFO("n = " << n << ", t = " << t);
            CHECK(std::abs(mass(n, t) - 1.0) < 1e-6);
        }
    CHECK(sphere_volume(4) == doctest::Approx(8 * kPi * kPi / 3).epsilon(1e-15));
}

TEST_CASE("even kernel against the classical integral") {
    CHECK(kernel(2, 1, 1).method == KernelMethod::QuadratureEven);
    for (double t : {0.05, 0.5, 1.0, 5.0})
        for (double r : {0.0, 0.3, 1.0, 4.0}) {
            INFO("t = " << t << ", rho = " << r);
            CHECK(rel_err(kernel(2, t, r).value, testing::k2_oracle(t, r)) < 1e-9);
        }
}

TEST_CASE("small-time Gaussian limit in dimension two") {
    const double t = 1e-4, r = std::sqrt(t);
    const double ratio = kernel(2, t, r).value * 4 * kPi * t * std::exp(r * r / (4 * t));
    CHECK(std::abs(ratio - 1.0) < 0.02);
}

TEST_CASE("heat equation residual") {
    for (int n : {2, 3, 4, 5})
        for (double t : {0.01, 0.1, 1.0, 10.0, 100.0})
            for (double r : {0.05, 1.0, 5.0, 10.0}) {
                INFO("n = " << n << ", t = " << t << ", rho = " << r);
                CHECK(heat_residual(n, t, r) < (n == 5 ? 1e-6 : 1e-5));
            }
}

TEST_CASE("two routes to K4 agree") {
    for (double t : {0.01, 0.1, 1.0, 10.0, 100.0})
        for (double r : {0.01, 1.0, 5.0, 10.0}) {
            const KernelValue a = kernel(4, t, r), b = even_kernel(4, t, r);
            CHECK(std::abs(a.log_value - b.log_value) < 1e-5);
            CHECK(rel_err(a.dlog1 + 1e-300, b.dlog1 + 1e-300) < 1e-5);
        }
    CHECK(kernel(6, 1, 1).value > 0.0);
    CHECK(std::isfinite(kernel(6, 1, 1).value));
}

TEST_CASE("derivatives agree with finite differences") {
    for (int n : {1, 2, 3, 4, 5, 6})
        for (double t : {0.1, 1.0, 10.0})
            for (double r : {0.2, 1.0, 4.0}) {
                const double h = 1e-5 * std::max(1.0, r);
                const KernelValue k = kernel(n, t, r);
                const double fd1 = (log_kernel(n, t, r + h) - log_kernel(n, t, r - h)) / (2 * h);
                const double fd2 = (kernel(n, t, r + h).dlog1 - kernel(n, t, r - h).dlog1) / (2 * h);
                INFO("n = " << n << ", t = " << t << ", rho = " << r);
                CHECK(std::abs(k.dlog1 - fd1) < 1e-6 * std::max(1.0, std::abs(fd1)));
                CHECK(std::abs(k.dlog2 - fd2) < 1e-6 * std::max(1.0, std::abs(fd2)));
                CHECK(k.d1 == doctest::Approx(k.value * k.dlog1).epsilon(1e-12));
            }
}

TEST_CASE("positivity and radial monotonicity") {
    for (int n = 1; n <= 8; ++n)
        for (double t : {1e-3, 0.1, 1.0, 10.0, 50.0})
            for (double r : {0.0, 0.5, 2.0, 8.0, 20.0}) {
                const KernelValue k = kernel(n, t, r);
                INFO("n = " << n << ", t = " << t << ", rho = " << r);
                CHECK(std::isfinite(k.log_value));
                CHECK(k.value >= 0.0);
                CHECK(k.dlog1 <= 0.0);
                if (r == 0.0) CHECK(k.dlog1 == 0.0);
            }
}

TEST_CASE("log space survives underflow") {
    const KernelValue k = kernel(3, 0.01, 250.0);
    CHECK(k.value == 0.0);
    CHECK(std::isfinite(k.log_value));
    CHECK(k.log_value < -1e6);
    CHECK(std::isfinite(kernel(2, 0.01, 200.0).log_value));
}

TEST_CASE("decay envelope and large-time behaviour") {
    for (int n : {2, 3, 5}) {
        const double t = 2.0;
        double prev = decay_bound(n, t, n * t + 0.1);
        CHECK(prev > 0.0);
        for (double r = n * t + 0.5; r < 40; r += 0.5) {
            const double v = decay_bound(n, t, r);
            CHECK(v < prev);
            prev = v;
        }
    }
    // least-squares slope of log K_3(t, 1) + 1.5 log t over t in [10, 50]
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (double t = 10; t <= 50; t += 2, ++m) {
        const double y = log_kernel(3, t, 1.0) + 1.5 * std::log(t);
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    CHECK(std::abs(slope + 1.0) < 0.02);
    double lo = 1e300, hi = 0;
    for (double t = 1; t <= 50; t += 1) {
        const double v = kernel(2, t, 1.0).value * std::pow(t, 1.5) * std::exp(t / 4);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(hi / lo < 10.0);
}

TEST_CASE("query validation") {
    CHECK_THROWS_AS(kernel(3, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(kernel(3, 1.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(kernel(0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(kernel(3, 1.0, 400.0), std::invalid_argument);
    CHECK_THROWS_AS(odd_kernel(4, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(even_kernel(3, 1.0, 1.0), std::invalid_argument);
    CHECK(to_string(KernelMethod::ClosedOdd) != to_string(KernelMethod::QuadratureEven));
}

TEST_CASE("arccosh squared jet") {
    for (double r : {0.0, 0.3, 2.0}) {
        const Jet j = arccosh_sq_jet(r, 4);
        CHECK(j[0] == doctest::Approx(r * r).epsilon(1e-14));
        // d/dy acosh(y)^2 = 2 acosh(y) / sqrt(y^2 - 1), limit 2 at y = 1
        const double expect = r > 0 ? 2 * r / std::sinh(r) : 2.0;
        CHECK(j[1] == doctest::Approx(expect).epsilon(1e-12));
    }
}
