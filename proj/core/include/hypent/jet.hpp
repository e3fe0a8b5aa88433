#pragma once

// Truncated Taylor series ("jets") for forward-mode differentiation of
// arbitrary order. A Jet of order M holds c_0..c_M with
//   f(x0 + w) = sum_k c_k w^k + O(w^{M+1}),
// i.e. c_k = f^{(k)}(x0) / k!.

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>

namespace hypent {

class Jet {
public:
    static constexpr int kMaxOrder = 15;

    Jet() = default;
    explicit Jet(int order, double value = 0.0) : order_(order) {
        assert(order >= 0 && order <= kMaxOrder);
        c_[0] = value;
    }

    /// The jet of the identity function at x0.
    static Jet variable(int order, double x0) {
        Jet j(order, x0);
        if (order >= 1) j.c_[1] = 1.0;
        return j;
    }

    int order() const { return order_; }
    double operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }
    double& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }
    double value() const { return c_[0]; }

    /// k-th derivative at the expansion point.
    double derivative(int k) const {
        double f = 1.0;
        for (int i = 2; i <= k; ++i) f *= i;
        return c_[static_cast<std::size_t>(k)] * f;
    }

    /// Jet of f' (order drops by one).
    Jet differentiate() const {
        assert(order_ >= 1);
        Jet d(order_ - 1);
        for (int k = 0; k < order_; ++k) d[k] = (k + 1) * (*this)[k + 1];
        return d;
    }

    Jet truncated(int order) const {
        assert(order <= order_);
        Jet r(order);
        for (int k = 0; k <= order; ++k) r[k] = (*this)[k];
        return r;
    }

    Jet& operator+=(const Jet& o) {
        order_ = std::min(order_, o.order_);
        for (int k = 0; k <= order_; ++k) (*this)[k] += o[k];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        order_ = std::min(order_, o.order_);
        for (int k = 0; k <= order_; ++k) (*this)[k] -= o[k];
        return *this;
    }
    Jet& operator*=(double s) {
        for (int k = 0; k <= order_; ++k) (*this)[k] *= s;
        return *this;
    }
    Jet& operator+=(double s) {
        c_[0] += s;
        return *this;
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(Jet a, double s) { return a *= s; }
    friend Jet operator*(double s, Jet a) { return a *= s; }
    friend Jet operator+(Jet a, double s) { return a += s; }
    friend Jet operator-(const Jet& a) { return a * -1.0; }

    friend Jet operator*(const Jet& a, const Jet& b) {
        const int m = std::min(a.order_, b.order_);
        Jet r(m);
        for (int k = 0; k <= m; ++k) {
            double s = 0.0;
            for (int i = 0; i <= k; ++i) s += a[i] * b[k - i];
            r[k] = s;
        }
        return r;
    }

private:
    int order_ = 0;
    std::array<double, kMaxOrder + 1> c_{};
};

/// exp of a jet: e' = f' e, solved coefficientwise.
inline Jet exp(const Jet& f) {
    const int m = f.order();
    Jet e(m, std::exp(f[0]));
    for (int k = 1; k <= m; ++k) {
        double s = 0.0;
        for (int i = 1; i <= k; ++i) s += i * f[i] * e[k - i];
        e[k] = s / k;
    }
    return e;
}

/// log of a jet with non-zero constant term; uses |f(x0)| so that a
/// sign-definite negative jet maps to the log of its magnitude.
inline Jet log_abs(const Jet& f) {
    const int m = f.order();
    Jet l(m, std::log(std::abs(f[0])));
    for (int k = 1; k <= m; ++k) {
        double s = k * f[k];
        for (int i = 1; i < k; ++i) s -= i * l[i] * f[k - i];
        l[k] = s / (k * f[0]);
    }
    return l;
}

}  // namespace hypent
