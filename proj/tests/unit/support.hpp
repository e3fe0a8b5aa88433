#pragma once

#include <cmath>
#include <random>

#include "hypent/hypgeo.hpp"

namespace testing {

using hypent::BallIsometry;
using hypent::BallPoint;
using hypent::Mat;
using hypent::Vec;

inline Vec random_unit(std::mt19937_64& rng, int d) {
    std::normal_distribution<double> g;
    Vec v(d);
    for (int i = 0; i < d; ++i) v[i] = g(rng);
    return v / v.norm();
}

/// Point at hyperbolic distance at most max_r from the origin.
inline BallPoint random_point(std::mt19937_64& rng, int d, double max_r = 3.0) {
    std::uniform_real_distribution<double> u(0.0, max_r);
    return hypent::exp_origin(random_unit(rng, d), u(rng));
}

inline Mat random_rotation(std::mt19937_64& rng, int d) {
    std::normal_distribution<double> g;
    Mat a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = g(rng);
    Eigen::HouseholderQR<Mat> qr(a);
    Mat q = qr.householderQ();
    if (q.determinant() < 0) q.col(0) *= -1.0;
    return q;
}

inline BallIsometry random_isometry(std::mt19937_64& rng, int d, double max_r = 2.0) {
    return BallIsometry(random_point(rng, d, max_r).coords(), random_rotation(rng, d));
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testing
