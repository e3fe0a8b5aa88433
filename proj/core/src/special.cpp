#include "hypent/special.hpp"

#include <cmath>

namespace hypent {

double coth_defect(double rho) {
    rho = std::abs(rho);
    if (rho == 0.0) return 0.0;
    if (rho < 0.5) {
        // rho cosh - sinh = sum_{k>=1} 2k rho^{2k+1} / (2k+1)!
        const double r2 = rho * rho;
        double term = rho;  // rho^{2k+1} / (2k+1)! at k = 0
        double f = 0.0;
        for (int k = 1; k < 30; ++k) {
            term *= r2 / ((2.0 * k) * (2.0 * k + 1.0));
            const double add = 2.0 * k * term;
            f += add;
            if (add < 1e-18 * f) break;
        }
        return f / std::sinh(rho);
    }
    return rho / std::tanh(rho) - 1.0;
}

double g_function(double rho) {
    rho = std::abs(rho);
    if (rho < 1.0) {
        const double r2 = rho * rho;
        double sum = 0.0;
        double pow4 = 1.0;     // 4^{l-1}
        double fact = 24.0;    // (2l+2)! at l = 1
        double rpow = r2;      // rho^{2l}
        for (int l = 1; l < 40; ++l) {
            const double add = (8.0 * l * l + 4.0 * l - 12.0) * pow4 / fact * rpow;
            sum += add;
            if (l > 2 && add < 1e-18 * sum) break;
            pow4 *= 4.0;
            fact *= (2.0 * l + 3.0) * (2.0 * l + 4.0);
            rpow *= r2;
        }
        return sum;
    }
    const double s = std::sinh(rho), c = std::cosh(rho);
    return 1.0 + c * c - s * s / (rho * rho) - c * s / rho;
}

double g_over_sinh2(double rho) {
    rho = std::abs(rho);
    if (rho == 0.0) return 0.0;
    const double s = std::sinh(rho);
    return g_function(rho) / (s * s);
}

}  // namespace hypent
