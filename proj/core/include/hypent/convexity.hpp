#pragma once

// The radial convexity gap of log K_n,
//   gap = d^2/drho^2 log K_n - coth(rho) d/drho log K_n,
// and grid scans of its sign.

#include <string>
#include <vector>

#include "hypent/heatkernel.hpp"

namespace hypent {

struct GapSample {
    int n = 0;
    double t = 0.0;
    double rho = 0.0;
    double gap = 0.0;
    KernelMethod method = KernelMethod::ClosedOdd;
    std::string error;  ///< non-empty when the kernel evaluation failed
};

struct ScanGrid {
    double t_min = 0.01;
    double t_max = 100.0;
    int t_count = 40;  ///< log-spaced
    double rho_min = 0.01;
    double rho_max = 10.0;
    int rho_count = 100;  ///< linear-spaced

    /// Throws std::invalid_argument on empty or inverted ranges.
    void validate() const;
    std::vector<double> t_values() const;
    std::vector<double> rho_values() const;
};

struct ScanReport {
    int n = 0;
    ScanGrid grid;
    double tolerance = 0.0;
    bool asserted = false;  ///< false for n >= 4, where the sign is open
    double min_gap = 0.0;
    double argmin_t = 0.0;
    double argmin_rho = 0.0;
    int failures = 0;
    std::vector<GapSample> violations;
    std::vector<GapSample> samples;  ///< row-major: t outer, rho inner

    bool passed() const { return !asserted || (violations.empty() && failures == 0); }
};

/// Throws std::domain_error for rho <= 0. Computed as sinh^2(rho) times
/// the second y-derivative of log K_n, which has no cancellation.
double gap(int n, double t, double rho);

/// The n = 3 gap in closed form: (rho coth rho - 1)/(2t) + g(rho)/sinh^2 rho.
double gap3_closed(double t, double rho);

/// 1e-7 for closed-form odd kernels, 1e-6 for quadrature-backed even ones.
double violation_tolerance(int n);

ScanReport scan(int n, const ScanGrid& grid, int threads = 0);

struct LemmaReport {
    bool passed = true;
    int points_checked = 0;
    int coefficients_checked = 0;
    double min_coth_defect = 0.0;
    double min_g = 0.0;
    std::vector<std::string> failures;
};

/// rho coth rho - 1 >= 0 and g(rho) >= 0 on the grid (g by both the series
/// and the direct formula), and 8l^2 + 4l - 12 >= 0 for l = 1..50.
LemmaReport series_lemmas_check(const std::vector<double>& rho_grid);

std::string scan_report_json(const ScanReport& r);
std::string scan_report_csv(const ScanReport& r);

}  // namespace hypent
