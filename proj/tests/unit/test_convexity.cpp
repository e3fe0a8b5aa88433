#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "hypent/convexity.hpp"
#include "hypent/special.hpp"
#include "support.hpp"

using namespace hypent;
using testing::rel_err;

namespace {

// Direct n = 3 formula, with its rho -> 0 cancellations left in.
double gap3_direct(double t, double r) {
    const double c = 1.0 / std::tanh(r), s = std::sinh(r);
    return (r * c - 1) / (2 * t) + 1 / (s * s) + c * c - 1 / (r * r) - c / r;
}

ScanGrid small_grid() {
    ScanGrid g;
    g.t_count = 8;
    g.rho_count = 12;
    return g;
}

}  // namespace

TEST_CASE("gap values") {
    CHECK(gap(3, 1, 1) == doctest::Approx(0.291608).epsilon(1e-5));
    CHECK(gap3_closed(1, 1) == doctest::Approx(gap3_direct(1, 1)).epsilon(1e-13));
    CHECK(gap(1, 1, 2) == doctest::Approx((2 / std::tanh(2.0) - 1) / 2).epsilon(1e-13));
    CHECK(gap(1, 1, 2) == doctest::Approx(0.5373).epsilon(1e-4));
    for (int n = 1; n <= 8; ++n) CHECK(std::abs(gap(n, 1, 1e-3)) < 1e-2);
    CHECK_THROWS_AS(gap(2, 1, 0.0), std::domain_error);
}

TEST_CASE("closed n = 3 gap matches the kernel gap") {
    for (double t = 0.1; t <= 10.0; t *= 1.5)
        for (double r = 0.1; r <= 10.0; r += 0.37) CHECK(rel_err(gap(3, t, r), gap3_closed(t, r)) < 1e-8);
    for (double r : {0.5, 1.0, 3.0}) CHECK(rel_err(gap3_closed(1.7, r), gap3_direct(1.7, r)) < 1e-10);
}

TEST_CASE("closed n = 3 gap limits") {
    for (double r : {0.1, 1.0, 5.0}) {
        const double inf_limit = g_over_sinh2(r);
        CHECK(inf_limit >= 0.0);
        CHECK(gap3_closed(1e9, r) == doctest::Approx(inf_limit).epsilon(1e-8));
    }
    CHECK(std::abs(gap3_closed(1.0, 1e-6)) < 1e-5);
}

TEST_CASE("series lemmas") {
    CHECK(coth_defect(1.0) == doctest::Approx(0.3130352854993312).epsilon(1e-14));
    CHECK(g_function(1.0) == doctest::Approx(0.186570).epsilon(1e-5));
    CHECK(8 * 1 * 1 + 4 * 1 - 12 == 0);
    std::vector<double> grid;
    for (double r = 0.01; r <= 20.0; r += 0.01) grid.push_back(r);
    const LemmaReport rep = series_lemmas_check(grid);
    CHECK(rep.passed);
    CHECK(rep.failures.empty());
    CHECK(rep.points_checked == static_cast<int>(grid.size()));
    CHECK(rep.coefficients_checked >= 50);
    CHECK(rep.min_coth_defect >= 0.0);
    CHECK(rep.min_g >= 0.0);
}

TEST_CASE("scans over the standard grid") {
    const ScanGrid grid;
    for (int n : {1, 2, 3}) {
        const ScanReport r = scan(n, grid);
        INFO("n = " << n);
        CHECK(r.asserted);
        CHECK(r.passed());
        CHECK(r.min_gap >= -violation_tolerance(n));
        CHECK(r.samples.size() == 4000);
        double mn = 1e300;
        for (const auto& s : r.samples) {
            mn = std::min(mn, s.gap);
            if (n == 3 && s.rho >= 0.1) CHECK(s.gap > 0.0);
        }
        CHECK(r.min_gap == mn);
    }
    CHECK(violation_tolerance(3) == 1e-7);
    CHECK(violation_tolerance(2) == 1e-6);
}

TEST_CASE("pre-log convexity form") {
    for (int n : {1, 2})
        for (double t : ScanGrid{}.t_values())
            for (double r = 0.01; r <= 10.0; r += 0.5) {
                const KernelValue k = kernel(n, t, r);
                if (k.value < 1e-150) continue;
                const double form = k.value * (k.d2 - k.d1 / std::tanh(r)) - k.d1 * k.d1;
                CHECK(form >= -1e-6 * k.value * k.value);
            }
}

TEST_CASE("higher dimensions are reported, not asserted") {
    const ScanReport r = scan(5, small_grid());
    CHECK_FALSE(r.asserted);
    CHECK(r.passed());
    CHECK(r.samples.size() == 96);
    const auto j = nlohmann::json::parse(scan_report_json(r));
    CHECK(j.at("n") == 5);
    CHECK(j.contains("grid"));
    CHECK(j.contains("min_gap"));
    CHECK(j.contains("argmin"));
    CHECK(j.at("violations").is_array());
    const std::string csv = scan_report_csv(r);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 97);
}

TEST_CASE("scans are deterministic and thread-independent") {
    const ScanReport a = scan(2, small_grid(), 1), b = scan(2, small_grid(), 3);
    CHECK(scan_report_json(a) == scan_report_json(b));
    CHECK(scan_report_csv(a) == scan_report_csv(b));
}

TEST_CASE("grid validation") {
    ScanGrid g;
    g.t_min = -1;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    g = ScanGrid{};
    g.rho_max = 0.001;
    CHECK_THROWS_AS(scan(3, g), std::invalid_argument);
    CHECK(ScanGrid{}.t_values().front() == doctest::Approx(0.01));
    CHECK(ScanGrid{}.t_values().back() == doctest::Approx(100.0));
}
