#include "hypent/convexity.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "hypent/parallel.hpp"
#include "hypent/special.hpp"

namespace hypent {

void ScanGrid::validate() const {
    if (!(t_min > 0.0) || !(t_max >= t_min) || t_count < 1)
        throw std::invalid_argument("ScanGrid: need 0 < t_min <= t_max and t_count >= 1");
    if (!(rho_min > 0.0) || !(rho_max >= rho_min) || rho_count < 1)
        throw std::invalid_argument("ScanGrid: need 0 < rho_min <= rho_max and rho_count >= 1");
}

std::vector<double> ScanGrid::t_values() const {
    std::vector<double> v(static_cast<std::size_t>(t_count));
    const double a = std::log(t_min), b = std::log(t_max);
    for (int i = 0; i < t_count; ++i)
        v[static_cast<std::size_t>(i)] =
            t_count == 1 ? t_min : std::exp(a + (b - a) * i / (t_count - 1.0));
    return v;
}

std::vector<double> ScanGrid::rho_values() const {
    std::vector<double> v(static_cast<std::size_t>(rho_count));
    for (int i = 0; i < rho_count; ++i)
        v[static_cast<std::size_t>(i)] =
            rho_count == 1 ? rho_min : rho_min + (rho_max - rho_min) * i / (rho_count - 1.0);
    return v;
}

double gap(int n, double t, double rho) {
    if (!(rho > 0.0)) throw std::domain_error("gap: rho must be > 0");
    const KernelValue k = kernel(n, t, rho);
    const double s = std::sinh(rho);
    return s * s * k.ylog2;
}

double gap3_closed(double t, double rho) {
    if (!(t > 0.0) || !(rho > 0.0)) throw std::domain_error("gap3_closed: t, rho must be > 0");
    return coth_defect(rho) / (2.0 * t) + g_over_sinh2(rho);
}

double violation_tolerance(int n) { return n % 2 == 1 ? 1e-7 : 1e-6; }

ScanReport scan(int n, const ScanGrid& grid, int threads) {
    grid.validate();
    if (n < 1) throw std::invalid_argument("scan: n must be >= 1");
    ScanReport r;
    r.n = n;
    r.grid = grid;
    r.tolerance = violation_tolerance(n);
    r.asserted = n <= 3;

    const auto ts = grid.t_values();
    const auto rhos = grid.rho_values();
    r.samples.resize(ts.size() * rhos.size());
    const auto method = (n % 2 == 1) ? KernelMethod::ClosedOdd : KernelMethod::QuadratureEven;
    parallel_for(r.samples.size(), threads, [&](std::size_t idx) {
        GapSample& s = r.samples[idx];
        s.n = n;
        s.t = ts[idx / rhos.size()];
        s.rho = rhos[idx % rhos.size()];
        s.method = method;
        try {
            s.gap = gap(n, s.t, s.rho);
            if (!std::isfinite(s.gap)) s.error = "non-finite gap";
        } catch (const std::exception& e) {
            s.gap = std::numeric_limits<double>::quiet_NaN();
            s.error = e.what();
        }
    });

    r.min_gap = std::numeric_limits<double>::infinity();
    for (const auto& s : r.samples) {
        if (!s.error.empty()) {
            ++r.failures;
            continue;
        }
        if (s.gap < r.min_gap) {
            r.min_gap = s.gap;
            r.argmin_t = s.t;
            r.argmin_rho = s.rho;
        }
        if (s.gap < -r.tolerance) r.violations.push_back(s);
    }
    return r;
}

LemmaReport series_lemmas_check(const std::vector<double>& rho_grid) {
    LemmaReport rep;
    rep.min_coth_defect = std::numeric_limits<double>::infinity();
    rep.min_g = std::numeric_limits<double>::infinity();
    for (double rho : rho_grid) {
        if (!(rho > 0.0)) {
            rep.passed = false;
            rep.failures.push_back("non-positive grid point " + std::to_string(rho));
            continue;
        }
        ++rep.points_checked;
        const double cd = coth_defect(rho);
        rep.min_coth_defect = std::min(rep.min_coth_defect, cd);
        if (cd < 0.0) {
            rep.passed = false;
            rep.failures.push_back("rho coth rho - 1 < 0 at rho = " + std::to_string(rho));
        }
        const double g = g_function(rho);
        rep.min_g = std::min(rep.min_g, g);
        if (g < 0.0) {
            rep.passed = false;
            rep.failures.push_back("g(rho) < 0 at rho = " + std::to_string(rho));
        }
        if (rho >= 0.1 && rho <= 20.0) {
            const double s = std::sinh(rho), c = std::cosh(rho);
            const double direct = 1.0 + c * c - s * s / (rho * rho) - c * s / rho;
            if (std::abs(direct - g) > 1e-10 * std::max(1.0, c * c)) {
                rep.passed = false;
                rep.failures.push_back("series and direct g disagree at rho = " +
                                       std::to_string(rho));
            }
        }
    }
    for (int l = 1; l <= 50; ++l) {
        ++rep.coefficients_checked;
        if (8 * l * l + 4 * l - 12 < 0) {
            rep.passed = false;
            rep.failures.push_back("negative series coefficient at l = " + std::to_string(l));
        }
    }
    return rep;
}

namespace {

nlohmann::json sample_json(const GapSample& s) {
    nlohmann::json j{{"n", s.n}, {"t", s.t}, {"rho", s.rho}, {"method", to_string(s.method)}};
    if (s.error.empty())
        j["gap"] = s.gap;
    else
        j["error"] = s.error;
    return j;
}

}  // namespace

std::string scan_report_json(const ScanReport& r) {
    nlohmann::json j;
    j["n"] = r.n;
    j["grid"] = {{"t_min", r.grid.t_min},     {"t_max", r.grid.t_max},
                 {"t_count", r.grid.t_count}, {"t_spacing", "log"},
                 {"rho_min", r.grid.rho_min}, {"rho_max", r.grid.rho_max},
                 {"rho_count", r.grid.rho_count}, {"rho_spacing", "linear"}};
    j["tolerance"] = r.tolerance;
    j["asserted"] = r.asserted;
    j["min_gap"] = r.min_gap;
    j["argmin"] = {{"t", r.argmin_t}, {"rho", r.argmin_rho}};
    j["failures"] = r.failures;
    j["violations"] = nlohmann::json::array();
    for (const auto& s : r.violations) j["violations"].push_back(sample_json(s));
    j["passed"] = r.passed();
    return j.dump(2);
}

std::string scan_report_csv(const ScanReport& r) {
    std::ostringstream os;
    os.precision(17);
    os << "n,t,rho,gap,method,error\n";
    for (const auto& s : r.samples)
        os << s.n << ',' << s.t << ',' << s.rho << ',' << s.gap << ',' << to_string(s.method)
           << ',' << s.error << '\n';
    return os.str();
}

}  // namespace hypent
