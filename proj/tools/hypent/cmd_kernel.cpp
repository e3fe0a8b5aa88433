#include <algorithm>
#include <cmath>

#include "common.hpp"
#include "hypent/convexity.hpp"
#include "hypent/heatkernel.hpp"

namespace hypent::cli {
namespace {

constexpr double kCheckTol = 1e-6;

json kernel_record(int n, double t, double rho, const KernelValue& k) {
    return {{"n", n},         {"t", t},   {"rho", rho}, {"value", k.value}, {"d1", k.d1},
            {"d2", k.d2},     {"method", to_string(k.method)}, {"log_value", k.log_value}};
}

std::vector<std::string> kernel_row(int n, double t, double rho, const KernelValue& k) {
    return {std::to_string(n), num(t), num(rho), num(k.value), num(k.d1), num(k.d2), to_string(k.method)};
}

const std::vector<std::string> kKernelHeader{"n", "t", "rho", "value", "d1", "d2", "method"};

json kernel_tolerances(int n) {
    json tol{{"max_rho", kMaxRho}};
    if (n % 2 == 0) tol["quadrature_rel_tol_floor"] = 1e-12;
    return tol;
}

// Five-point differences of log K_n in rho.
std::pair<double, double> fd_log(int n, double t, double rho) {
    const double h = 1e-3 * std::max(1.0, rho);
    double f[5];
    for (int i = 0; i < 5; ++i) f[i] = log_kernel(n, t, rho + (i - 2) * h);
    const double d1 = (f[0] - 8 * f[1] + 8 * f[3] - f[4]) / (12 * h);
    const double d2 = (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * h * h);
    return {d1, d2};
}

}  // namespace

void add_kernel_commands(CLI::App& app, Globals& g) {
    auto* kernel_cmd = app.add_subcommand("kernel", "Heat kernel evaluation")->require_subcommand(1);

    auto* eval = kernel_cmd->add_subcommand("eval", "Evaluate K_n(t, rho) with derivatives");
    auto q = std::make_shared<KernelQuery>();
    eval->add_option("--n", q->n, "Dimension")->required();
    eval->add_option("--t", q->t, "Time")->required();
    eval->add_option("--rho", q->rho, "Geodesic distance")->required();
    eval->callback([&g, q] {
        q->validate();
        const KernelValue k = kernel(*q);
        const json cfg{{"n", q->n}, {"t", q->t}, {"rho", q->rho}, {"globals", globals_json(g)}};
        const json env = envelope("kernel eval", cfg, kernel_tolerances(q->n), kernel_record(q->n, q->t, q->rho, k));
        if (resolve_format(g, "json") == "csv")
            emit(g, csv_document(env, kKernelHeader, {kernel_row(q->n, q->t, q->rho, k)}));
        else
            emit(g, env.dump(2));
    });

    auto* check = kernel_cmd->add_subcommand("check", "Positivity, monotonicity and derivative consistency on a grid");
    struct CheckArgs {
        int n = 3;
        int grid = 10;
        double t_min = 0.1, t_max = 10.0, rho_min = 0.1, rho_max = 10.0;
    };
    auto c = std::make_shared<CheckArgs>();
    check->add_option("--n", c->n, "Dimension")->required();
    check->add_option("--grid", c->grid, "Points per axis")->check(CLI::Range(2, 1000));
    check->add_option("--t-min", c->t_min, "Smallest time (log-spaced)");
    check->add_option("--t-max", c->t_max, "Largest time");
    check->add_option("--rho-min", c->rho_min, "Smallest distance (linear-spaced)");
    check->add_option("--rho-max", c->rho_max, "Largest distance");
    check->callback([&g, c] {
        if (c->n < 1) throw UsageError("--n must be >= 1");
        if (!(c->t_min > 0 && c->t_max > c->t_min && c->rho_min > 0 && c->rho_max > c->rho_min))
            throw UsageError("grid ranges must be positive and increasing");
        json records = json::array();
        std::vector<std::vector<std::string>> rows;
        double worst_d1 = 0, worst_d2 = 0;
        int failures = 0;
        for (int i = 0; i < c->grid; ++i) {
            const double t = c->t_min * std::pow(c->t_max / c->t_min, double(i) / (c->grid - 1));
            for (int j = 0; j < c->grid; ++j) {
                const double rho = c->rho_min + (c->rho_max - c->rho_min) * j / (c->grid - 1);
                const KernelValue k = kernel(c->n, t, rho);
                const auto [fd1, fd2] = fd_log(c->n, t, rho);
                const double e1 = std::abs(fd1 - k.dlog1) / std::max(1.0, std::abs(k.dlog1));
                const double e2 = std::abs(fd2 - k.dlog2) / std::max(1.0, std::abs(k.dlog2));
                worst_d1 = std::max(worst_d1, e1);
                worst_d2 = std::max(worst_d2, e2);
                const bool ok = std::isfinite(k.log_value) && k.dlog1 <= 0 && e1 <= kCheckTol && e2 <= kCheckTol;
                if (!ok) ++failures;
                json r = kernel_record(c->n, t, rho, k);
                r["ok"] = ok;
                records.push_back(r);
                auto row = kernel_row(c->n, t, rho, k);
                row.push_back(ok ? "1" : "0");
                rows.push_back(row);
            }
        }
        const json cfg{{"n", c->n},         {"grid", c->grid},       {"t_min", c->t_min},
                       {"t_max", c->t_max}, {"rho_min", c->rho_min}, {"rho_max", c->rho_max},
                       {"globals", globals_json(g)}};
        json tol = kernel_tolerances(c->n);
        tol["log_derivative_rel_tol"] = kCheckTol;
        tol["fd_step"] = "1e-3 max(1, rho), five-point";
        const json result{{"passed", failures == 0},
                          {"failures", failures},
                          {"max_rel_err_dlog1", worst_d1},
                          {"max_rel_err_dlog2", worst_d2},
                          {"records", records}};
        const json env = envelope("kernel check", cfg, tol, result);
        if (resolve_format(g, "json") == "csv") {
            auto header = kKernelHeader;
            header.push_back("ok");
            emit(g, csv_document(env, header, rows));
        } else {
            emit(g, env.dump(2));
        }
        if (failures) g.exit_code = kCheckFailed;
    });
}

void add_convexity_commands(CLI::App& app, Globals& g) {
    auto* conv = app.add_subcommand("convexity", "Convexity gap of log K_n")->require_subcommand(1);

    auto* sc = conv->add_subcommand("scan", "Scan the gap over a (t, rho) grid");
    struct ScanArgs {
        int n = 3;
        ScanGrid grid;
    };
    auto a = std::make_shared<ScanArgs>();
    sc->add_option("--n", a->n, "Dimension")->required();
    sc->add_option("--t-min", a->grid.t_min, "Smallest time (log-spaced)");
    sc->add_option("--t-max", a->grid.t_max, "Largest time");
    sc->add_option("--t-count", a->grid.t_count, "Time samples");
    sc->add_option("--rho-min", a->grid.rho_min, "Smallest distance (linear-spaced)");
    sc->add_option("--rho-max", a->grid.rho_max, "Largest distance");
    sc->add_option("--rho-count", a->grid.rho_count, "Distance samples");
    sc->callback([&g, a] {
        if (a->n < 1) throw UsageError("--n must be >= 1");
        a->grid.validate();
        const ScanReport r = scan(a->n, a->grid, g.threads);
        const json cfg{{"n", a->n},
                       {"grid",
                        {{"t_min", a->grid.t_min}, {"t_max", a->grid.t_max}, {"t_count", a->grid.t_count},
                         {"rho_min", a->grid.rho_min}, {"rho_max", a->grid.rho_max}, {"rho_count", a->grid.rho_count}}},
                       {"globals", globals_json(g)}};
        const json tol{{"violation_tolerance", r.tolerance}, {"asserted", r.asserted}};
        if (resolve_format(g, "csv") == "csv") {
            emit(g, "# command: convexity scan\n# config: " + cfg.dump() + "\n# tolerances: " + tol.dump() + "\n" +
                        scan_report_csv(r));
        } else {
            emit(g, envelope("convexity scan", cfg, tol, json::parse(scan_report_json(r))).dump(2));
        }
        if (!r.passed()) g.exit_code = kCheckFailed;
    });

    auto* lem = conv->add_subcommand("lemmas", "Series lemmas behind the n = 3 convexity proof");
    auto points = std::make_shared<int>(1000);
    lem->add_option("--points", *points, "Grid points on [0.01, 10]")->check(CLI::Range(2, 1000000));
    lem->callback([&g, points] {
        std::vector<double> grid;
        for (int i = 0; i < *points; ++i) grid.push_back(0.01 + (10.0 - 0.01) * i / (*points - 1));
        const LemmaReport r = series_lemmas_check(grid);
        const json result{{"passed", r.passed},
                          {"points_checked", r.points_checked},
                          {"coefficients_checked", r.coefficients_checked},
                          {"min_coth_defect", r.min_coth_defect},
                          {"min_g", r.min_g},
                          {"failures", r.failures}};
        const json env = envelope("convexity lemmas",
                                  {{"points", *points}, {"rho_min", 0.01}, {"rho_max", 10.0}, {"globals", globals_json(g)}},
                                  {{"sign_tolerance", 0.0}, {"series_direct_rel_tol", 1e-10}}, result);
        if (resolve_format(g, "json") == "csv")
            emit(g, csv_document(env, {"passed", "points_checked", "coefficients_checked", "min_coth_defect", "min_g"},
                                 {{r.passed ? "1" : "0", std::to_string(r.points_checked),
                                   std::to_string(r.coefficients_checked), num(r.min_coth_defect), num(r.min_g)}}));
        else
            emit(g, env.dump(2));
        if (!r.passed) g.exit_code = kCheckFailed;
    });
}

}  // namespace hypent::cli
