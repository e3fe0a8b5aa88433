#include <algorithm>

#include "common.hpp"
#include "hypent/flow.hpp"
#include "hypent/io.hpp"

namespace hypent::cli {
namespace {

constexpr double kSlopeTol = 1e-4;

std::vector<FlowState> load_trajectory(const std::string& path) {
    const std::string text = read_text(path);
    try {
        return parse_trajectory(text);
    } catch (const SchemaError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

int trajectory_dim(const std::vector<FlowState>& traj) {
    return std::visit([](const auto& s) { return s.ambient_dim(); }, traj.front().shape);
}

bool is_sphere_flow(const std::vector<FlowState>& traj) {
    return std::holds_alternative<GeodesicSphere>(traj.front().shape);
}

struct ProbeArgs {
    std::string traj;
    double t0 = 0.0;
    std::vector<double> p0;
    double tol = -1.0;
};

void add_probe_options(CLI::App* cmd, ProbeArgs& a) {
    cmd->add_option("--traj", a.traj, "Trajectory JSON")->required();
    cmd->add_option("--t0", a.t0, "Probe time, after every frame")->required();
    cmd->add_option("--p0", a.p0, "Probe point (comma separated; default origin)")->delimiter(',');
}

json probe_config(const ProbeArgs& a, const BallPoint& p0, const Globals& g) {
    return {{"traj", a.traj}, {"t0", a.t0}, {"p0", vec_json(p0.coords())}, {"globals", globals_json(g)}};
}

}  // namespace

void add_flow_commands(CLI::App& app, Globals& g) {
    auto* flow = app.add_subcommand("flow", "Mean curvature flow and the monotone functional")->require_subcommand(1);

    auto* run = flow->add_subcommand("run", "Evolve a curve (polyline) or a geodesic sphere (exact)");
    struct RunArgs {
        std::string in;
        CurveFlowControls ctl;
        int frames = 100;
    };
    auto r = std::make_shared<RunArgs>();
    run->add_option("--in", r->in, "Submanifold JSON (curve or sphere)")->required();
    run->add_option("--t-end", r->ctl.t_end, "Final time")->required();
    run->add_option("--cfl", r->ctl.cfl, "Step bound dt <= cfl h^2");
    run->add_option("--resample-every", r->ctl.resample_every, "Steps between resamplings (0: never)");
    run->add_option("--min-length", r->ctl.min_length, "Stop once the length drops below this");
    run->add_option("--record-interval", r->ctl.record_interval, "Time between frames (default t-end/frames)");
    run->add_option("--frames", r->frames, "Frames when no record interval is given")->check(CLI::Range(1, 1000000));
    run->callback([&g, r] {
        const Submanifold s = load_submanifold(r->in);
        std::vector<FlowState> traj;
        json cfg{{"in", r->in}, {"t_end", r->ctl.t_end}, {"globals", globals_json(g)}};
        json tol = json::object();
        if (const auto* sph = std::get_if<GeodesicSphere>(&s)) {
            std::vector<double> times;
            for (int i = 0; i <= r->frames; ++i) times.push_back(r->ctl.t_end * i / r->frames);
            traj = run_sphere(*sph, times);
            cfg["frames"] = r->frames;
            cfg["method"] = "exact";
        } else if (const auto* c = std::get_if<DiscreteCurve>(&s)) {
            if (r->ctl.record_interval <= 0.0) r->ctl.record_interval = r->ctl.t_end / r->frames;
            traj = run_curve(*c, r->ctl);
            cfg["cfl"] = r->ctl.cfl;
            cfg["resample_every"] = r->ctl.resample_every;
            cfg["min_length"] = r->ctl.min_length;
            cfg["record_interval"] = r->ctl.record_interval;
            cfg["max_rejections"] = r->ctl.max_rejections;
            cfg["method"] = "polyline rk4";
            tol["cfl"] = r->ctl.cfl;
        } else {
            throw UsageError("flow run: input must be a curve or a geodesic sphere");
        }
        if (resolve_format(g, "json") == "csv") {
            std::vector<std::vector<std::string>> rows;
            for (const auto& st : traj) {
                double size = 0.0;
                if (const auto* c = std::get_if<DiscreteCurve>(&st.shape)) size = c->length();
                if (const auto* sph = std::get_if<GeodesicSphere>(&st.shape)) size = sph->radius;
                rows.push_back({num(st.time), num(size), num(st.dt)});
            }
            emit(g, csv_document(envelope("flow run", cfg, tol, nullptr),
                                 {"time", is_sphere_flow(traj) ? "radius" : "length", "dt"}, rows));
        } else {
            emit(g, trajectory_to_json(traj, 1));
        }
    });

    auto* probe = flow->add_subcommand("probe", "Monotone functional F(t) along a trajectory");
    auto pa = std::make_shared<ProbeArgs>();
    add_probe_options(probe, *pa);
    probe->callback([&g, pa] {
        const auto traj = load_trajectory(pa->traj);
        const BallPoint p0 = point_arg(pa->p0, trajectory_dim(traj), "--p0");
        const auto rec = monotonicity_probe(traj, pa->t0, p0);
        const auto slopes = rec.slopes();
        const double max_slope = slopes.empty() ? 0.0 : *std::max_element(slopes.begin(), slopes.end());
        json result{{"monotone", max_slope <= kSlopeTol},
                    {"max_slope", max_slope},
                    {"times", rec.times},
                    {"F", rec.F_values},
                    {"Q", rec.Q_integrals},
                    {"defect", rec.defect_integrals},
                    {"slopes", slopes}};
        const json env = envelope("flow probe", probe_config(*pa, p0, g), {{"slope_tol", kSlopeTol}, {"min_tau", 1e-6}},
                                  result);
        if (resolve_format(g, "csv") == "csv") {
            std::vector<std::vector<std::string>> rows;
            for (std::size_t i = 0; i < rec.times.size(); ++i)
                rows.push_back({num(rec.times[i]), num(rec.F_values[i]), num(rec.Q_integrals[i]),
                                num(rec.defect_integrals[i]), i < slopes.size() ? num(slopes[i]) : ""});
            emit(g, csv_document(env, {"time", "F", "Q", "defect", "slope"}, rows));
        } else {
            emit(g, env.dump(2));
        }
    });

    auto* idc = flow->add_subcommand("identity-check", "Compare dF/dt with the drop terms interval by interval");
    auto ia = std::make_shared<ProbeArgs>();
    add_probe_options(idc, *ia);
    idc->add_option("--tol", ia->tol, "Relative tolerance (default 1e-3 for spheres, 5e-2 for polylines)");
    idc->callback([&g, ia] {
        const auto traj = load_trajectory(ia->traj);
        const BallPoint p0 = point_arg(ia->p0, trajectory_dim(traj), "--p0");
        const double tol = ia->tol > 0 ? ia->tol : (is_sphere_flow(traj) ? 1e-3 : 5e-2);
        const auto rec = monotonicity_probe(traj, ia->t0, p0);
        const auto chk = monotonicity_identity_check(rec);
        const auto slopes = rec.slopes();
        const double max_slope = slopes.empty() ? 0.0 : *std::max_element(slopes.begin(), slopes.end());
        const bool passed = chk.relative() <= tol && max_slope <= kSlopeTol;
        json cfg = probe_config(*ia, p0, g);
        const json result{{"passed", passed},
                          {"relative_residual", chk.relative()},
                          {"max_residual", chk.max_residual},
                          {"scale", chk.scale},
                          {"max_slope", max_slope},
                          {"residuals", chk.residuals}};
        const json env = envelope("flow identity-check", cfg, {{"identity_rel_tol", tol}, {"slope_tol", kSlopeTol}}, result);
        if (resolve_format(g, "json") == "csv") {
            std::vector<std::vector<std::string>> rows;
            for (std::size_t i = 0; i < chk.residuals.size(); ++i)
                rows.push_back({num(rec.times[i]), num(rec.times[i + 1]), num(chk.residuals[i]), num(slopes[i])});
            emit(g, csv_document(env, {"t_start", "t_end", "residual", "slope"}, rows));
        } else {
            emit(g, env.dump(2));
        }
        if (!passed) g.exit_code = kCheckFailed;
    });
}

}  // namespace hypent::cli
