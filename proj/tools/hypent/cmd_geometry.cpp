#include <algorithm>
#include <cmath>
#include <limits>

#include "common.hpp"
#include "hypent/boundary.hpp"
#include "hypent/flow.hpp"
#include "hypent/functional.hpp"
#include "hypent/io.hpp"

namespace hypent::cli {
namespace {

json entropy_config_json(const EntropyConfig& c) {
    return {{"starts", c.starts},       {"tau_min", c.tau_min},           {"tau_max", c.tau_max},
            {"tau_grid", c.tau_grid},   {"vertex_seeds", c.vertex_seeds}, {"radius_margin", c.radius_margin},
            {"max_evals", c.max_evals}, {"seed", c.seed},                 {"threads", c.threads}};
}

json functional_tolerances(const FunctionalOptions& o) {
    return {{"quadrature_rel_tol", o.rel_tol},
            {"mesh_refine_levels", o.volume.refine_levels},
            {"angular_nodes", o.volume.angular_nodes},
            {"radial_nodes", o.volume.radial_nodes}};
}

json conformal_config_json(const ConformalVolumeConfig& c) {
    return {{"starts", c.starts}, {"cap", c.cap}, {"max_evals", c.max_evals}, {"seed", c.seed}, {"threads", c.threads}};
}

json entropy_result_json(const EntropyResult& r, bool with_trace) {
    json out{{"value", r.value},
             {"argmax_p0", vec_json(r.argmax_p0.coords())},
             {"argmax_tau", r.argmax_tau},
             {"status", to_string(r.status)},
             {"evaluations", r.evaluations},
             {"search_center", vec_json(r.search_center.coords())},
             {"search_radius", r.search_radius},
             {"warnings", r.warnings}};
    if (with_trace) {
        json tr = json::array();
        for (const auto& e : r.trace)
            tr.push_back({{"p0", vec_json(e.p0)}, {"tau", e.tau}, {"value", e.value}, {"start", e.start}});
        out["trace"] = tr;
    }
    return out;
}

json conformal_result_json(const ConformalVolumeResult& r) {
    return {{"value", r.value},
            {"argmax_translation", vec_json(r.argmax_translation)},
            {"status", to_string(r.status)},
            {"identity_value", r.identity_value},
            {"evaluations", r.evaluations}};
}

void emit_single(const Globals& g, const json& env, const json& flat) {
    if (resolve_format(g, "json") == "csv") {
        std::vector<std::string> header, row;
        for (const auto& [k, v] : flat.items()) {
            header.push_back(k);
            if (v.is_number())
                row.push_back(num(v.get<double>()));
            else if (v.is_string())
                row.push_back(v.get<std::string>());
            else
                row.push_back(v.is_array() ? "\"" + v.dump() + "\"" : v.dump());
        }
        emit(g, csv_document(env, header, {row}));
    } else {
        emit(g, env.dump(2));
    }
}

json manifold_info(const Submanifold& s) {
    json info{{"kind", kind_name(s)}, {"ambient_dim", ambient_dim(s)}, {"submanifold_dim", submanifold_dim(s)}};
    json diag = json::array();
    if (const auto* c = std::get_if<DiscreteCurve>(&s)) {
        info["vertices"] = c->vertices().size();
        info["closed"] = c->closed();
        info["min_edge"] = c->min_edge();
        info["max_edge"] = c->max_edge();
        std::vector<std::string> warnings;
        if (c->vertices().size() >= 3) {
            hyperbolic_curvature(*c, &warnings);
            const auto k = curvature_norms(*c);
            info["max_curvature"] = *std::max_element(k.begin(), k.end());
        }
        for (auto& w : warnings) diag.push_back(w);
    } else if (const auto* m = std::get_if<TriMeshSurface>(&s)) {
        info["vertices"] = m->vertices().size();
        info["triangles"] = m->triangles().size();
    } else if (const auto* sph = std::get_if<GeodesicSphere>(&s)) {
        info["center"] = vec_json(sph->center.coords());
        info["radius"] = sph->radius;
    } else if (const auto* d = std::get_if<GeodesicDisk>(&s)) {
        info["base"] = vec_json(d->base.coords());
        info["truncation"] = d->truncated() ? json(d->truncation) : json(nullptr);
    }
    double outer = 0.0;
    if (const auto* c = std::get_if<DiscreteCurve>(&s))
        for (const auto& p : c->vertices()) outer = std::max(outer, p.coords().norm());
    if (const auto* m = std::get_if<TriMeshSurface>(&s))
        for (const auto& p : m->vertices()) outer = std::max(outer, p.coords().norm());
    if (outer > 0.0) info["max_euclidean_norm"] = outer;

    if (const auto* d = std::get_if<GeodesicDisk>(&s); d && !d->truncated()) {
        info["volume"] = nullptr;
        diag.push_back("untruncated disk: infinite volume");
    } else if (const auto* sph = std::get_if<GeodesicSphere>(&s)) {
        info["volume"] = sph->volume();
    } else {
        try {
            info["volume"] = total_volume(s);
        } catch (const std::invalid_argument& e) {
            info["volume"] = nullptr;
            diag.push_back(e.what());
        }
    }
    info["diagnostics"] = diag;
    return info;
}

}  // namespace

void add_geometry_commands(CLI::App& app, Globals& g) {
    auto* man = app.add_subcommand("manifold", "Submanifold inspection")->require_subcommand(1);
    auto* info = man->add_subcommand("info", "Volume and diagnostics");
    auto info_in = std::make_shared<std::string>();
    info->add_option("--in", *info_in, "Submanifold JSON")->required();
    info->callback([&g, info_in] {
        const Submanifold s = load_submanifold(*info_in);
        const json result = manifold_info(s);
        const json env = envelope("manifold info", {{"in", *info_in}, {"globals", globals_json(g)}},
                                  functional_tolerances({}), result);
        json flat{{"kind", result["kind"]}, {"ambient_dim", result["ambient_dim"]},
                  {"submanifold_dim", result["submanifold_dim"]}, {"volume", result["volume"]}};
        emit_single(g, env, flat);
    });

    auto* ent = app.add_subcommand("entropy", "Hyperbolic entropy")->require_subcommand(1);
    auto* comp = ent->add_subcommand("compute", "sup of F over base points and scales, or F at a given point");
    struct EntropyArgs {
        std::string in;
        std::vector<double> p0;
        double tau = 0.0;
        bool trace = false;
        EntropyConfig cfg;
    };
    auto ea = std::make_shared<EntropyArgs>();
    comp->add_option("--in", ea->in, "Submanifold JSON")->required();
    comp->add_option("--p0", ea->p0, "Fix the base point (comma separated)")->delimiter(',');
    comp->add_option("--tau", ea->tau, "Fix the scale (requires --p0)");
    comp->add_option("--starts", ea->cfg.starts, "Multi-start count");
    comp->add_option("--tau-min", ea->cfg.tau_min, "Smallest scale searched");
    comp->add_option("--tau-max", ea->cfg.tau_max, "Largest scale searched");
    comp->add_option("--max-evals", ea->cfg.max_evals, "Evaluations per start");
    comp->add_flag("--trace", ea->trace, "Include the search trace");
    comp->callback([&g, ea] {
        const Submanifold s = load_submanifold(ea->in);
        ea->cfg.seed = g.seed;
        ea->cfg.threads = g.threads;
        if (!(ea->cfg.tau_min > 0 && ea->cfg.tau_max > ea->cfg.tau_min))
            throw UsageError("--tau-min/--tau-max must be positive and increasing");
        json cfg{{"in", ea->in}, {"globals", globals_json(g)}};
        const json tol = functional_tolerances(ea->cfg.functional);
        if (ea->tau != 0.0 && ea->p0.empty()) throw UsageError("--tau requires --p0");
        if (!ea->p0.empty()) {
            const BallPoint p0 = point_arg(ea->p0, ambient_dim(s), "--p0");
            const FFunctional F(s, ea->cfg.functional);
            cfg["p0"] = vec_json(p0.coords());
            json result;
            if (ea->tau != 0.0) {
                if (!(ea->tau > 0)) throw UsageError("--tau must be > 0");
                cfg["tau"] = ea->tau;
                result = {{"value", F(p0, ea->tau)}, {"p0", vec_json(p0.coords())}, {"tau", ea->tau}};
            } else {
                constexpr int kGrid = 161;
                cfg["tau_min"] = ea->cfg.tau_min;
                cfg["tau_max"] = ea->cfg.tau_max;
                cfg["tau_grid"] = kGrid;
                double best = -std::numeric_limits<double>::infinity(), best_tau = 0;
                for (int i = 0; i < kGrid; ++i) {
                    const double tau = ea->cfg.tau_min * std::pow(ea->cfg.tau_max / ea->cfg.tau_min, double(i) / (kGrid - 1));
                    const double v = F(p0, tau);
                    if (v > best) best = v, best_tau = tau;
                }
                result = {{"value", best}, {"p0", vec_json(p0.coords())}, {"tau", best_tau}, {"method", "log grid"}};
            }
            emit_single(g, envelope("entropy compute", cfg, tol, result), result);
            return;
        }
        cfg["search"] = entropy_config_json(ea->cfg);
        const EntropyResult r = entropy(s, ea->cfg);
        const json result = entropy_result_json(r, ea->trace);
        emit_single(g, envelope("entropy compute", cfg, tol, result),
                    {{"value", r.value}, {"argmax_tau", r.argmax_tau}, {"status", to_string(r.status)},
                     {"evaluations", r.evaluations}});
    });

    auto* cv = app.add_subcommand("confvol", "Conformal volume of an ideal-boundary curve");
    struct ConfArgs {
        std::string in;
        ConformalVolumeConfig cfg;
    };
    auto ca = std::make_shared<ConfArgs>();
    cv->add_option("--in", ca->in, "Boundary JSON")->required();
    cv->add_option("--starts", ca->cfg.starts, "Multi-start count");
    cv->add_option("--cap", ca->cfg.cap, "Bound on |a| for Mobius translations")->check(CLI::Range(0.0, 1.0));
    cv->add_option("--max-evals", ca->cfg.max_evals, "Evaluations per start");
    cv->callback([&g, ca] {
        const std::string text = read_text(ca->in);
        BoundaryCurve curve = [&] {
            try {
                return parse_boundary(text);
            } catch (const SchemaError&) {
                throw;
            } catch (const std::invalid_argument& e) {
                throw SchemaError(ca->in + ": " + e.what());
            }
        }();
        ca->cfg.seed = g.seed;
        ca->cfg.threads = g.threads;
        const auto r = conformal_volume(curve, ca->cfg);
        json result = conformal_result_json(r);
        result["ratio"] = r.value / (2 * std::numbers::pi);
        const json env = envelope("confvol", {{"in", ca->in}, {"search", conformal_config_json(ca->cfg)}, {"globals", globals_json(g)}},
                                  {{"boundary_status_fraction", 0.99}}, result);
        emit_single(g, env, {{"value", r.value}, {"status", to_string(r.status)}, {"identity_value", r.identity_value}});
    });

    auto* bl = app.add_subcommand("boundary-limit", "Slice volume over sinh^{n-1}(r) as r grows");
    struct LimitArgs {
        std::string in;
        std::vector<double> p0;
        std::vector<double> radii{4, 5, 6, 7, 8};
    };
    auto la = std::make_shared<LimitArgs>();
    bl->add_option("--in", la->in, "Submanifold JSON (disk or mesh)")->required();
    bl->add_option("--p0", la->p0, "Base point (comma separated; default origin)")->delimiter(',');
    bl->add_option("--r", la->radii, "Radii (comma separated)")->delimiter(',');
    bl->callback([&g, la] {
        const Submanifold s = load_submanifold(la->in);
        const BallPoint p0 = point_arg(la->p0, ambient_dim(s), "--p0");
        const auto r = boundary_limit(s, p0, la->radii);
        const json cfg{{"in", la->in}, {"p0", vec_json(p0.coords())}, {"r", la->radii}, {"globals", globals_json(g)}};
        const json env = envelope("boundary-limit", cfg, {{"extrapolation", "e^{-2r}"}},
                                  {{"radii", r.radii}, {"ratios", r.ratios}, {"limit", r.limit}, {"warnings", r.warnings}});
        if (resolve_format(g, "json") == "csv") {
            std::vector<std::vector<std::string>> rows;
            for (std::size_t i = 0; i < r.radii.size(); ++i) rows.push_back({num(r.radii[i]), num(r.ratios[i])});
            rows.push_back({"inf", num(r.limit)});
            emit(g, csv_document(env, {"r", "ratio"}, rows));
        } else {
            emit(g, env.dump(2));
        }
    });

    auto* cmp = app.add_subcommand("compare", "Entropy against conformal volume for a geodesic disk");
    struct CompareArgs {
        std::string in;
        ComparisonConfig cfg;
    };
    auto cpa = std::make_shared<CompareArgs>();
    cmp->add_option("--in", cpa->in, "Disk JSON")->required();
    cmp->add_option("--truncation", cpa->cfg.truncation, "Disk truncation for the entropy search");
    cmp->add_option("--boundary-samples", cpa->cfg.boundary_samples, "Samples of the ideal boundary");
    cmp->add_option("--starts", cpa->cfg.entropy.starts, "Entropy multi-start count");
    cmp->add_option("--max-evals", cpa->cfg.entropy.max_evals, "Entropy evaluations per start");
    cmp->callback([&g, cpa] {
        const Submanifold s = load_submanifold(cpa->in);
        const auto* d = std::get_if<GeodesicDisk>(&s);
        if (!d) throw UsageError("compare: input must be a geodesic disk");
        cpa->cfg.entropy.seed = cpa->cfg.conformal.seed = g.seed;
        cpa->cfg.entropy.threads = cpa->cfg.conformal.threads = g.threads;
        const auto r = entropy_vs_conformal(*d, cpa->cfg);
        const json cfg{{"in", cpa->in},
                       {"truncation", cpa->cfg.truncation},
                       {"boundary_samples", cpa->cfg.boundary_samples},
                       {"entropy", entropy_config_json(cpa->cfg.entropy)},
                       {"conformal", conformal_config_json(cpa->cfg.conformal)},
                       {"globals", globals_json(g)}};
        json tol = functional_tolerances(cpa->cfg.entropy.functional);
        tol["inequality_slack"] = 0.01;
        const json result{{"entropy", r.entropy},
                          {"entropy_tail", r.entropy_tail},
                          {"conformal_ratio", r.conformal_ratio},
                          {"difference", r.difference},
                          {"inequality_holds", r.inequality_holds},
                          {"entropy_result", entropy_result_json(r.entropy_result, false)},
                          {"conformal_result", conformal_result_json(r.conformal_result)},
                          {"warnings", r.warnings}};
        emit_single(g, envelope("compare", cfg, tol, result),
                    {{"entropy", r.entropy}, {"conformal_ratio", r.conformal_ratio}, {"difference", r.difference},
                     {"inequality_holds", r.inequality_holds}});
        if (!r.inequality_holds) g.exit_code = kCheckFailed;
    });
}

}  // namespace hypent::cli
