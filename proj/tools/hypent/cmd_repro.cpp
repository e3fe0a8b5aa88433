#include <cstdio>

#include "common.hpp"
#include "criteria.hpp"

namespace hypent::cli {

void add_repro_command(CLI::App& app, Globals& g) {
    auto* rp = app.add_subcommand("repro", "Run the acceptance criteria and print a summary table");
    auto only = std::make_shared<std::vector<int>>();
    rp->add_option("--only", *only, "Criterion ids (default: all)")->delimiter(',')->check(CLI::Range(1, 10));
    rp->callback([&g, only] {
        const auto ids = only->empty() ? acceptance::criterion_ids() : *only;
        json rows = json::array();
        std::vector<std::vector<std::string>> csv_rows;
        int failed = 0;
        const bool table = g.out.empty() && g.format.empty();
        if (table) std::printf("%-4s %-44s %-6s %9s %8s\n", "id", "criterion", "result", "seconds", "budget");
        for (int id : ids) {
            const auto r = acceptance::run_criterion(id, g.threads);
            if (!r.passed()) ++failed;
            if (table) {
                std::printf("%-4d %-44s %-6s %9.1f %8.0f\n", r.id, r.name.c_str(), r.passed() ? "PASS" : "FAIL",
                            r.seconds, r.budget_seconds);
                std::fflush(stdout);
            }
            rows.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed()}, {"numeric_pass", r.numeric_pass},
                            {"seconds", r.seconds}, {"budget_seconds", r.budget_seconds}, {"detail", r.detail}});
            csv_rows.push_back({std::to_string(r.id), r.name, r.passed() ? "PASS" : "FAIL", num(r.seconds),
                                num(r.budget_seconds)});
        }
        if (table) {
            std::printf("%zu criteria, %d failed\n", ids.size(), failed);
        } else {
            const json env = envelope("repro", {{"only", ids}, {"globals", globals_json(g)}},
                                      {{"per_criterion", "see detail"}}, {{"failed", failed}, {"criteria", rows}});
            if (resolve_format(g, "json") == "csv")
                emit(g, csv_document(env, {"id", "criterion", "result", "seconds", "budget"}, csv_rows));
            else
                emit(g, env.dump(2));
        }
        if (failed) g.exit_code = kCheckFailed;
    });
}

}  // namespace hypent::cli
