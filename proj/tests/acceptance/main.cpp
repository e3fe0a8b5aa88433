#include <cstdio>
#include <vector>

#include <CLI11.hpp>

#include "criteria.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::vector<int> only;
    int threads = 0;
    app.add_option("--only", only, "Criterion ids to run (default: all)")->check(CLI::Range(1, 10));
    app.add_option("--threads", threads, "Worker threads (0: all cores)");
    CLI11_PARSE(app, argc, argv);
    if (only.empty()) only = hypent::acceptance::criterion_ids();

    int failed = 0;
    for (int id : only) {
        const auto r = hypent::acceptance::run_criterion(id, threads);
        std::printf("%s\n", hypent::acceptance::format_line(r).c_str());
        std::fflush(stdout);
        if (!r.passed()) ++failed;
    }
    std::printf("%zu criteria, %d failed\n", only.size(), failed);
    return failed == 0 ? 0 : 1;
}
