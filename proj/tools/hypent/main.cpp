#include <cstdio>
#include <exception>

#include "common.hpp"
#include "hypent/io.hpp"

using namespace hypent::cli;

int main(int argc, char** argv) {
    CLI::App app{"Heat kernels, entropy and monotonicity on hyperbolic space"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--seed", g.seed, "Seed for multi-start jitter");
    app.add_option("--threads", g.threads, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
    app.add_option("--out", g.out, "Output file (relative paths go to $HYPENT_OUTPUT_DIR)");

    add_kernel_commands(app, g);
    add_convexity_commands(app, g);
    add_geometry_commands(app, g);
    add_flow_commands(app, g);
    add_repro_command(app, g);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    } catch (const hypent::FileError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kFileError;
    } catch (const hypent::SchemaError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kDataError;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n%s", e.what(), app.help().c_str());
        return kUsage;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kRuntimeFailure;
    }
    return g.exit_code;
}
