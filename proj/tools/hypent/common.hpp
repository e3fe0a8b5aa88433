#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hypent/hypgeo.hpp"
#include "hypent/manifolds.hpp"

namespace hypent::cli {

using json = nlohmann::ordered_json;

enum ExitCode : int {
    kOk = 0,
    kRuntimeFailure = 1,
    kCheckFailed = 2,
    kUsage = 64,
    kDataError = 65,
    kFileError = 66,
};

/// Semantically invalid command-line values.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Globals {
    std::string format;  ///< empty: per-command default or the --out extension
    std::uint64_t seed = 0;
    int threads = 0;
    std::string out;
    int exit_code = kOk;
};

/// Relative paths land in $HYPENT_OUTPUT_DIR when it is set.
std::string resolve_output(const std::string& path);

/// "json" or "csv".
std::string resolve_format(const Globals& g, const std::string& fallback);

/// Writes to --out or stdout.
void emit(const Globals& g, const std::string& text);

json globals_json(const Globals& g);

/// {"command", "config", "tolerances", "result"}.
json envelope(const std::string& command, json config, json tolerances, json result);

/// Comment header carrying config and tolerances, then the rows.
std::string csv_document(const json& env, const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows);

std::string num(double x);
json vec_json(const Vec& v);

/// Empty coordinates give the origin.
BallPoint point_arg(const std::vector<double>& coords, int dim, const char* name);

/// Reads a submanifold file; content errors become SchemaError.
Submanifold load_submanifold(const std::string& path);

void add_kernel_commands(CLI::App& app, Globals& g);
void add_convexity_commands(CLI::App& app, Globals& g);
void add_geometry_commands(CLI::App& app, Globals& g);
void add_flow_commands(CLI::App& app, Globals& g);
void add_repro_command(CLI::App& app, Globals& g);

}  // namespace hypent::cli
