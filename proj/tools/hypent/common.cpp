#include "common.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "hypent/io.hpp"

namespace hypent::cli {

std::string resolve_output(const std::string& path) {
    const std::filesystem::path p(path);
    const char* dir = std::getenv("HYPENT_OUTPUT_DIR");
    if (p.is_absolute() || !dir || !*dir) return path;
    return (std::filesystem::path(dir) / p).string();
}

std::string resolve_format(const Globals& g, const std::string& fallback) {
    if (!g.format.empty()) return g.format;
    const std::string ext = std::filesystem::path(g.out).extension().string();
    if (ext == ".json") return "json";
    if (ext == ".csv") return "csv";
    return fallback;
}

void emit(const Globals& g, const std::string& text) {
    if (g.out.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        if (text.empty() || text.back() != '\n') std::fputc('\n', stdout);
        return;
    }
    const std::filesystem::path path(resolve_output(g.out));
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    write_text(path.string(), text.back() == '\n' ? text : text + "\n");
}

json globals_json(const Globals& g) {
    return {{"seed", g.seed}, {"threads", g.threads}, {"format", g.format}, {"out", g.out}};
}

json envelope(const std::string& command, json config, json tolerances, json result) {
    return {{"command", command},
            {"config", std::move(config)},
            {"tolerances", std::move(tolerances)},
            {"result", std::move(result)}};
}

std::string csv_document(const json& env, const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream os;
    os << "# command: " << env["command"].get<std::string>() << "\n";
    os << "# config: " << env["config"].dump() << "\n";
    os << "# tolerances: " << env["tolerances"].dump() << "\n";
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << "\n";
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
        os << "\n";
    }
    return os.str();
}

std::string num(double x) {
    if (std::isnan(x)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json vec_json(const Vec& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

BallPoint point_arg(const std::vector<double>& coords, int dim, const char* name) {
    if (coords.empty()) return BallPoint::origin(dim);
    if (static_cast<int>(coords.size()) != dim)
        throw UsageError(std::string(name) + ": expected " + std::to_string(dim) + " coordinates");
    Vec x(dim);
    for (int i = 0; i < dim; ++i) x[i] = coords[i];
    try {
        return BallPoint(x);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string(name) + ": " + e.what());
    }
}

Submanifold load_submanifold(const std::string& path) {
    const std::string text = read_text(path);
    try {
        return parse_submanifold(text);
    } catch (const SchemaError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

}  // namespace hypent::cli
