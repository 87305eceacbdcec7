#include "config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>

#include <heterosolve/errors.hpp>
#include <heterosolve/version.hpp>

namespace cli {

using heterosolve::Error;
using heterosolve::ErrorCode;

Json load_config(const std::filesystem::path& path, std::string_view command) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Parse, "cannot open config " + path.string());
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::Parse, path.string() + ": config must be a JSON object");
    if (j.contains("command") && j.contains("config")) {
        const auto written_by = j["command"].is_string() ? j["command"].get<std::string>() : std::string();
        if (written_by != command) {
            throw UsageError(path.string() + " is a manifest for '" + written_by + "', not '" + std::string(command) + "'");
        }
        Json cfg = j["config"];
        if (!cfg.is_object()) throw Error(ErrorCode::Parse, path.string() + ": manifest config must be an object");
        return cfg;
    }
    return j;
}

void reject_unknown_keys(const Json& cfg, std::initializer_list<std::string_view> known) {
    for (const auto& [key, value] : cfg.items()) {
        bool ok = false;
        for (std::string_view k : known) ok = ok || key == k;
        if (!ok) throw UsageError("unknown config key '" + key + "'");
    }
}

std::uint64_t default_seed() {
    const char* env = std::getenv("HETEROSOLVE_SEED");
    if (env == nullptr || *env == '\0') return 0;
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (errno != 0 || *end != '\0' || *env == '-') {
        throw UsageError(std::string("HETEROSOLVE_SEED is not an unsigned integer: '") + env + "'");
    }
    return v;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_file(const std::filesystem::path& path, std::string_view text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
}

void write_manifest(const std::filesystem::path& dir, const Manifest& m) {
    Json outputs = Json::array();
    for (const auto& p : m.outputs) outputs.push_back(p.generic_string());
    const Json j{{"command", m.command},
                 {"version", heterosolve::version()},
                 {"master_seed", m.master_seed},
                 {"jobs", m.jobs},
                 {"config", m.config},
                 {"outputs", std::move(outputs)},
                 {"wall_time_seconds", m.wall_seconds}};
    write_file(dir / "manifest.json", dump(j));
}

}  // namespace cli
