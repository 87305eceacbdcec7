#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace cli {

using Json = nlohmann::ordered_json;

/// Bad flags or config values; exit code 1.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reads a JSON config for `command`. A run manifest is accepted too: its
/// "config" snapshot is returned after checking that it was written by the
/// same command.
Json load_config(const std::filesystem::path& path, std::string_view command);

void reject_unknown_keys(const Json& cfg, std::initializer_list<std::string_view> known);

/// Typed lookup; nullopt when the key is absent or null.
template <typename T>
std::optional<T> get(const Json& cfg, const char* key) {
    const auto it = cfg.find(key);
    if (it == cfg.end() || it->is_null()) return std::nullopt;
    try {
        return it->get<T>();
    } catch (const nlohmann::json::exception&) {
        throw UsageError(std::string("config key '") + key + "' has the wrong type");
    }
}

/// HETEROSOLVE_SEED when set, else 0.
std::uint64_t default_seed();

struct Manifest {
    std::string command;
    Json config;
    std::uint64_t master_seed = 0;
    std::size_t jobs = 1;
    std::vector<std::filesystem::path> outputs;
    double wall_seconds = 0.0;
};

void write_manifest(const std::filesystem::path& dir, const Manifest& m);

/// Writes text exactly as given, creating parent directories.
void write_file(const std::filesystem::path& path, std::string_view text);

/// Pretty-printed JSON with a trailing newline.
std::string dump(const Json& j);

}  // namespace cli
