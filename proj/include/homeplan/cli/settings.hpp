#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

namespace homeplan::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitTransport = 3;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Streams {
    std::istream& in;
    std::ostream& out;
    std::ostream& err;
};

/// Directory holding the bundled tasks, scenes, plans and lexicon.
std::filesystem::path default_data_dir();

/// A JSON object of settings. Relative paths in it resolve against the file's directory.
class ConfigFile {
public:
    ConfigFile() = default;
    /// Throws ConfigError.
    static ConfigFile load(const std::filesystem::path& path);

    const nlohmann::json* find(std::string_view key) const;
    const std::filesystem::path& base() const { return base_; }

private:
    nlohmann::json doc_ = nlohmann::json::object();
    std::filesystem::path base_;
};

/// Looks a setting up on the command line, then in HOMEPLAN_<KEY>, then in
/// the config file, then falls back. Malformed values throw ConfigError
/// naming where they came from.
class Layers {
public:
    explicit Layers(const ConfigFile& file) : file_(file) {}

    static std::string env_name(std::string_view key);

    std::string text(const std::optional<std::string>& flag, std::string_view key, std::string fallback) const;
    std::filesystem::path path(const std::optional<std::string>& flag, std::string_view key,
                               std::filesystem::path fallback) const;
    long long integer(const std::optional<long long>& flag, std::string_view key, long long fallback,
                      long long min) const;
    std::uint64_t seed(const std::optional<std::uint64_t>& flag, std::string_view key, std::uint64_t fallback) const;
    double number(const std::optional<double>& flag, std::string_view key, double fallback) const;
    bool boolean(const std::optional<bool>& flag, std::string_view key, bool fallback) const;

    const ConfigFile& file() const { return file_; }

private:
    const ConfigFile& file_;
};

}  // namespace homeplan::cli
