#include "homeplan/cli/settings.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>

#include <fmt/format.h>

#include "homeplan/core/schema.hpp"

namespace homeplan::cli {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path default_data_dir() { return HOMEPLAN_DEFAULT_DATA_DIR; }

ConfigFile ConfigFile::load(const fs::path& path) {
    ConfigFile f;
    std::string bytes;
    try {
        bytes = read_file(path);
    } catch (const std::exception&) {
        throw ConfigError(fmt::format("config file {} cannot be read", path.string()));
    }
    try {
        f.doc_ = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("config file {} is not valid JSON: {}", path.string(), e.what()));
    }
    if (!f.doc_.is_object()) throw ConfigError(fmt::format("config file {} must hold a JSON object", path.string()));
    f.base_ = fs::absolute(path).parent_path();
    return f;
}

const json* ConfigFile::find(std::string_view key) const {
    auto it = doc_.find(std::string(key));
    return it == doc_.end() || it->is_null() ? nullptr : &*it;
}

std::string Layers::env_name(std::string_view key) {
    std::string name = "HOMEPLAN_";
    for (char c : key) name += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return name;
}

namespace {

std::optional<std::string> env(const std::string& name) {
    const char* v = std::getenv(name.c_str());
    if (!v || !*v) return std::nullopt;
    return std::string(v);
}

template <typename T>
T parse_number(const std::string& text, const std::string& origin) {
    T value{};
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) throw ConfigError(fmt::format("{}: \"{}\" is not a valid number", origin, text));
    return value;
}

template <typename T>
T config_value(const json& v, std::string_view key, const char* what) {
    try {
        return v.get<T>();
    } catch (const json::exception&) {
        throw ConfigError(fmt::format("config key \"{}\" must be {}", key, what));
    }
}

}  // namespace

std::string Layers::text(const std::optional<std::string>& flag, std::string_view key, std::string fallback) const {
    if (flag) return *flag;
    if (auto e = env(env_name(key))) return *e;
    if (const json* v = file_.find(key)) return config_value<std::string>(*v, key, "a string");
    return fallback;
}

fs::path Layers::path(const std::optional<std::string>& flag, std::string_view key, fs::path fallback) const {
    if (flag) return *flag;
    if (auto e = env(env_name(key))) return *e;
    if (const json* v = file_.find(key)) {
        fs::path p = config_value<std::string>(*v, key, "a path string");
        return p.is_relative() ? file_.base() / p : p;
    }
    return fallback;
}

long long Layers::integer(const std::optional<long long>& flag, std::string_view key, long long fallback,
                          long long min) const {
    long long value = fallback;
    std::string origin = "--" + std::string(key);
    if (flag) {
        value = *flag;
    } else if (auto e = env(env_name(key))) {
        origin = env_name(key);
        value = parse_number<long long>(*e, origin);
    } else if (const json* v = file_.find(key)) {
        origin = fmt::format("config key \"{}\"", key);
        if (!v->is_number_integer()) throw ConfigError(origin + " must be an integer");
        value = v->get<long long>();
    }
    if (value < min) throw ConfigError(fmt::format("{} must be at least {} (got {})", origin, min, value));
    return value;
}

std::uint64_t Layers::seed(const std::optional<std::uint64_t>& flag, std::string_view key,
                           std::uint64_t fallback) const {
    if (flag) return *flag;
    if (auto e = env(env_name(key))) return parse_number<std::uint64_t>(*e, env_name(key));
    if (const json* v = file_.find(key)) {
        if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0)) {
            throw ConfigError(fmt::format("config key \"{}\" must be a non-negative integer", key));
        }
        return v->get<std::uint64_t>();
    }
    return fallback;
}

double Layers::number(const std::optional<double>& flag, std::string_view key, double fallback) const {
    if (flag) return *flag;
    if (auto e = env(env_name(key))) {
        try {
            std::size_t used = 0;
            double d = std::stod(*e, &used);
            if (used == e->size()) return d;
        } catch (const std::exception&) {
        }
        throw ConfigError(fmt::format("{}: \"{}\" is not a valid number", env_name(key), *e));
    }
    if (const json* v = file_.find(key)) {
        if (!v->is_number()) throw ConfigError(fmt::format("config key \"{}\" must be a number", key));
        return v->get<double>();
    }
    return fallback;
}

bool Layers::boolean(const std::optional<bool>& flag, std::string_view key, bool fallback) const {
    if (flag) return *flag;
    if (auto e = env(env_name(key))) {
        if (*e == "1" || *e == "true") return true;
        if (*e == "0" || *e == "false") return false;
        throw ConfigError(fmt::format("{} must be 0, 1, true or false", env_name(key)));
    }
    if (const json* v = file_.find(key)) return config_value<bool>(*v, key, "true or false");
    return fallback;
}

}  // namespace homeplan::cli
