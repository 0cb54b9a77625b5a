#include "homeplan/planners/remote.hpp"

#include <regex>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>

#include "homeplan/core/errors.hpp"

namespace homeplan::planners {

using nlohmann::json;
using agent::PlannerTransportError;

RemotePlannerConfig RemotePlannerConfig::from_json(const json& doc) {
    if (!doc.is_object()) throw SchemaError("planner", "expected an object");
    RemotePlannerConfig c;
    try {
        c.endpoint = doc.value("endpoint", c.endpoint);
        c.model = doc.value("model", c.model);
        c.api_key = doc.value("api_key", c.api_key);
        c.timeout_seconds = doc.value("timeout_seconds", c.timeout_seconds);
        c.max_retries = doc.value("max_retries", c.max_retries);
        c.temperature = doc.value("temperature", c.temperature);
        c.max_connections = doc.value("max_connections", c.max_connections);
        c.backoff = std::chrono::milliseconds(doc.value("backoff_ms", static_cast<long>(c.backoff.count())));
        c.template_path = doc.value("template", c.template_path);
    } catch (const json::type_error& e) {
        throw SchemaError("planner", e.what());
    }
    return c;
}

namespace {

const std::regex& url_pattern() {
    static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)");
    return re;
}

}  // namespace

void RemotePlannerConfig::validate() const {
    if (!(timeout_seconds > 0)) throw SchemaError("planner.timeout_seconds", "must be positive");
    if (max_retries < 0) throw SchemaError("planner.max_retries", "must not be negative");
    if (max_connections < 1) throw SchemaError("planner.max_connections", "must be at least 1");
    if (backoff.count() < 0) throw SchemaError("planner.backoff_ms", "must not be negative");
    if (!std::regex_match(endpoint, url_pattern())) {
        throw SchemaError("planner.endpoint", fmt::format("\"{}\" is not an http(s) URL", endpoint));
    }
}

ChatClient::ChatClient(RemotePlannerConfig config)
    : config_(std::move(config)), slots_(std::max(1, config_.max_connections)) {
    config_.validate();
    std::smatch m;
    std::regex_match(config_.endpoint, m, url_pattern());
    base_ = m[1].str();
    path_ = m[2].matched ? m[2].str() : "/";
}

json ChatClient::request_body(const std::string& system, const std::string& user,
                              const std::vector<std::string>& image_refs) const {
    json user_msg = {{"role", "user"}};
    if (image_refs.empty()) {
        user_msg["content"] = user;
    } else {
        json parts = json::array({{{"type", "text"}, {"text", user}}});
        for (const auto& ref : image_refs) {
            parts.push_back({{"type", "image_url"}, {"image_url", {{"url", ref}}}});
        }
        user_msg["content"] = parts;
    }
    return {{"model", config_.model},
            {"temperature", config_.temperature},
            {"messages", json::array({{{"role", "system"}, {"content", system}}, user_msg})}};
}

std::string ChatClient::complete(const std::string& system, const std::string& user,
                                 const std::vector<std::string>& image_refs) {
    const std::string body = request_body(system, user, image_refs).dump();
    httplib::Headers headers;
    if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

    const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
        std::chrono::duration<double>(config_.timeout_seconds));
    std::string last_error;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        if (attempt > 0) std::this_thread::sleep_for(config_.backoff * (1 << (attempt - 1)));

        httplib::Result res;
        {
            slots_.acquire();
            httplib::Client client(base_);
            client.set_connection_timeout(timeout);
            client.set_read_timeout(timeout);
            client.set_write_timeout(timeout);
            res = client.Post(path_, headers, body, "application/json");
            slots_.release();
        }

        if (!res) {
            const auto err = res.error();
            last_error = err == httplib::Error::Read || err == httplib::Error::ConnectionTimeout
                             ? "timeout"
                             : httplib::to_string(err);
            continue;
        }
        if (res->status == 429 || res->status >= 500) {
            last_error = fmt::format("HTTP {}", res->status);
            continue;
        }
        if (res->status < 200 || res->status >= 300) {
            throw PlannerTransportError(fmt::format("{}: HTTP {}", config_.endpoint, res->status));
        }
        json doc = json::parse(res->body, nullptr, false);
        try {
            if (!doc.is_discarded()) return doc.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const json::exception&) {
        }
        throw PlannerTransportError(fmt::format("{}: malformed response envelope", config_.endpoint));
    }
    throw PlannerTransportError(
        fmt::format("{}: {} after {} attempt(s)", config_.endpoint, last_error, config_.max_retries + 1));
}

}  // namespace homeplan::planners
