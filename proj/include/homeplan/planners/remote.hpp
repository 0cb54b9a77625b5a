#pragma once

#include <chrono>
#include <memory>
#include <semaphore>
#include <string>
#include <vector>

#include <json.hpp>

#include "homeplan/agent/planner.hpp"

namespace homeplan::planners {

struct RemotePlannerConfig {
    std::string endpoint;  // http(s)://host[:port]/path
    std::string model;
    std::string api_key;  // never logged
    double timeout_seconds = 60.0;
    int max_retries = 2;
    double temperature = 0.0;
    int max_connections = 4;
    std::chrono::milliseconds backoff{500};
    std::string template_path;  // empty: built-in user template

    /// Reads endpoint, model, api_key, timeout_seconds, max_retries,
    /// temperature, max_connections, backoff_ms, template. Throws SchemaError.
    static RemotePlannerConfig from_json(const nlohmann::json& doc);
    /// Throws SchemaError when timeout <= 0, retries < 0 or the endpoint is unusable.
    void validate() const;
};

/// Chat-completions client shared by every episode that uses one endpoint.
/// At most max_connections requests are in flight at once.
class ChatClient {
public:
    explicit ChatClient(RemotePlannerConfig config);

    /// Assistant text of choices[0]. Retries on connection failures, 429
    /// and 5xx with exponential backoff. Throws agent::PlannerTransportError.
    std::string complete(const std::string& system, const std::string& user,
                         const std::vector<std::string>& image_refs = {});

    /// Request body for the given messages; exposed for inspection.
    nlohmann::json request_body(const std::string& system, const std::string& user,
                                const std::vector<std::string>& image_refs) const;

    const RemotePlannerConfig& config() const { return config_; }

private:
    RemotePlannerConfig config_;
    std::string base_;  // scheme://host:port
    std::string path_;
    std::counting_semaphore<> slots_;
};

class RemotePlanner : public agent::Planner {
public:
    explicit RemotePlanner(std::shared_ptr<ChatClient> client) : client_(std::move(client)) {}
    std::string next(const agent::Instruction& instruction) override {
        return client_->complete(instruction.system, instruction.user, instruction.image_refs);
    }

private:
    std::shared_ptr<ChatClient> client_;
};

}  // namespace homeplan::planners
