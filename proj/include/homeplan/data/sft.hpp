#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "homeplan/agent/instruction.hpp"
#include "homeplan/core/trajectory.hpp"

namespace homeplan::planners {
class ChatClient;
}

namespace homeplan::data {

/// Prompt rendering shared with the episode loop.
struct PromptConfig {
    std::string system_info = agent::default_system_prompt();
    agent::PromptTemplate prompt;
};

/// Planner state before a step plus the reply given there.
struct ConversationSample {
    std::string task_id;
    int run_index = 0;
    int step_index = 0;  // 1-based step in the source trajectory
    int variant = 0;     // 0 original, k = k-th rewrite
    agent::EpisodeState state;
    PlannerOutput response;

    std::string prompt(const PromptConfig& config) const;
    std::string response_text() const;
};

/// State shown to the planner before step `index` (0-based) of the trajectory.
agent::EpisodeState state_before(const Trajectory& trajectory, std::size_t index, const std::string& task_text,
                                 const PromptConfig& config);

/// One sample per successful step; failed steps are dropped from each
/// prompt's history (the hand state still reflects them).
std::vector<ConversationSample> sft_convert(const Trajectory& trajectory, const Task& task,
                                            const PromptConfig& config);

class RewriterTransportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class TextKind { Task, Analysis };

class Rewriter {
public:
    virtual ~Rewriter() = default;
    /// Paraphrase for rewrite round `variant` (1-based). Throws RewriterTransportError.
    virtual std::string rewrite(const std::string& text, TextKind kind, int variant) = 0;
};

class IdentityRewriter : public Rewriter {
public:
    std::string rewrite(const std::string& text, TextKind, int) override { return text; }
};

/// Paraphrases through a chat endpoint.
class RemoteRewriter : public Rewriter {
public:
    explicit RemoteRewriter(std::shared_ptr<planners::ChatClient> client) : client_(std::move(client)) {}
    std::string rewrite(const std::string& text, TextKind kind, int variant) override;

private:
    std::shared_ptr<planners::ChatClient> client_;
};

struct RewriteResult {
    std::vector<ConversationSample> samples;
    int failures = 0;
};

/// Originals first, then `n` rewrite rounds over all samples. Only the task
/// text and the analysis change. A failed rewrite drops that one sample.
RewriteResult expand_with_rewrites(const std::vector<ConversationSample>& samples, Rewriter& rewriter, int n);

}  // namespace homeplan::data
