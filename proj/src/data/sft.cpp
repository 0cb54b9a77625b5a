#include "homeplan/data/sft.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "homeplan/agent/parse.hpp"
#include "homeplan/agent/planner.hpp"
#include "homeplan/planners/remote.hpp"

namespace homeplan::data {

std::string ConversationSample::prompt(const PromptConfig& config) const {
    return agent::assemble_instruction(state, config.prompt).text();
}

std::string ConversationSample::response_text() const { return agent::format_planner_output(response); }

agent::EpisodeState state_before(const Trajectory& trajectory, std::size_t index, const std::string& task_text,
                                 const PromptConfig& config) {
    const auto steps = trajectory.steps();
    const Observations current = steps[index].observations.value_or(Observations{});
    return agent::replay(config.system_info, task_text, steps.first(index), current, 0);
}

std::vector<ConversationSample> sft_convert(const Trajectory& trajectory, const Task& task,
                                            const PromptConfig& config) {
    std::vector<ConversationSample> out;
    const auto steps = trajectory.steps();
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (!steps[i].succeeded()) continue;
        ConversationSample s;
        s.task_id = trajectory.task_id();
        s.run_index = trajectory.run_index();
        s.step_index = steps[i].index;
        s.state = state_before(trajectory, i, task.instruction, config);
        std::erase_if(s.state.history, [](const agent::HistoryEntry& h) { return !h.feedback.ok(); });
        s.state.last_feedback.reset();
        if (!s.state.history.empty()) s.state.last_feedback = s.state.history.back().feedback;
        s.state.budget_remaining = 0;
        s.response = steps[i].output;
        out.push_back(std::move(s));
    }
    return out;
}

std::string RemoteRewriter::rewrite(const std::string& text, TextKind kind, int variant) {
    const std::string system =
        "You paraphrase short texts for a household robot dataset. Keep every object name, action and "
        "constraint unchanged. Reply with the paraphrase only.";
    const std::string user = fmt::format("Paraphrase number {} of this {}:\n{}", variant,
                                         kind == TextKind::Task ? "task description" : "step reasoning", text);
    try {
        std::string out = client_->complete(system, user);
        while (!out.empty() && (out.back() == '\n' || out.back() == ' ')) out.pop_back();
        if (out.empty()) throw RewriterTransportError("empty paraphrase");
        return out;
    } catch (const agent::PlannerTransportError& e) {
        throw RewriterTransportError(e.what());
    }
}

RewriteResult expand_with_rewrites(const std::vector<ConversationSample>& samples, Rewriter& rewriter, int n) {
    RewriteResult result;
    result.samples = samples;
    for (int variant = 1; variant <= n; ++variant) {
        std::map<std::string, std::optional<std::string>> task_cache;
        for (const ConversationSample& original : samples) {
            auto [it, fresh] = task_cache.try_emplace(original.state.task_text);
            if (fresh) {
                try {
                    it->second = rewriter.rewrite(original.state.task_text, TextKind::Task, variant);
                } catch (const RewriterTransportError&) {
                    it->second.reset();
                }
            }
            if (!it->second) {
                ++result.failures;
                continue;
            }
            ConversationSample s = original;
            s.variant = variant;
            s.state.task_text = *it->second;
            try {
                s.response.analysis = rewriter.rewrite(original.response.analysis, TextKind::Analysis, variant);
            } catch (const RewriterTransportError&) {
                ++result.failures;
                continue;
            }
            result.samples.push_back(std::move(s));
        }
    }
    return result;
}

}  // namespace homeplan::data
