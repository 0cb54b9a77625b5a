#pragma once

#include <deque>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "homeplan/agent/planner.hpp"

namespace homeplan::planners {

/// Canonical End reply returned by exhausted or closed planners.
std::string end_reply();

struct ScriptEntry {
    std::string text;
    /// Replies issued when this entry fails with the given code, before it is retried.
    std::map<ErrorCode, std::vector<std::string>> on;
};

/// Replay plan. When a plain entry fails with a code that has a branch
/// (entry-level first, then plan-level), the branch replies are issued
/// with "{target}" replaced by the failed entry's target, and then the
/// failed entry is issued again. Exhausted plans reply End.
struct ScriptedPlan {
    std::vector<ScriptEntry> steps;
    std::map<ErrorCode, std::vector<std::string>> branches;

    /// {"steps": [entry...], "branches": {"D1": [reply...]}} where an entry is a
    /// raw string, an output object, or {"reply": <string|object>, "on": {...}}.
    /// Throws SchemaError.
    static ScriptedPlan from_json(const nlohmann::json& doc);
};

ScriptedPlan load_scripted_plan(std::string_view bytes);

class ScriptedPlanner : public agent::Planner {
public:
    explicit ScriptedPlanner(ScriptedPlan plan) : plan_(std::move(plan)) {}
    std::string next(const agent::Instruction& instruction) override;

private:
    ScriptedPlan plan_;
    std::size_t cursor_ = 0;
    std::optional<std::size_t> last_plain_;
    std::deque<std::string> pending_;
    bool reissue_pending_ = false;
    bool last_was_plain_ = false;
};

/// Always replies with the same text.
class ConstantPlanner : public agent::Planner {
public:
    explicit ConstantPlanner(std::string text) : text_(std::move(text)) {}
    std::string next(const agent::Instruction&) override { return text_; }

private:
    std::string text_;
};

}  // namespace homeplan::planners
