#pragma once

// Minimal in-test planners.

#include <functional>
#include <string>
#include <vector>

#include "homeplan/agent/planner.hpp"

namespace homeplan::testing {

inline std::string reply(const std::string& action, const std::string& target, const std::string& model,
                         const std::string& analysis = "next") {
    std::string sub = target.empty() ? "[\"" + action + "\"]" : "[\"" + action + "\", \"" + target + "\"]";
    return "{\"analysis\": \"" + analysis + "\", \"subtask\": " + sub + ", \"model\": \"" + model + "\"}";
}

inline std::string end_reply() { return reply("End", "", "M3", "done"); }

/// Replies in order, then End forever.
class SequencePlanner : public agent::Planner {
public:
    explicit SequencePlanner(std::vector<std::string> replies) : replies_(std::move(replies)) {}
    std::string next(const agent::Instruction& instruction) override {
        seen.push_back(instruction);
        return pos_ < replies_.size() ? replies_[pos_++] : end_reply();
    }
    std::vector<agent::Instruction> seen;

private:
    std::vector<std::string> replies_;
    std::size_t pos_ = 0;
};

class FnPlanner : public agent::Planner {
public:
    explicit FnPlanner(std::function<std::string(const agent::Instruction&)> fn) : fn_(std::move(fn)) {}
    std::string next(const agent::Instruction& instruction) override { return fn_(instruction); }

private:
    std::function<std::string(const agent::Instruction&)> fn_;
};

}  // namespace homeplan::testing
