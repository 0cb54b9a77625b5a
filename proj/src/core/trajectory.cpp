#include "homeplan/core/trajectory.hpp"

#include <fmt/format.h>

#include "homeplan/core/errors.hpp"

namespace homeplan {

std::string_view to_string(Termination t) {
    switch (t) {
        case Termination::End: return "end";
        case Termination::Budget: return "budget";
        case Termination::Aborted: return "aborted";
    }
    return "?";
}

std::optional<Termination> parse_termination(std::string_view text) {
    if (text == "end") return Termination::End;
    if (text == "budget") return Termination::Budget;
    if (text == "aborted") return Termination::Aborted;
    return std::nullopt;
}

Trajectory::Trajectory(std::string task_id, int run_index)
    : task_id_(std::move(task_id)), run_index_(run_index) {}

void Trajectory::append(StepRecord step) {
    if (finished()) throw InvariantError("trajectory already finished");
    if (!steps_.empty() && steps_.back().is_end()) {
        throw InvariantError(fmt::format("step {} follows End", steps_.size() + 1));
    }
    const int expected = static_cast<int>(steps_.size()) + 1;
    if (step.index == 0) step.index = expected;
    if (step.index != expected) {
        throw InvariantError(fmt::format("step index {} where {} was expected", step.index, expected));
    }
    if (step.retries_used < 0 || step.retries_used > kMaxRetries) {
        throw InvariantError(fmt::format("step {}: retries_used {} outside 0..{}", step.index,
                                         step.retries_used, kMaxRetries));
    }
    if (step.feedback.ok() == step.feedback.code.has_value()) {
        throw InvariantError(fmt::format("step {}: error code must be present iff the step failed", step.index));
    }
    steps_.push_back(std::move(step));
}

void Trajectory::finish(Termination how) {
    if (finished()) throw InvariantError("trajectory already finished");
    const bool ends_with_end = !steps_.empty() && steps_.back().is_end();
    if (how == Termination::End && !ends_with_end) {
        throw InvariantError("terminated by End but the final step is not End");
    }
    if (how != Termination::End && ends_with_end) {
        throw InvariantError("final step is End but termination is not 'end'");
    }
    termination_ = how;
}

}  // namespace homeplan
