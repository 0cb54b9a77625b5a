#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "homeplan/core/types.hpp"

namespace homeplan {

inline constexpr int kMaxRetries = 2;

struct StepRecord {
    int index = 0;  // 1-based
    PlannerOutput output;
    Feedback feedback;
    int retries_used = 0;
    /// What the planner was shown when it produced `output`.
    std::optional<Observations> observations;

    bool succeeded() const { return feedback.ok(); }
    /// An accepted End. A malformed End is recorded as an F1 failure instead.
    bool is_end() const { return feedback.ok() && output.is_end(); }
};

enum class Termination {
    End,
    Budget,
    Aborted,  // partial trajectory, planner transport failed mid-episode
};

std::string_view to_string(Termination t);
std::optional<Termination> parse_termination(std::string_view text);

/// Ordered step log of one episode. The public interface refuses any
/// sequence in which a step follows End or the indices are not 1..n.
class Trajectory {
public:
    Trajectory() = default;
    Trajectory(std::string task_id, int run_index);

    const std::string& task_id() const { return task_id_; }
    int run_index() const { return run_index_; }
    std::span<const StepRecord> steps() const { return steps_; }
    std::size_t size() const { return steps_.size(); }
    bool empty() const { return steps_.empty(); }

    /// Assigns the next index when `step.index` is 0; otherwise it must equal size()+1.
    /// Throws InvariantError after End or once finished.
    void append(StepRecord step);

    /// Throws InvariantError if `how` contradicts the last step.
    void finish(Termination how);

    std::optional<Termination> termination() const { return termination_; }
    bool finished() const { return termination_.has_value(); }
    bool terminated_by_end() const { return termination_ == Termination::End; }
    bool terminated_by_budget() const { return termination_ == Termination::Budget; }
    bool aborted() const { return termination_ == Termination::Aborted; }

private:
    std::string task_id_;
    int run_index_ = 0;
    std::vector<StepRecord> steps_;
    std::optional<Termination> termination_;
};

}  // namespace homeplan
