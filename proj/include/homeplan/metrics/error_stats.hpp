#pragma once

#include <map>
#include <span>
#include <vector>

#include "homeplan/core/trajectory.hpp"
#include "homeplan/metrics/rates.hpp"

namespace homeplan::metrics {

/// Failure counts for one partition of trajectories (all successful or all failed).
struct PartitionStats {
    std::map<ErrorCode, std::int64_t> by_code;
    std::map<ErrorCategory, std::int64_t> by_category;
    std::int64_t failed_steps = 0;
    std::int64_t total_steps = 0;
    std::int64_t trajectories = 0;

    std::int64_t count(ErrorCode code) const;
    std::int64_t count(ErrorCategory cat) const;
    /// Share of this partition's failed steps; 0 when there are none.
    Rational share(ErrorCode code) const;
    Rational share(ErrorCategory cat) const;
    /// failed_steps / total_steps; 0 for an empty partition.
    Rational failed_fraction() const;

    void add(const Trajectory& trajectory);
};

struct ErrorBreakdown {
    PartitionStats successful;
    PartitionStats failed;
    PartitionStats overall;
};

/// `results[i]` must describe `trajectories[i]`.
ErrorBreakdown aggregate_error_stats(std::span<const Trajectory> trajectories,
                                     std::span<const EpisodeResult> results);

struct ActionStats {
    ActionType action = ActionType::GoTo;
    std::int64_t attempts = 0;
    std::int64_t successes = 0;
    std::int64_t execution_errors = 0;  // E1/E2 on this action
    Rational success_rate{0};
    Rational execution_error_share{0};  // of all E-category failures
};

/// One row per action that was attempted at least once, End excluded.
/// A step counts as one attempt regardless of its internal retries.
std::vector<ActionStats> per_action_stats(std::span<const Trajectory> trajectories);

}  // namespace homeplan::metrics
