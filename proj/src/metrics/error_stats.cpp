#include "homeplan/metrics/error_stats.hpp"

#include <stdexcept>

namespace homeplan::metrics {

namespace {

Rational safe_ratio(std::int64_t num, std::int64_t den) { return den == 0 ? Rational(0) : Rational(num, den); }

}  // namespace

std::int64_t PartitionStats::count(ErrorCode code) const {
    auto it = by_code.find(code);
    return it == by_code.end() ? 0 : it->second;
}

std::int64_t PartitionStats::count(ErrorCategory cat) const {
    auto it = by_category.find(cat);
    return it == by_category.end() ? 0 : it->second;
}

Rational PartitionStats::share(ErrorCode code) const { return safe_ratio(count(code), failed_steps); }
Rational PartitionStats::share(ErrorCategory cat) const { return safe_ratio(count(cat), failed_steps); }
Rational PartitionStats::failed_fraction() const { return safe_ratio(failed_steps, total_steps); }

void PartitionStats::add(const Trajectory& trajectory) {
    ++trajectories;
    for (const StepRecord& step : trajectory.steps()) {
        ++total_steps;
        if (step.succeeded()) continue;
        const ErrorCode code = *step.feedback.code;
        ++failed_steps;
        ++by_code[code];
        ++by_category[category(code)];
    }
}

ErrorBreakdown aggregate_error_stats(std::span<const Trajectory> trajectories,
                                     std::span<const EpisodeResult> results) {
    if (trajectories.size() != results.size()) {
        throw std::invalid_argument("aggregate_error_stats: trajectories and results differ in length");
    }
    ErrorBreakdown out;
    for (std::size_t i = 0; i < trajectories.size(); ++i) {
        (results[i].success ? out.successful : out.failed).add(trajectories[i]);
        out.overall.add(trajectories[i]);
    }
    return out;
}

std::vector<ActionStats> per_action_stats(std::span<const Trajectory> trajectories) {
    std::map<ActionType, ActionStats> rows;
    std::int64_t total_e = 0;
    for (const Trajectory& t : trajectories) {
        for (const StepRecord& step : t.steps()) {
            auto subtask = step.output.subtask();
            if (!subtask || subtask->action == ActionType::End) continue;
            // A subtask the executor never saw (F1) is not an attempt at the skill.
            if (!step.succeeded() && step.feedback.code == ErrorCode::F1) continue;
            ActionStats& row = rows[subtask->action];
            row.action = subtask->action;
            ++row.attempts;
            if (step.succeeded()) {
                ++row.successes;
            } else if (category(*step.feedback.code) == ErrorCategory::Execution) {
                ++row.execution_errors;
                ++total_e;
            }
        }
    }
    std::vector<ActionStats> out;
    for (ActionType a : kAllActions) {
        auto it = rows.find(a);
        if (it == rows.end()) continue;
        ActionStats row = it->second;
        row.success_rate = safe_ratio(row.successes, row.attempts);
        row.execution_error_share = safe_ratio(row.execution_errors, total_e);
        out.push_back(row);
    }
    return out;
}

}  // namespace homeplan::metrics
