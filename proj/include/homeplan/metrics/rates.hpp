#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <string>

#include "homeplan/core/types.hpp"
#include "homeplan/metrics/progress.hpp"

namespace homeplan::metrics {

/// Per-episode summary. `success` is exactly `tp == 1`; `ended` is
/// "the final action was End".
struct EpisodeResult {
    std::string task_id;
    int run_index = 0;
    Rational tp{0};
    bool success = false;
    bool ended = false;
    int replans = 0;
    int length = 0;
};

EpisodeResult evaluate_episode(const Trajectory& trajectory, const KeypathSet& keypaths);

/// A ratio in [0, 1]. A zero denominator yields 0 with the flag set.
struct Rate {
    Rational value{0};
    bool denominator_zero = false;
};

/// Successful trajectories that ended with End, over all trajectories that ended with End.
Rate compute_ser(std::span<const EpisodeResult> results);

/// Replans inside successful trajectories over all replans.
Rate compute_srr(std::span<const EpisodeResult> results);

enum class PlwsrMode {
    /// expert / max(expert, actual)
    Alfred,
    /// actual / max(expert, actual), the sentence read word for word
    Literal,
};

class MissingExpertLength : public std::invalid_argument {
public:
    explicit MissingExpertLength(const std::string& task_id)
        : std::invalid_argument("no expert length for task " + task_id), task_id_(task_id) {}
    const std::string& task_id() const { return task_id_; }

private:
    std::string task_id_;
};

/// Path-length weight of one episode (0 for failures).
Rational plwsr_weight(const EpisodeResult& result, int expert_length, PlwsrMode mode);

struct SuccessRates {
    Rational sr{0};
    Rational plwsr{0};
};

/// Episodes are averaged within each task, then across tasks.
SuccessRates compute_sr_plwsr(std::span<const EpisodeResult> results,
                              const std::map<std::string, int>& expert_lengths,
                              PlwsrMode mode = PlwsrMode::Alfred);

/// Mean of per-task means of `value(result)`, in task-id order.
template <typename F>
Rational macro_average(std::span<const EpisodeResult> results, F&& value) {
    std::map<std::string, std::pair<Rational, std::int64_t>> per_task;
    for (const auto& r : results) {
        auto& [sum, n] = per_task[r.task_id];
        sum += value(r);
        ++n;
    }
    if (per_task.empty()) return Rational(0);
    Rational total(0);
    for (const auto& [id, acc] : per_task) total += acc.first / acc.second;
    return total / static_cast<std::int64_t>(per_task.size());
}

// Display helpers. Percentages use two decimals with half-up rounding,
// computed exactly from the rational.
std::string format_percent(const Rational& fraction);
double percent_value(const Rational& fraction);

}  // namespace homeplan::metrics
