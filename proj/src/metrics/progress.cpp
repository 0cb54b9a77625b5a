#include "homeplan/metrics/progress.hpp"

#include <algorithm>

namespace homeplan::metrics {

Rational MatchState::ratio() const {
    return Rational(static_cast<std::int64_t>(checked.size()), static_cast<std::int64_t>(keypath.size()));
}

MatchState match_keypath(const Trajectory& trajectory, const Keypath& keypath) {
    MatchState state{keypath, {}, 0};
    for (const StepRecord& step : trajectory.steps()) {
        if (state.complete()) break;
        if (!step.succeeded()) continue;
        auto subtask = step.output.subtask();
        if (subtask && *subtask == keypath[state.cursor]) {
            state.checked.push_back(*subtask);
            ++state.cursor;
        }
    }
    return state;
}

Rational compute_tp(const Trajectory& trajectory, const KeypathSet& keypaths) {
    if (keypaths.empty()) throw EmptyKeypathSet();
    Rational best(0);
    for (const Keypath& kp : keypaths) {
        if (kp.empty()) continue;
        best = std::max(best, match_keypath(trajectory, kp).ratio());
    }
    return best;
}

int count_replans(const Trajectory& trajectory) {
    const auto steps = trajectory.steps();
    int replans = 0;
    for (std::size_t i = 1; i < steps.size(); ++i) {
        if (!steps[i - 1].succeeded()) ++replans;
    }
    return replans;
}

int trajectory_length(const Trajectory& trajectory) {
    const auto steps = trajectory.steps();
    return static_cast<int>(std::count_if(steps.begin(), steps.end(), [](const StepRecord& s) { return !s.is_end(); }));
}

}  // namespace homeplan::metrics
