#pragma once

// Hand-built trajectories with known metric values.

#include <string>
#include <vector>

#include "homeplan/core/trajectory.hpp"

namespace homeplan::testing {

inline StepRecord step(ActionType a, const std::string& target, ModelChoice m, bool ok = true,
                       ErrorCode code = ErrorCode::E1) {
    StepRecord s;
    s.output = make_output("", {a, target}, m);
    if (!ok) s.feedback = Feedback::failure(code);
    return s;
}

inline StepRecord end_step() { return step(ActionType::End, "", ModelChoice::M3); }

/// Twenty-step run with keypaths whose best matched fractions are
/// 1/3, 1/4, 1/2 and 2/5 respectively; TP is therefore 1/2.
struct WorkedTpExample {
    Task task;
    Trajectory trajectory;
};

inline WorkedTpExample worked_tp_example() {
    using A = ActionType;
    WorkedTpExample ex;
    ex.task.id = "drawer_can";
    ex.task.instruction = "Check the drawer and put the short can inside it";
    ex.task.attributes = {TaskAttribute::ShortHorizon, TaskAttribute::Logical};
    ex.task.scene = "kitchen_drawer.json";
    ex.task.keypaths = {
        {{A::Open, "drawer"}, {A::Pick, "bowl"}, {A::Place, "sofa"}},
        {{A::GoTo, "drawer"}, {A::Pick, "cup"}, {A::Place, "table"}, {A::Close, "drawer"}},
        {{A::Open, "drawer"}, {A::Place, "drawer"}},
        {{A::GoTo, "drawer"}, {A::Open, "drawer"}, {A::Pick, "lemon"}, {A::Place, "drawer"}, {A::Close, "drawer"}},
    };
    ex.task.expert_length = 6;

    Trajectory t(ex.task.id, 0);
    t.append(step(A::GoTo, "drawer", ModelChoice::NoMaD));
    t.append(step(A::Open, "drawer", ModelChoice::Octo));
    t.append(step(A::GoTo, "short_can", ModelChoice::PixNav));
    t.append(step(A::Pick, "short_can", ModelChoice::RT1X));
    t.append(step(A::GoTo, "drawer", ModelChoice::NoMaD));
    // Putting the can away keeps failing, so progress never reaches node 2 of path 3.
    for (int i = 0; i < 15; ++i) {
        if (i % 3 == 2) {
            t.append(step(A::GoTo, "drawer", ModelChoice::NoMaD));
        } else {
            t.append(step(A::Place, "drawer", ModelChoice::RT1X, false, i % 2 ? ErrorCode::D2 : ErrorCode::E1));
        }
    }
    t.finish(Termination::Budget);
    ex.trajectory = std::move(t);
    return ex;
}

/// Successful trajectories whose failed steps carry exactly the given code
/// counts, padded with successful steps up to `total_steps`. Each
/// trajectory completes the single-node keypath [Pick apple] and ends.
inline std::vector<Trajectory> successful_runs_with_failures(const std::vector<std::pair<ErrorCode, int>>& counts,
                                                             int total_steps, const std::string& task_id,
                                                             int failures_per_run = 6) {
    using A = ActionType;
    std::vector<ErrorCode> codes;
    for (auto [code, n] : counts) codes.insert(codes.end(), static_cast<std::size_t>(n), code);
    const int failed = static_cast<int>(codes.size());
    const int runs = (failed + failures_per_run - 1) / failures_per_run;
    const int successes = total_steps - failed;

    std::vector<Trajectory> out;
    std::size_t next_code = 0;
    for (int r = 0; r < runs; ++r) {
        Trajectory t(task_id, r);
        const int my_fail = std::min(failures_per_run, failed - r * failures_per_run);
        const int my_ok = successes / runs + (r < successes % runs ? 1 : 0);
        const int filler = my_ok - 2;  // Pick apple + End are the last two
        for (int i = 0; i < std::max(my_fail, filler); ++i) {
            if (i < my_fail) {
                const ErrorCode c = codes[next_code++];
                t.append(step(A::Pick, "apple", ModelChoice::RT1X, false, c));
            }
            if (i < filler) t.append(step(A::GoTo, "fridge", ModelChoice::NoMaD));
        }
        t.append(step(A::Pick, "apple", ModelChoice::RT1X));
        t.append(end_step());
        t.finish(Termination::End);
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace homeplan::testing
