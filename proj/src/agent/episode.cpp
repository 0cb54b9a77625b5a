#include "homeplan/agent/episode.hpp"

#include <variant>

#include <fmt/format.h>

#include "homeplan/agent/parse.hpp"
#include "homeplan/core/errors.hpp"

namespace homeplan::agent {

Trajectory run_episode(Environment& env, Planner& planner, const Task& task, const EpisodeOptions& options,
                       int run_index, Transcript* transcript) {
    if (options.budget < 1 || options.max_attempts < 1 || options.max_attempts > kMaxRetries + 1) {
        throw std::invalid_argument("episode budget and attempts must be positive and attempts at most 3");
    }
    Trajectory traj(task.id, run_index);
    EpisodeState state = initial_state(options.system_info, task.instruction, env.observe(), options.budget);

    while (state.budget_remaining > 0) {
        const Instruction instruction = assemble_instruction(state, options.prompt);
        std::string raw;
        try {
            raw = planner.next(instruction);
        } catch (const PlannerTransportError& e) {
            traj.finish(Termination::Aborted);
            throw EpisodeAborted(fmt::format("{} run {}: {}", task.id, run_index, e.what()), std::move(traj));
        }
        if (transcript) transcript->push_back({instruction, raw});

        StepRecord step;
        step.observations = state.observations;
        ExecOutcome outcome;
        std::optional<Subtask> subtask;

        ParseResult parsed = parse_planner_output(raw);
        if (auto* failure = std::get_if<ParseFailure>(&parsed)) {
            step.output = failed_parse_output(raw, *failure);
        } else {
            step.output = std::get<PlannerOutput>(parsed);
            subtask = validate_output(step.output);
        }

        if (!subtask) {
            outcome.feedback = Feedback::failure(ErrorCode::F1);
        } else if (subtask->action == ActionType::End) {
            outcome.feedback = Feedback::success();
        } else {
            for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
                outcome = env.execute(*subtask, state.inventory);
                step.retries_used = attempt;
                if (outcome.feedback.code != ErrorCode::E1) break;
            }
            if (outcome.feedback.code == ErrorCode::F1) throw InvariantError("environment produced a format error");
        }

        step.feedback = outcome.feedback;
        apply_feedback(state, step.output, outcome);
        const bool end = step.is_end();
        traj.append(std::move(step));
        if (end) {
            traj.finish(Termination::End);
            return traj;
        }
    }
    traj.finish(Termination::Budget);
    return traj;
}

}  // namespace homeplan::agent
