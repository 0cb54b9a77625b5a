#include "homeplan/agent/instruction.hpp"

#include <fmt/args.h>
#include <fmt/format.h>

#include "homeplan/core/errors.hpp"
#include "homeplan/core/schema.hpp"

namespace homeplan::agent {

const std::string& default_system_prompt() {
    static const std::string text = R"(You are the planner for a household robot. Each turn you receive the task, what the robot is holding, the steps taken so far with their results, the feedback from the last step, and a text description of what the robot sees facing front, left, back and right.

Choose exactly one next subtask. Available actions:
- Go to <target>: move next to a place, receptacle or object.
- Pick <target>: grasp an object. The hand holds one object at a time.
- Put <target>: put the held object in or on the named receptacle.
- Open <target> / Close <target>: open or close a container.
- End: the task is complete. End takes no target.

Available execution models:
- NoMaD, PixNav: navigation.
- RT-1-X, Octo: manipulation.
- M3: navigation or manipulation.

Only name things that appear in the observations. When the feedback reports a failure, change the plan rather than repeating the same step.

Reply with one JSON object and nothing else:
{"analysis": "<short reasoning>", "subtask": ["<action>", "<target>"], "model": "<model>"}
For End use "subtask": ["End"].)";
    return text;
}

const std::string& default_user_template() {
    static const std::string text =
        "Task: {task}\n"
        "Inventory: {inventory}\n"
        "History: {history}\n"
        "Feedback: {feedback}\n"
        "Observations:\n"
        "{observations}";
    return text;
}

namespace {

std::string fill(const std::string& tpl, const std::string& system, const std::string& task, const std::string& inventory,
                 const std::string& history, const std::string& feedback, const Observations& obs) {
    fmt::dynamic_format_arg_store<fmt::format_context> args;
    args.push_back(fmt::arg("system", system));
    args.push_back(fmt::arg("task", task));
    args.push_back(fmt::arg("inventory", inventory));
    args.push_back(fmt::arg("history", history));
    args.push_back(fmt::arg("feedback", feedback));
    args.push_back(fmt::arg("observations", render_observations(obs)));
    args.push_back(fmt::arg("front", obs[0]));
    args.push_back(fmt::arg("left", obs[1]));
    args.push_back(fmt::arg("back", obs[2]));
    args.push_back(fmt::arg("right", obs[3]));
    return fmt::vformat(tpl, args);
}

}  // namespace

PromptTemplate::PromptTemplate() : text_(default_user_template()) {}

PromptTemplate::PromptTemplate(std::string text) : text_(std::move(text)) {
    try {
        fill(text_, "", "", "", "", "", {});
    } catch (const fmt::format_error& e) {
        throw SchemaError("template", e.what());
    }
}

PromptTemplate PromptTemplate::from_file(const std::string& path) {
    std::string text = read_file(path);
    while (!text.empty() && text.back() == '\n') text.pop_back();
    return PromptTemplate(std::move(text));
}

EpisodeState initial_state(std::string system_info, std::string task_text, Observations observations, int budget) {
    EpisodeState s;
    s.system_info = std::move(system_info);
    s.task_text = std::move(task_text);
    s.observations = std::move(observations);
    s.budget_remaining = budget;
    return s;
}

std::string render_feedback(const std::optional<Feedback>& feedback) {
    if (!feedback) return "none";
    if (feedback->ok()) return std::string(kSuccessMessage);
    return "failure, " + feedback->message;
}

std::string render_observations(const Observations& observations) {
    std::string out;
    for (Direction d : kAllDirections) {
        if (!out.empty()) out += '\n';
        out += fmt::format("[{}]\n{}", to_string(d), observations[static_cast<std::size_t>(d)]);
    }
    return out;
}

std::string render_history(std::span<const HistoryEntry> history) {
    if (history.empty()) return "none";
    std::string out;
    for (std::size_t i = 0; i < history.size(); ++i) {
        const PlannerOutput& o = history[i].output;
        std::string what = o.action;
        if (!o.target.empty()) what += (what.empty() ? "" : " ") + o.target;
        if (what.empty()) what = "(no action)";
        out += fmt::format("\n{}. {}: {}", i + 1, what, render_feedback(history[i].feedback));
    }
    return out;
}

Instruction assemble_instruction(const EpisodeState& state, const PromptTemplate& tpl) {
    const std::string inventory = state.inventory.held.value_or("empty");
    Instruction out;
    out.system = state.system_info;
    out.user = fill(tpl.text(), state.system_info, state.task_text, inventory, render_history(state.history),
                    render_feedback(state.last_feedback), state.observations);
    if (state.last_feedback) out.feedback_code = state.last_feedback->code;
    return out;
}

void apply_feedback(EpisodeState& state, const PlannerOutput& output, const ExecOutcome& outcome) {
    const Feedback& fb = outcome.feedback;
    if (fb.ok()) {
        if (auto s = output.subtask()) {
            if (s->action == ActionType::Pick) {
                if (state.inventory.held) {
                    throw InvariantError(fmt::format("Pick {} succeeded while holding {}", s->target,
                                                     *state.inventory.held));
                }
                state.inventory.held = s->target;
            } else if (s->action == ActionType::Place) {
                state.inventory.held.reset();
            }
        }
    } else if (outcome.inventory_correction) {
        state.inventory = *outcome.inventory_correction;
    }
    if (outcome.observations) state.observations = *outcome.observations;
    state.history.push_back({output, fb});
    state.last_feedback = fb;
    --state.budget_remaining;
}

EpisodeState replay(std::string system_info, std::string task_text, std::span<const StepRecord> done,
                    const Observations& current, int budget) {
    EpisodeState state = initial_state(std::move(system_info), std::move(task_text), current, budget);
    for (const StepRecord& step : done) {
        ExecOutcome o{step.feedback, std::nullopt, std::nullopt};
        if (step.feedback.code == ErrorCode::E2) o.inventory_correction = Inventory{};
        apply_feedback(state, step.output, o);
    }
    state.observations = current;
    return state;
}

}  // namespace homeplan::agent
