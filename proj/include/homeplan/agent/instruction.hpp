#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "homeplan/core/environment.hpp"
#include "homeplan/core/trajectory.hpp"

namespace homeplan::agent {

struct HistoryEntry {
    PlannerOutput output;
    Feedback feedback;
    friend bool operator==(const HistoryEntry&, const HistoryEntry&) = default;
};

struct EpisodeState {
    std::string system_info;
    std::string task_text;
    Inventory inventory;
    std::vector<HistoryEntry> history;
    std::optional<Feedback> last_feedback;
    Observations observations;
    int budget_remaining = 0;

    friend bool operator==(const EpisodeState&, const EpisodeState&) = default;
};

EpisodeState initial_state(std::string system_info, std::string task_text, Observations observations, int budget);

/// What the planner is sent: constant system text plus the rendered per-step message.
struct Instruction {
    std::string system;
    std::string user;
    /// Code of the last failed step, for planners that branch on it.
    std::optional<ErrorCode> feedback_code;
    /// Optional view images passed through to remote planners; the simulator never sets these.
    std::vector<std::string> image_refs;

    std::string text() const { return system + "\n\n" + user; }
    friend bool operator==(const Instruction&, const Instruction&) = default;
};

/// User-message layout with fmt named fields: {system} {task} {inventory}
/// {history} {feedback} {observations}, and {front} {left} {back} {right} for
/// single views. Literal braces must be doubled.
class PromptTemplate {
public:
    PromptTemplate();
    explicit PromptTemplate(std::string text);

    /// Throws SchemaError if the text references an unknown field.
    static PromptTemplate from_file(const std::string& path);
    const std::string& text() const { return text_; }

private:
    std::string text_;
};

/// Built-in system text describing the skills, models and reply format.
const std::string& default_system_prompt();
const std::string& default_user_template();

std::string render_history(std::span<const HistoryEntry> history);
std::string render_feedback(const std::optional<Feedback>& feedback);
/// "[front]\n...\n[left]\n..." blocks.
std::string render_observations(const Observations& observations);

Instruction assemble_instruction(const EpisodeState& state, const PromptTemplate& tpl = PromptTemplate());

/// Post-step state update. Throws InvariantError on a successful Pick with a full hand.
void apply_feedback(EpisodeState& state, const PlannerOutput& output, const ExecOutcome& outcome);

/// Folds logged steps onto a fresh state. `current` are the views shown
/// before the next step. E2 steps are replayed with an empty hand.
EpisodeState replay(std::string system_info, std::string task_text, std::span<const StepRecord> done,
                    const Observations& current, int budget);

}  // namespace homeplan::agent
