#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace homeplan {

// ============================================================================
// Closed vocabularies
// ============================================================================

enum class ActionType { GoTo, Pick, Place, Open, Close, End };

enum class ModelChoice { M3, RT1X, Octo, NoMaD, PixNav };
enum class ModelCategory { Manipulation, Navigation, Unified };

enum class ErrorCode { L1, L2, L3, L4, D1, D2, F1, F2, E1, E2 };
enum class ErrorCategory { Logical, Distance, Format, Execution };

enum class TaskAttribute { ShortHorizon, LongHorizon, OpenEnded, Logical, HumanStyle };

inline constexpr std::array<ActionType, 6> kAllActions = {
    ActionType::GoTo, ActionType::Pick, ActionType::Place,
    ActionType::Open, ActionType::Close, ActionType::End};
inline constexpr std::array<ModelChoice, 5> kAllModels = {
    ModelChoice::M3, ModelChoice::RT1X, ModelChoice::Octo, ModelChoice::NoMaD, ModelChoice::PixNav};
inline constexpr std::array<ErrorCode, 10> kAllErrorCodes = {
    ErrorCode::L1, ErrorCode::L2, ErrorCode::L3, ErrorCode::L4, ErrorCode::D1,
    ErrorCode::D2, ErrorCode::F1, ErrorCode::F2, ErrorCode::E1, ErrorCode::E2};
inline constexpr std::array<ErrorCategory, 4> kAllErrorCategories = {
    ErrorCategory::Logical, ErrorCategory::Distance, ErrorCategory::Format, ErrorCategory::Execution};
inline constexpr std::array<TaskAttribute, 5> kAllAttributes = {
    TaskAttribute::ShortHorizon, TaskAttribute::LongHorizon, TaskAttribute::OpenEnded,
    TaskAttribute::Logical, TaskAttribute::HumanStyle};

/// Wire names: "Go to", "Pick", "Put", "Open", "Close", "End".
std::string_view to_string(ActionType action);
/// Accepts the wire names case-insensitively plus the aliases "place" and "goto".
std::optional<ActionType> parse_action(std::string_view text);

/// Wire names: "M3", "RT-1-X", "Octo", "NoMaD", "PixNav".
std::string_view to_string(ModelChoice model);
/// Case-insensitive, ignores punctuation ("rt1x" == "RT-1-X").
std::optional<ModelChoice> parse_model(std::string_view text);
ModelCategory category(ModelChoice model);

std::string_view to_string(ErrorCode code);
std::optional<ErrorCode> parse_error_code(std::string_view text);
ErrorCategory category(ErrorCode code);
/// Single letter used in report columns: L, D, F, E.
std::string_view to_string(ErrorCategory cat);

/// Feedback text returned to the planner for each failure code.
std::string_view canonical_message(ErrorCode code);
inline constexpr std::string_view kSuccessMessage = "success";

std::string_view to_string(TaskAttribute attr);
std::optional<TaskAttribute> parse_attribute(std::string_view text);

// ============================================================================
// Planning units
// ============================================================================

/// One (action, target) decision. `target` is normalized and empty iff End.
struct Subtask {
    ActionType action = ActionType::End;
    std::string target;

    friend bool operator==(const Subtask&, const Subtask&) = default;
};

/// Renders "Pick apple" / "End".
std::string describe(const Subtask& subtask);

/// Planner output as emitted. Action and model stay as text so that invalid
/// outputs (F1) can still be logged, replayed and used as rejected samples.
/// `target` is always normalized.
struct PlannerOutput {
    std::string analysis;
    std::string action;
    std::string target;
    std::string model;

    std::optional<ActionType> action_type() const { return parse_action(action); }
    std::optional<ModelChoice> model_choice() const { return parse_model(model); }
    /// Present iff the action is in the closed set and the End/target rule holds.
    std::optional<Subtask> subtask() const;
    /// A well-formed End (no target).
    bool is_end() const {
        auto s = subtask();
        return s && s->action == ActionType::End;
    }

    friend bool operator==(const PlannerOutput&, const PlannerOutput&) = default;
};

/// Build a canonical output from typed parts.
PlannerOutput make_output(std::string analysis, const Subtask& subtask, ModelChoice model);

/// Single-slot hand.
struct Inventory {
    std::optional<std::string> held;

    bool empty() const { return !held.has_value(); }
    friend bool operator==(const Inventory&, const Inventory&) = default;
};

enum class Status { Success, Failure };

struct Feedback {
    Status status = Status::Success;
    std::optional<ErrorCode> code;
    std::string message{kSuccessMessage};

    static Feedback success() { return {}; }
    static Feedback failure(ErrorCode code) {
        return {Status::Failure, code, std::string(canonical_message(code))};
    }
    bool ok() const { return status == Status::Success; }

    friend bool operator==(const Feedback&, const Feedback&) = default;
};

enum class Direction { Front, Left, Back, Right };
inline constexpr std::array<Direction, 4> kAllDirections = {
    Direction::Front, Direction::Left, Direction::Back, Direction::Right};
std::string_view to_string(Direction dir);

/// Text standing in for the four first-person views, indexed by Direction.
using Observations = std::array<std::string, 4>;

// ============================================================================
// Tasks and keypaths
// ============================================================================

using Keypath = std::vector<Subtask>;
using KeypathSet = std::vector<Keypath>;

struct Task {
    std::string id;
    std::string instruction;
    std::vector<TaskAttribute> attributes;
    KeypathSet keypaths;
    int expert_length = 0;
    std::string scene;

    bool has_attribute(TaskAttribute attr) const;
};

}  // namespace homeplan
