#include "homeplan/core/types.hpp"

#include <algorithm>
#include <cctype>

#include "homeplan/core/names.hpp"

namespace homeplan {

namespace {

// Lowercase alphanumerics only.
std::string squash(std::string_view text) {
    std::string out;
    for (unsigned char c : text) {
        if (std::isalnum(c)) out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

}  // namespace

std::string_view to_string(ActionType action) {
    switch (action) {
        case ActionType::GoTo: return "Go to";
        case ActionType::Pick: return "Pick";
        case ActionType::Place: return "Put";
        case ActionType::Open: return "Open";
        case ActionType::Close: return "Close";
        case ActionType::End: return "End";
    }
    return "?";
}

std::optional<ActionType> parse_action(std::string_view text) {
    const std::string n = normalize_name(text);
    if (n == "go_to" || n == "goto") return ActionType::GoTo;
    if (n == "pick") return ActionType::Pick;
    if (n == "put" || n == "place") return ActionType::Place;
    if (n == "open") return ActionType::Open;
    if (n == "close") return ActionType::Close;
    if (n == "end") return ActionType::End;
    return std::nullopt;
}

std::string_view to_string(ModelChoice model) {
    switch (model) {
        case ModelChoice::M3: return "M3";
        case ModelChoice::RT1X: return "RT-1-X";
        case ModelChoice::Octo: return "Octo";
        case ModelChoice::NoMaD: return "NoMaD";
        case ModelChoice::PixNav: return "PixNav";
    }
    return "?";
}

std::optional<ModelChoice> parse_model(std::string_view text) {
    const std::string s = squash(text);
    // Reject anything with stray characters other than punctuation/space.
    for (unsigned char c : text) {
        if (!std::isalnum(c) && c != '-' && c != '_' && c != ' ') return std::nullopt;
    }
    for (ModelChoice m : kAllModels) {
        if (squash(to_string(m)) == s) return m;
    }
    return std::nullopt;
}

ModelCategory category(ModelChoice model) {
    switch (model) {
        case ModelChoice::RT1X:
        case ModelChoice::Octo: return ModelCategory::Manipulation;
        case ModelChoice::NoMaD:
        case ModelChoice::PixNav: return ModelCategory::Navigation;
        case ModelChoice::M3: return ModelCategory::Unified;
    }
    return ModelCategory::Unified;
}

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::L1: return "L1";
        case ErrorCode::L2: return "L2";
        case ErrorCode::L3: return "L3";
        case ErrorCode::L4: return "L4";
        case ErrorCode::D1: return "D1";
        case ErrorCode::D2: return "D2";
        case ErrorCode::F1: return "F1";
        case ErrorCode::F2: return "F2";
        case ErrorCode::E1: return "E1";
        case ErrorCode::E2: return "E2";
    }
    return "?";
}

std::optional<ErrorCode> parse_error_code(std::string_view text) {
    for (ErrorCode c : kAllErrorCodes) {
        if (to_string(c) == text) return c;
    }
    return std::nullopt;
}

ErrorCategory category(ErrorCode code) {
    switch (code) {
        case ErrorCode::L1:
        case ErrorCode::L2:
        case ErrorCode::L3:
        case ErrorCode::L4: return ErrorCategory::Logical;
        case ErrorCode::D1:
        case ErrorCode::D2: return ErrorCategory::Distance;
        case ErrorCode::F1:
        case ErrorCode::F2: return ErrorCategory::Format;
        case ErrorCode::E1:
        case ErrorCode::E2: return ErrorCategory::Execution;
    }
    return ErrorCategory::Execution;
}

std::string_view to_string(ErrorCategory cat) {
    switch (cat) {
        case ErrorCategory::Logical: return "L";
        case ErrorCategory::Distance: return "D";
        case ErrorCategory::Format: return "F";
        case ErrorCategory::Execution: return "E";
    }
    return "?";
}

std::string_view canonical_message(ErrorCode code) {
    switch (code) {
        case ErrorCode::L1: return "the hand is full";
        case ErrorCode::L2: return "the hand is empty";
        case ErrorCode::L3: return "the container is closed, you should open it first";
        case ErrorCode::L4: return "please choose another object";
        case ErrorCode::D1: return "the target is far away";
        case ErrorCode::D2: return "the target is too close";
        case ErrorCode::F1: return "You should only choose actions in the list";
        case ErrorCode::F2: return "please choose another object";
        case ErrorCode::E1: return "the subtask is too difficult to perform";
        case ErrorCode::E2: return "the object is missing";
    }
    return "";
}

std::string_view to_string(TaskAttribute attr) {
    switch (attr) {
        case TaskAttribute::ShortHorizon: return "short_horizon";
        case TaskAttribute::LongHorizon: return "long_horizon";
        case TaskAttribute::OpenEnded: return "open_ended";
        case TaskAttribute::Logical: return "logical";
        case TaskAttribute::HumanStyle: return "human_style";
    }
    return "?";
}

std::optional<TaskAttribute> parse_attribute(std::string_view text) {
    const std::string n = normalize_name(text);
    for (TaskAttribute a : kAllAttributes) {
        if (to_string(a) == n) return a;
    }
    return std::nullopt;
}

std::string_view to_string(Direction dir) {
    switch (dir) {
        case Direction::Front: return "front";
        case Direction::Left: return "left";
        case Direction::Back: return "back";
        case Direction::Right: return "right";
    }
    return "?";
}

std::string describe(const Subtask& subtask) {
    std::string out(to_string(subtask.action));
    if (!subtask.target.empty()) {
        out += ' ';
        out += subtask.target;
    }
    return out;
}

std::optional<Subtask> PlannerOutput::subtask() const {
    auto act = action_type();
    if (!act) return std::nullopt;
    const bool is_end = *act == ActionType::End;
    if (is_end != target.empty()) return std::nullopt;
    return Subtask{*act, target};
}

PlannerOutput make_output(std::string analysis, const Subtask& subtask, ModelChoice model) {
    return PlannerOutput{std::move(analysis), std::string(to_string(subtask.action)),
                         normalize_name(subtask.target), std::string(to_string(model))};
}

bool Task::has_attribute(TaskAttribute attr) const {
    return std::find(attributes.begin(), attributes.end(), attr) != attributes.end();
}

}  // namespace homeplan
