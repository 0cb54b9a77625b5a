#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "homeplan/core/types.hpp"

namespace homeplan::agent {

struct ParseFailure {
    enum class Reason { NoStructuredObject, MissingField, MalformedSubtask };
    Reason reason;
    std::string field;  // MissingField only

    std::string describe() const;
    friend bool operator==(const ParseFailure&, const ParseFailure&) = default;
};

using ParseResult = std::variant<PlannerOutput, ParseFailure>;

/// Finds the first JSON object in free text (code fences and prose allowed)
/// and reads analysis / subtask / model from it. Known action and model
/// names are canonicalized; unknown ones are kept verbatim for F1 logging.
ParseResult parse_planner_output(std::string_view raw);

/// Subtask when the output is executable, nullopt when it is an F1.
std::optional<Subtask> validate_output(const PlannerOutput& output);

/// Compact reply text {"analysis", "subtask": [action, target], "model"};
/// End renders as ["End"]. Parses back to the same output.
std::string format_planner_output(const PlannerOutput& output);

/// How a ParseFailure is logged: an F1 step carrying whatever was recovered.
PlannerOutput failed_parse_output(std::string_view raw, const ParseFailure& failure);

}  // namespace homeplan::agent
