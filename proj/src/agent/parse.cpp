#include "homeplan/agent/parse.hpp"

#include <json.hpp>

#include "homeplan/core/names.hpp"

namespace homeplan::agent {

using nlohmann::json;

namespace {

// End of the balanced {...} starting at `open`, skipping braces inside strings.
std::optional<std::size_t> matching_brace(std::string_view s, std::size_t open) {
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = open; i < s.size(); ++i) {
        const char c = s[i];
        if (in_string) {
            if (c == '\\') {
                ++i;
            } else if (c == '"') {
                in_string = false;
            }
        } else if (c == '"') {
            in_string = true;
        } else if (c == '{') {
            ++depth;
        } else if (c == '}' && --depth == 0) {
            return i;
        }
    }
    return std::nullopt;
}

std::optional<json> extract_object(std::string_view raw) {
    for (std::size_t pos = raw.find('{'); pos != std::string_view::npos; pos = raw.find('{', pos + 1)) {
        auto end = matching_brace(raw, pos);
        if (!end) continue;
        json doc = json::parse(raw.substr(pos, *end - pos + 1), nullptr, false);
        if (!doc.is_discarded() && doc.is_object()) return doc;
    }
    return std::nullopt;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    return std::string(s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1));
}

std::string canonical_action(std::string_view text) {
    auto a = parse_action(text);
    return a ? std::string(to_string(*a)) : trim(text);
}

std::string canonical_model(std::string_view text) {
    auto m = parse_model(text);
    return m ? std::string(to_string(*m)) : trim(text);
}

const json* string_field(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it != obj.end() && it->is_string() ? &*it : nullptr;
}

// (action, target) from either ["Go to", "fridge"] / ["End"] or {"action": ..., "target": ...}.
std::optional<std::pair<std::string, std::string>> read_subtask(const json& sub) {
    if (sub.is_array()) {
        if (sub.empty() || sub.size() > 2) return std::nullopt;
        for (const auto& part : sub) {
            if (!part.is_string()) return std::nullopt;
        }
        return std::pair{sub[0].get<std::string>(), sub.size() == 2 ? sub[1].get<std::string>() : std::string{}};
    }
    if (sub.is_object()) {
        const json* action = string_field(sub, "action");
        if (!action) return std::nullopt;
        std::string target;
        if (sub.contains("target")) {
            if (sub["target"].is_string()) {
                target = sub["target"].get<std::string>();
            } else if (!sub["target"].is_null()) {
                return std::nullopt;
            }
        }
        return std::pair{action->get<std::string>(), target};
    }
    return std::nullopt;
}

}  // namespace

std::string ParseFailure::describe() const {
    switch (reason) {
        case Reason::NoStructuredObject: return "no JSON object found";
        case Reason::MissingField: return "missing field \"" + field + "\"";
        case Reason::MalformedSubtask: return "malformed subtask";
    }
    return "?";
}

ParseResult parse_planner_output(std::string_view raw) {
    using R = ParseFailure::Reason;
    auto doc = extract_object(raw);
    if (!doc) return ParseFailure{R::NoStructuredObject, ""};

    const json* analysis = string_field(*doc, "analysis");
    if (!analysis) return ParseFailure{R::MissingField, "analysis"};
    if (!doc->contains("subtask")) return ParseFailure{R::MissingField, "subtask"};
    auto sub = read_subtask((*doc)["subtask"]);
    if (!sub) return ParseFailure{R::MalformedSubtask, ""};
    const json* model = string_field(*doc, "model");
    if (!model) return ParseFailure{R::MissingField, "model"};

    PlannerOutput out;
    out.analysis = analysis->get<std::string>();
    out.action = canonical_action(sub->first);
    out.target = normalize_name(sub->second);
    out.model = canonical_model(model->get<std::string>());
    return out;
}

std::optional<Subtask> validate_output(const PlannerOutput& output) {
    if (!output.model_choice()) return std::nullopt;
    return output.subtask();
}

std::string format_planner_output(const PlannerOutput& output) {
    nlohmann::ordered_json doc;
    doc["analysis"] = output.analysis;
    doc["subtask"] = output.target.empty() ? nlohmann::ordered_json::array({output.action})
                                           : nlohmann::ordered_json::array({output.action, output.target});
    doc["model"] = output.model;
    return doc.dump();
}

PlannerOutput failed_parse_output(std::string_view raw, const ParseFailure& failure) {
    PlannerOutput out;
    auto doc = failure.reason == ParseFailure::Reason::NoStructuredObject ? std::nullopt : extract_object(raw);
    if (!doc) {
        out.analysis = std::string(raw);
        return out;
    }
    if (const json* a = string_field(*doc, "analysis")) out.analysis = a->get<std::string>();
    if (doc->contains("subtask")) {
        if (auto sub = read_subtask((*doc)["subtask"])) {
            out.action = canonical_action(sub->first);
            out.target = normalize_name(sub->second);
        }
    }
    if (const json* m = string_field(*doc, "model")) out.model = canonical_model(m->get<std::string>());
    return out;
}

}  // namespace homeplan::agent
