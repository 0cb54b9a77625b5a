#include "homeplan/planners/scripted.hpp"

#include <variant>

#include <fmt/format.h>

#include "homeplan/agent/parse.hpp"
#include "homeplan/core/errors.hpp"

namespace homeplan::planners {

using nlohmann::json;

std::string end_reply() {
    return agent::format_planner_output(make_output("the task is complete", {ActionType::End, ""}, ModelChoice::M3));
}

namespace {

std::string reply_text(const json& j, const std::string& path) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_object()) return j.dump();
    throw SchemaError(path, "expected a reply string or object");
}

std::map<ErrorCode, std::vector<std::string>> read_branches(const json& j, const std::string& path) {
    if (!j.is_object()) throw SchemaError(path, "expected an object keyed by error code");
    std::map<ErrorCode, std::vector<std::string>> out;
    for (const auto& [key, list] : j.items()) {
        auto code = parse_error_code(key);
        if (!code) throw SchemaError(path, fmt::format("unknown error code \"{}\"", key));
        if (!list.is_array()) throw SchemaError(path + "." + key, "expected a list");
        auto& replies = out[*code];
        for (std::size_t i = 0; i < list.size(); ++i) {
            replies.push_back(reply_text(list[i], fmt::format("{}.{}[{}]", path, key, i)));
        }
    }
    return out;
}

std::string substitute_target(std::string text, const std::string& target) {
    static constexpr std::string_view kField = "{target}";
    for (auto pos = text.find(kField); pos != std::string::npos; pos = text.find(kField, pos + target.size())) {
        text.replace(pos, kField.size(), target);
    }
    return text;
}

}  // namespace

ScriptedPlan ScriptedPlan::from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("steps") || !doc["steps"].is_array()) {
        throw SchemaError("steps", "a plan needs a \"steps\" list");
    }
    ScriptedPlan plan;
    const json& steps = doc["steps"];
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const std::string path = fmt::format("steps[{}]", i);
        const json& s = steps[i];
        ScriptEntry entry;
        if (s.is_object() && s.contains("reply")) {
            entry.text = reply_text(s["reply"], path + ".reply");
            if (s.contains("on")) entry.on = read_branches(s["on"], path + ".on");
        } else {
            entry.text = reply_text(s, path);
        }
        plan.steps.push_back(std::move(entry));
    }
    if (doc.contains("branches")) plan.branches = read_branches(doc["branches"], "branches");
    return plan;
}

ScriptedPlan load_scripted_plan(std::string_view bytes) {
    json doc = json::parse(bytes.begin(), bytes.end(), nullptr, false);
    if (doc.is_discarded()) throw SchemaError("", "plan is not valid JSON");
    return ScriptedPlan::from_json(doc);
}

std::string ScriptedPlanner::next(const agent::Instruction& instruction) {
    if (!pending_.empty()) {
        std::string text = std::move(pending_.front());
        pending_.pop_front();
        last_was_plain_ = false;
        return text;
    }
    if (reissue_pending_) {
        reissue_pending_ = false;
        last_was_plain_ = true;
        return plan_.steps[*last_plain_].text;
    }

    if (last_was_plain_ && instruction.feedback_code) {
        const ScriptEntry& failed = plan_.steps[*last_plain_];
        const std::vector<std::string>* branch = nullptr;
        if (auto it = failed.on.find(*instruction.feedback_code); it != failed.on.end()) {
            branch = &it->second;
        } else if (auto pit = plan_.branches.find(*instruction.feedback_code); pit != plan_.branches.end()) {
            branch = &pit->second;
        }
        if (branch && !branch->empty()) {
            auto parsed = agent::parse_planner_output(failed.text);
            const std::string target =
                std::holds_alternative<PlannerOutput>(parsed) ? std::get<PlannerOutput>(parsed).target : "";
            for (const auto& text : *branch) pending_.push_back(substitute_target(text, target));
            reissue_pending_ = true;
            last_was_plain_ = false;
            std::string first = std::move(pending_.front());
            pending_.pop_front();
            return first;
        }
    }

    if (cursor_ < plan_.steps.size()) {
        last_plain_ = cursor_;
        last_was_plain_ = true;
        return plan_.steps[cursor_++].text;
    }
    last_was_plain_ = false;
    return end_reply();
}

}  // namespace homeplan::planners
