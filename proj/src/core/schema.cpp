#include "homeplan/core/schema.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "homeplan/core/errors.hpp"
#include "homeplan/core/names.hpp"

namespace homeplan {

using nlohmann::json;

namespace {

std::string canonical_dump(const json& doc) { return doc.dump(2) + "\n"; }

json parse_json(std::string_view bytes) {
    try {
        return json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        throw SchemaError("", fmt::format("not valid JSON ({})", e.what()));
    }
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) throw SchemaError(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(path.empty() ? key : path + "." + key, "missing field");
    return *it;
}

std::string child(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

std::string require_string(const json& obj, const std::string& key, const std::string& path) {
    const json& v = require(obj, key, path);
    if (!v.is_string()) throw SchemaError(child(path, key), "expected a string");
    return v.get<std::string>();
}

long long require_int(const json& obj, const std::string& key, const std::string& path) {
    const json& v = require(obj, key, path);
    if (!v.is_number_integer()) throw SchemaError(child(path, key), "expected an integer");
    return v.get<long long>();
}

const json& require_array(const json& obj, const std::string& key, const std::string& path) {
    const json& v = require(obj, key, path);
    if (!v.is_array()) throw SchemaError(child(path, key), "expected a list");
    return v;
}

Subtask parse_node(const json& node, const std::string& path) {
    const std::string action_text = require_string(node, "action", path);
    auto action = parse_action(action_text);
    if (!action) {
        throw SchemaError(child(path, "action"), fmt::format("unknown action \"{}\"", action_text));
    }
    if (*action == ActionType::End) {
        throw SchemaError(child(path, "action"), "keypath nodes cannot be End");
    }
    std::string target = normalize_name(require_string(node, "target", path));
    if (target.empty()) throw SchemaError(child(path, "target"), "empty target");
    return {*action, std::move(target)};
}

KeypathSet parse_keypath_set(const json& list, const std::string& path) {
    if (!list.is_array()) throw SchemaError(path, "expected a list of keypaths");
    if (list.empty()) throw SchemaError(path, "empty keypath set");
    KeypathSet out;
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string kp_path = fmt::format("{}[{}]", path, i);
        const json& kp = list[i];
        if (!kp.is_array()) throw SchemaError(kp_path, "expected a list of nodes");
        if (kp.empty()) throw SchemaError(kp_path, "empty keypath");
        Keypath nodes;
        for (std::size_t j = 0; j < kp.size(); ++j) {
            nodes.push_back(parse_node(kp[j], fmt::format("{}[{}]", kp_path, j)));
        }
        out.push_back(std::move(nodes));
    }
    return out;
}

json keypath_set_json(const KeypathSet& set) {
    json list = json::array();
    for (const auto& kp : set) {
        json nodes = json::array();
        for (const auto& n : kp) {
            nodes.push_back({{"action", to_string(n.action)}, {"target", n.target}});
        }
        list.push_back(std::move(nodes));
    }
    return list;
}

Task task_from_json(const json& doc) {
    Task task;
    task.id = require_string(doc, "id", "");
    if (task.id.empty()) throw SchemaError("id", "empty task id");
    task.instruction = require_string(doc, "instruction", "");
    task.scene = require_string(doc, "scene", "");

    const json& attrs = require_array(doc, "attributes", "");
    if (attrs.empty()) throw SchemaError("attributes", "at least one attribute is required");
    for (std::size_t i = 0; i < attrs.size(); ++i) {
        const std::string p = fmt::format("attributes[{}]", i);
        if (!attrs[i].is_string()) throw SchemaError(p, "expected a string");
        auto a = parse_attribute(attrs[i].get<std::string>());
        if (!a) throw SchemaError(p, fmt::format("unknown attribute \"{}\"", attrs[i].get<std::string>()));
        if (!task.has_attribute(*a)) task.attributes.push_back(*a);
    }

    task.keypaths = parse_keypath_set(require(doc, "keypaths", ""), "keypaths");

    const long long expert = require_int(doc, "expert_length", "");
    std::size_t longest = 0;
    for (const auto& kp : task.keypaths) longest = std::max(longest, kp.size());
    if (expert < 1) throw SchemaError("expert_length", "must be positive");
    if (static_cast<std::size_t>(expert) < longest) {
        throw SchemaError("expert_length",
                          fmt::format("{} is shorter than the longest keypath ({} nodes)", expert, longest));
    }
    task.expert_length = static_cast<int>(expert);
    return task;
}

json observations_json(const Observations& obs) {
    json o = json::object();
    for (Direction d : kAllDirections) o[std::string(to_string(d))] = obs[static_cast<std::size_t>(d)];
    return o;
}

Observations parse_observations(const json& v, const std::string& path) {
    Observations obs;
    for (Direction d : kAllDirections) {
        obs[static_cast<std::size_t>(d)] = require_string(v, std::string(to_string(d)), path);
    }
    return obs;
}

StepRecord parse_step(const json& s, const std::string& path) {
    StepRecord step;
    step.index = static_cast<int>(require_int(s, "index", path));
    step.output.analysis = require_string(s, "analysis", path);
    step.output.action = require_string(s, "action", path);
    step.output.target = normalize_name(require_string(s, "target", path));
    step.output.model = require_string(s, "model", path);

    const std::string status = require_string(s, "status", path);
    if (status == "success") {
        if (s.contains("error_code")) throw SchemaError(child(path, "error_code"), "successful step carries an error code");
        step.feedback = Feedback::success();
        if (s.contains("message")) {
            const json& m = s["message"];
            if (!m.is_string() || m.get<std::string>() != kSuccessMessage) {
                throw SchemaError(child(path, "message"), "unexpected message on a successful step");
            }
        }
    } else if (status == "failure") {
        const std::string code_text = require_string(s, "error_code", path);
        auto code = parse_error_code(code_text);
        if (!code) throw SchemaError(child(path, "error_code"), fmt::format("unknown error code \"{}\"", code_text));
        step.feedback = Feedback::failure(*code);
        if (s.contains("message")) {
            const json& m = s["message"];
            if (!m.is_string() || m.get<std::string>() != canonical_message(*code)) {
                throw SchemaError(child(path, "message"),
                                  fmt::format("message does not match the canonical text for {}", code_text));
            }
        }
    } else {
        throw SchemaError(child(path, "status"), fmt::format("unknown status \"{}\"", status));
    }

    const long long retries = require_int(s, "retries_used", path);
    if (retries < 0 || retries > kMaxRetries) {
        throw SchemaError(child(path, "retries_used"), fmt::format("{} outside 0..{}", retries, kMaxRetries));
    }
    step.retries_used = static_cast<int>(retries);

    if (s.contains("observations")) {
        step.observations = parse_observations(s["observations"], child(path, "observations"));
    }
    return step;
}

json step_json(const StepRecord& step) {
    json s = {
        {"index", step.index},
        {"analysis", step.output.analysis},
        {"action", step.output.action},
        {"target", step.output.target},
        {"model", step.output.model},
        {"status", step.feedback.ok() ? "success" : "failure"},
        {"retries_used", step.retries_used},
    };
    if (!step.feedback.ok()) {
        s["error_code"] = to_string(*step.feedback.code);
        s["message"] = step.feedback.message;
    }
    if (step.observations) s["observations"] = observations_json(*step.observations);
    return s;
}

}  // namespace

Task parse_task_file(std::string_view bytes) { return task_from_json(parse_json(bytes)); }

std::string serialize_task(const Task& task) {
    json attrs = json::array();
    for (auto a : task.attributes) attrs.push_back(to_string(a));
    json doc = {
        {"id", task.id},
        {"instruction", task.instruction},
        {"attributes", attrs},
        {"expert_length", task.expert_length},
        {"scene", task.scene},
        {"keypaths", keypath_set_json(task.keypaths)},
    };
    return canonical_dump(doc);
}

std::map<std::string, KeypathSet> parse_keypath_file(std::string_view bytes) {
    const json doc = parse_json(bytes);
    if (!doc.is_object()) throw SchemaError("", "expected an object keyed by task id");
    std::map<std::string, KeypathSet> out;
    for (const auto& [id, set] : doc.items()) out.emplace(id, parse_keypath_set(set, id));
    return out;
}

std::string serialize_keypath_file(const std::map<std::string, KeypathSet>& keypaths) {
    json doc = json::object();
    for (const auto& [id, set] : keypaths) doc[id] = keypath_set_json(set);
    return canonical_dump(doc);
}

Trajectory parse_trajectory_log(std::string_view bytes) {
    const json doc = parse_json(bytes);
    const std::string task_id = require_string(doc, "task_id", "");
    const long long run_index = require_int(doc, "run_index", "");
    const std::string term_text = require_string(doc, "terminated_by", "");
    auto term = parse_termination(term_text);
    if (!term) throw SchemaError("terminated_by", fmt::format("unknown termination \"{}\"", term_text));

    Trajectory traj(task_id, static_cast<int>(run_index));
    const json& steps = require_array(doc, "steps", "");
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const std::string path = fmt::format("steps[{}]", i);
        StepRecord step = parse_step(steps[i], path);
        if (step.index != static_cast<int>(i) + 1) {
            throw SchemaError(child(path, "index"),
                              fmt::format("index {} breaks the 1..n sequence (expected {})", step.index, i + 1));
        }
        traj.append(std::move(step));
    }
    traj.finish(*term);
    return traj;
}

std::string serialize_trajectory(const Trajectory& trajectory) {
    json steps = json::array();
    for (const auto& s : trajectory.steps()) steps.push_back(step_json(s));
    json doc = {
        {"task_id", trajectory.task_id()},
        {"run_index", trajectory.run_index()},
        {"steps", steps},
        {"terminated_by", trajectory.termination() ? to_string(*trajectory.termination()) : "aborted"},
    };
    return canonical_dump(doc);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(fmt::format("cannot open {}", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::vector<Task> load_task_dir(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw std::runtime_error(fmt::format("tasks directory {} not found", dir.string()));

    std::map<std::string, KeypathSet> standalone;
    const fs::path kp_file = dir / "keypaths.json";
    if (fs::exists(kp_file)) standalone = parse_keypath_file(read_file(kp_file));

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json" && entry.path() != kp_file) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());

    std::vector<Task> tasks;
    for (const auto& f : files) {
        try {
            json doc = parse_json(read_file(f));
            if (doc.is_object() && !doc.contains("keypaths") && doc.contains("id") && doc["id"].is_string()) {
                auto it = standalone.find(doc["id"].get<std::string>());
                if (it != standalone.end()) doc["keypaths"] = keypath_set_json(it->second);
            }
            tasks.push_back(task_from_json(doc));
        } catch (const SchemaError& e) {
            const std::string where = e.path().empty() ? f.filename().string()
                                                       : f.filename().string() + ":" + e.path();
            throw SchemaError(where, e.message());
        }
    }
    std::sort(tasks.begin(), tasks.end(), [](const Task& a, const Task& b) { return a.id < b.id; });
    return tasks;
}

}  // namespace homeplan
