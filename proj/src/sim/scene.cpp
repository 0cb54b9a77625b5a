#include "homeplan/sim/scene.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "homeplan/core/names.hpp"

namespace homeplan::sim {

using nlohmann::json;

std::string_view to_string(EntityKind kind) {
    switch (kind) {
        case EntityKind::Object: return "object";
        case EntityKind::Container: return "container";
        case EntityKind::Spot: return "spot";
    }
    return "?";
}

std::string_view to_string(DistanceBand band) {
    switch (band) {
        case DistanceBand::TooClose: return "too close";
        case DistanceBand::Reachable: return "reachable";
        case DistanceBand::TooFar: return "too far";
    }
    return "?";
}

DistanceBand AgentPose::band(const std::string& name) const {
    auto it = bands.find(name);
    return it == bands.end() ? DistanceBand::TooFar : it->second;
}

namespace {

std::string get_string(const json& obj, const char* key, const std::string& path, bool required = true) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        if (required) throw SchemaError(path + "." + key, "missing field");
        return {};
    }
    if (!it->is_string()) throw SchemaError(path + "." + key, "expected a string");
    return it->get<std::string>();
}

DistanceBand parse_band(const std::string& text, const std::string& path) {
    const std::string n = normalize_name(text);
    if (n == "too_close") return DistanceBand::TooClose;
    if (n == "reachable") return DistanceBand::Reachable;
    if (n == "too_far") return DistanceBand::TooFar;
    throw SchemaError(path, fmt::format("unknown distance band \"{}\"", text));
}

double get_probability(const json& obj, const char* key, double fallback, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_number()) throw SchemaError(path + "." + key, "expected a number");
    const double p = it->get<double>();
    if (p < 0.0 || p > 1.0) throw SchemaError(path + "." + key, "probability outside [0, 1]");
    return p;
}

std::optional<ActionType> manipulation_or_nav(ActionType a) {
    if (a == ActionType::End) return std::nullopt;
    return a;
}

}  // namespace

Scene Scene::from_json(const json& doc) {
    if (!doc.is_object()) throw SchemaError("", "scene must be an object");
    Scene scene;
    scene.name_ = doc.value("name", std::string{});

    auto add_entity = [&](Entity e) {
        if (e.name.empty()) throw SchemaError("entities", "entity with an empty name");
        if (scene.index_.count(e.name)) throw DuplicateName(e.name);
        scene.index_[e.name] = scene.entities_.size();
        scene.entities_.push_back(std::move(e));
    };

    // Spots carry their own direction tables; resolve names after all entities exist.
    std::vector<std::pair<std::string, json>> pending_views;
    if (doc.contains("spots")) {
        const json& spots = doc["spots"];
        if (!spots.is_array()) throw SchemaError("spots", "expected a list");
        for (std::size_t i = 0; i < spots.size(); ++i) {
            const std::string path = fmt::format("spots[{}]", i);
            Entity e;
            e.name = normalize_name(get_string(spots[i], "name", path));
            e.kind = EntityKind::Spot;
            e.interactive = spots[i].value("interactive", true);
            pending_views.emplace_back(e.name, spots[i].value("directions", json::object()));
            add_entity(std::move(e));
        }
    }

    if (doc.contains("entities")) {
        const json& ents = doc["entities"];
        if (!ents.is_array()) throw SchemaError("entities", "expected a list");
        for (std::size_t i = 0; i < ents.size(); ++i) {
            const std::string path = fmt::format("entities[{}]", i);
            const json& j = ents[i];
            if (!j.is_object()) throw SchemaError(path, "expected an object");
            Entity e;
            e.name = normalize_name(get_string(j, "name", path));
            const std::string kind = get_string(j, "kind", path);
            if (kind == "object") {
                e.kind = EntityKind::Object;
            } else if (kind == "container") {
                e.kind = EntityKind::Container;
            } else if (kind == "spot") {
                e.kind = EntityKind::Spot;
            } else {
                throw SchemaError(path + ".kind", fmt::format("unknown kind \"{}\"", kind));
            }
            const std::string state = get_string(j, "open_state", path, false);
            if (e.kind == EntityKind::Container) {
                if (state == "open") {
                    e.open_state = OpenState::Open;
                } else if (state == "closed") {
                    e.open_state = OpenState::Closed;
                } else {
                    throw SchemaError(path + ".open_state", "containers need open_state \"open\" or \"closed\"");
                }
            } else if (!state.empty()) {
                throw SchemaError(path + ".open_state", "only containers have an open_state");
            }
            e.location = normalize_name(get_string(j, "location", path, e.kind != EntityKind::Spot));
            if (j.contains("interactive")) {
                if (!j["interactive"].is_boolean()) throw SchemaError(path + ".interactive", "expected a boolean");
                e.interactive = j["interactive"].get<bool>();
            }
            if (j.contains("near_band")) e.near_band = parse_band(get_string(j, "near_band", path), path + ".near_band");
            if (e.kind == EntityKind::Spot) pending_views.emplace_back(e.name, json::object());
            add_entity(std::move(e));
        }
    }

    // Locations must name a spot or container, without cycles.
    for (const Entity& e : scene.entities_) {
        if (e.kind == EntityKind::Spot) continue;
        std::set<std::string> seen{e.name};
        const Entity* cur = &e;
        while (cur->kind != EntityKind::Spot) {
            const Entity* parent = scene.find(cur->location);
            if (!parent || parent->kind == EntityKind::Object) {
                throw SchemaError("entities", fmt::format("{}: location \"{}\" is not a spot or container", cur->name,
                                                          cur->location));
            }
            if (!seen.insert(parent->name).second) {
                throw SchemaError("entities", fmt::format("{}: location cycle", e.name));
            }
            cur = parent;
        }
    }

    for (auto& [spot, dirs] : pending_views) {
        auto& table = scene.views_[spot];
        if (!dirs.is_object()) throw SchemaError(spot + ".directions", "expected an object");
        for (const auto& [key, list] : dirs.items()) {
            std::optional<Direction> dir;
            for (Direction d : kAllDirections) {
                if (to_string(d) == key) dir = d;
            }
            if (!dir) throw SchemaError(spot + ".directions", fmt::format("unknown direction \"{}\"", key));
            if (!list.is_array()) throw SchemaError(spot + ".directions." + key, "expected a list");
            for (const auto& item : list) {
                if (!item.is_string()) throw SchemaError(spot + ".directions." + key, "expected names");
                std::string n = normalize_name(item.get<std::string>());
                if (!scene.find(n)) {
                    throw SchemaError(spot + ".directions." + key, fmt::format("unknown entity \"{}\"", n));
                }
                table[static_cast<std::size_t>(*dir)].push_back(std::move(n));
            }
        }
    }

    if (doc.contains("outcome_schedule")) {
        const json& sched = doc["outcome_schedule"];
        if (!sched.is_array()) throw SchemaError("outcome_schedule", "expected a list");
        for (std::size_t i = 0; i < sched.size(); ++i) {
            const std::string path = fmt::format("outcome_schedule[{}]", i);
            const std::string action_text = get_string(sched[i], "action", path);
            auto action = parse_action(action_text);
            if (!action || !manipulation_or_nav(*action)) {
                throw SchemaError(path + ".action", fmt::format("unschedulable action \"{}\"", action_text));
            }
            const std::string target = normalize_name(get_string(sched[i], "target", path));
            auto& queue = scene.schedule_[{*action, target}];
            const json& outs = sched[i].value("outcomes", json::array());
            for (const auto& o : outs) {
                const std::string text = o.is_string() ? o.get<std::string>() : "";
                if (text == "success") {
                    queue.push_back(ScriptedOutcome::Success);
                } else if (text == "E1") {
                    queue.push_back(ScriptedOutcome::E1);
                } else if (text == "E2" && *action == ActionType::Place) {
                    queue.push_back(ScriptedOutcome::E2);
                } else {
                    throw SchemaError(path + ".outcomes", fmt::format("invalid outcome \"{}\" for {}", text, action_text));
                }
            }
        }
    }

    if (doc.contains("noise")) {
        const json& n = doc["noise"];
        if (!n.is_object()) throw SchemaError("noise", "expected an object");
        ExecutionNoise defaults;
        scene.noise_.e1_manipulation = get_probability(n, "e1_manipulation", defaults.e1_manipulation, "noise");
        scene.noise_.e1_navigation = get_probability(n, "e1_navigation", defaults.e1_navigation, "noise");
        scene.noise_.e2_place = get_probability(n, "e2_place", defaults.e2_place, "noise");
    }

    const std::string start = normalize_name(get_string(doc, "agent_start", "", false));
    if (!start.empty()) {
        const Entity* s = scene.find(start);
        if (!s || s->kind != EntityKind::Spot) throw SchemaError("agent_start", fmt::format("\"{}\" is not a spot", start));
        scene.arrive_at(*s);
    } else if (std::any_of(scene.entities_.begin(), scene.entities_.end(),
                           [](const Entity& e) { return e.kind == EntityKind::Spot; })) {
        throw SchemaError("agent_start", "missing field");
    }

    std::uint64_t seed = 0;
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer()) {
            throw SchemaError("seed", "expected an integer");
        }
        seed = doc["seed"].get<std::uint64_t>();
    }
    scene.reseed(seed);
    return scene;
}

Scene load_scene(std::string_view bytes) {
    json doc;
    try {
        doc = json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        throw SchemaError("", fmt::format("not valid JSON ({})", e.what()));
    }
    return Scene::from_json(doc);
}

void Scene::reseed(std::uint64_t seed) {
    seed_ = seed;
    rng_.seed(seed);
}

const Entity* Scene::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    return it == index_.end() ? nullptr : &entities_[it->second];
}

Entity* Scene::find_mut(std::string_view name) {
    auto it = index_.find(std::string(name));
    return it == index_.end() ? nullptr : &entities_[it->second];
}

std::variant<const Entity*, Feedback> Scene::resolve_target(std::string_view name) const {
    const Entity* e = find(normalize_name(name));
    if (!e) return Feedback::failure(ErrorCode::F2);
    return e;
}

std::string Scene::home_spot(const Entity& entity) const {
    const Entity* cur = &entity;
    while (cur->kind != EntityKind::Spot) {
        if (cur->location == kHandLocation) return pose_.at;
        cur = find(cur->location);
        if (!cur) return {};
    }
    return cur->name;
}

bool Scene::inside_closed_container(const Entity& entity) const {
    const Entity* cur = &entity;
    while (cur->kind != EntityKind::Spot && cur->location != kHandLocation) {
        cur = find(cur->location);
        if (!cur) return false;
        if (cur->kind == EntityKind::Container && !cur->is_open()) return true;
    }
    return false;
}

bool Scene::visible(const Entity& entity) const {
    return entity.location != kHandLocation && !inside_closed_container(entity);
}

std::vector<const Entity*> Scene::children(const std::string& parent) const {
    std::vector<const Entity*> out;
    for (const Entity& e : entities_) {
        if (e.kind != EntityKind::Spot && e.location == parent) out.push_back(&e);
    }
    return out;
}

void Scene::arrive_at(const Entity& target) {
    pose_.at = home_spot(target);
    pose_.bands.clear();
    for (const Entity& e : entities_) {
        if (e.location == kHandLocation) continue;
        if (home_spot(e) != pose_.at) continue;
        pose_.bands[e.name] = e.kind == EntityKind::Spot ? DistanceBand::Reachable : e.near_band;
    }
    pose_.bands[target.name] = DistanceBand::Reachable;
    if (target.kind == EntityKind::Spot) return;
    // A targeted container brings its contents and its enclosing containers within reach.
    std::vector<const Entity*> stack{&target};
    while (!stack.empty()) {
        const Entity* e = stack.back();
        stack.pop_back();
        pose_.bands[e->name] = DistanceBand::Reachable;
        for (const Entity* c : children(e->name)) stack.push_back(c);
    }
    for (const Entity* cur = &target; cur->kind != EntityKind::Spot && cur->location != kHandLocation;) {
        cur = find(cur->location);
        if (!cur) break;
        pose_.bands[cur->name] = DistanceBand::Reachable;
    }
}

void Scene::render(const Entity& e, int depth, std::string& out, std::vector<std::string>& seen) const {
    if (!visible(e) || std::find(seen.begin(), seen.end(), e.name) != seen.end()) return;
    seen.push_back(e.name);
    out += std::string(static_cast<std::size_t>(depth) * 2, ' ');
    out += "- " + e.name + " (";
    if (e.kind == EntityKind::Container) out += e.is_open() ? "open, " : "closed, ";
    out += std::string(to_string(pose_.band(e.name))) + ")\n";
    if (e.kind == EntityKind::Spot || e.is_open()) {
        for (const Entity* c : children(e.name)) render(*c, depth + 1, out, seen);
    }
}

Observations Scene::observe() const {
    Observations obs;
    std::vector<std::string> seen{pose_.at};
    auto table_it = views_.find(pose_.at);
    std::array<std::string, 4> text;
    if (table_it != views_.end()) {
        for (Direction d : kAllDirections) {
            for (const std::string& name : table_it->second[static_cast<std::size_t>(d)]) {
                render(*find(name), 0, text[static_cast<std::size_t>(d)], seen);
            }
        }
    }
    // Things at the agent's own spot that no direction lists are in front of it.
    if (!pose_.at.empty()) {
        for (const Entity* c : children(pose_.at)) render(*c, 0, text[0], seen);
    }
    for (std::size_t i = 0; i < obs.size(); ++i) {
        std::string& t = text[i];
        if (!t.empty() && t.back() == '\n') t.pop_back();
        obs[i] = t.empty() ? "nothing notable" : t;
    }
    return obs;
}

std::optional<ScriptedOutcome> Scene::next_scripted(const Subtask& subtask) {
    auto it = schedule_.find({subtask.action, subtask.target});
    if (it == schedule_.end() || it->second.empty()) return std::nullopt;
    const ScriptedOutcome o = it->second.front();
    it->second.pop_front();
    return o;
}

ExecOutcome Scene::outcome(Feedback feedback) const { return ExecOutcome{std::move(feedback), observe(), std::nullopt}; }

ExecOutcome Scene::execute(const Subtask& subtask, const Inventory& inventory) {
    if (subtask.action == ActionType::End) return outcome(Feedback::success());

    const Entity* target = find(normalize_name(subtask.target));
    if (!target) return outcome(Feedback::failure(ErrorCode::F2));

    const ActionType action = subtask.action;
    const bool manipulation = action != ActionType::GoTo;

    if (manipulation) {
        // L4: the target does not afford this action.
        const bool affords = [&] {
            if (!target->interactive) return false;
            switch (action) {
                case ActionType::Open:
                case ActionType::Close: return target->kind == EntityKind::Container;
                case ActionType::Pick: return target->kind == EntityKind::Object;
                case ActionType::Place: return target->kind != EntityKind::Object;
                default: return true;
            }
        }();
        if (!affords) return outcome(Feedback::failure(ErrorCode::L4));

        if (action != ActionType::Place && !inventory.empty()) return outcome(Feedback::failure(ErrorCode::L1));
        if (action == ActionType::Place && inventory.empty()) return outcome(Feedback::failure(ErrorCode::L2));

        const bool closed = action == ActionType::Pick    ? inside_closed_container(*target)
                            : action == ActionType::Place ? (target->kind == EntityKind::Container && !target->is_open()) ||
                                                                inside_closed_container(*target)
                                                          : false;
        if (closed) return outcome(Feedback::failure(ErrorCode::L3));

        const DistanceBand band = pose_.band(target->name);
        if (band == DistanceBand::TooClose) return outcome(Feedback::failure(ErrorCode::D2));
        if (band == DistanceBand::TooFar) return outcome(Feedback::failure(ErrorCode::D1));
    }

    if (action == ActionType::Place && held_ != inventory.held) {
        throw InvariantError("executor and planner disagree about the held object");
    }

    // Execution-capability stage: scripted outcomes first, seeded noise otherwise.
    std::optional<ScriptedOutcome> scripted = next_scripted({action, target->name});
    if (!scripted) {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const double p_e1 = manipulation ? noise_.e1_manipulation : noise_.e1_navigation;
        if (unit(rng_) < p_e1) {
            scripted = ScriptedOutcome::E1;
        } else if (action == ActionType::Place && unit(rng_) < noise_.e2_place) {
            scripted = ScriptedOutcome::E2;
        } else {
            scripted = ScriptedOutcome::Success;
        }
    }
    if (*scripted == ScriptedOutcome::E1) return outcome(Feedback::failure(ErrorCode::E1));

    const std::string target_name = target->name;
    switch (action) {
        case ActionType::GoTo: arrive_at(*target); break;
        case ActionType::Open: find_mut(target_name)->open_state = OpenState::Open; break;
        case ActionType::Close: find_mut(target_name)->open_state = OpenState::Closed; break;
        case ActionType::Pick:
            find_mut(target_name)->location = std::string(kHandLocation);
            held_ = target_name;
            pose_.bands.erase(target_name);
            break;
        case ActionType::Place: {
            Entity* obj = find_mut(*held_);
            held_.reset();
            if (*scripted == ScriptedOutcome::E2) {
                // Dropped somewhere other than intended; it stays in the room.
                obj->location = pose_.at.empty() ? target_name : pose_.at;
                pose_.bands[obj->name] = DistanceBand::Reachable;
                ExecOutcome o = outcome(Feedback::failure(ErrorCode::E2));
                o.inventory_correction = Inventory{};
                return o;
            }
            obj->location = target_name;
            pose_.bands[obj->name] = DistanceBand::Reachable;
            break;
        }
        case ActionType::End: break;
    }
    return outcome(Feedback::success());
}

}  // namespace homeplan::sim
