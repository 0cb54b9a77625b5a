#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "homeplan/core/environment.hpp"
#include "homeplan/core/errors.hpp"

namespace homeplan::sim {

enum class EntityKind { Object, Container, Spot };
enum class OpenState { Open, Closed };
enum class DistanceBand { TooClose, Reachable, TooFar };

std::string_view to_string(EntityKind kind);
std::string_view to_string(DistanceBand band);

/// Location value of an object in the agent's hand.
inline constexpr std::string_view kHandLocation = "@hand";

struct Entity {
    std::string name;
    EntityKind kind = EntityKind::Object;
    std::optional<OpenState> open_state;  // containers only
    std::string location;                 // spot or container name; empty for spots
    bool interactive = true;
    /// Band this entity has when the agent arrives at its spot without
    /// targeting it directly. Lets a scene pin a D2 situation.
    DistanceBand near_band = DistanceBand::Reachable;

    bool is_open() const { return open_state == OpenState::Open; }
};

struct AgentPose {
    std::string at;
    std::map<std::string, DistanceBand> bands;

    /// Entities without an entry are too far.
    DistanceBand band(const std::string& name) const;
};

/// Per-attempt probabilities used when no scripted outcome is queued.
struct ExecutionNoise {
    double e1_manipulation = 0.1;
    double e1_navigation = 0.05;
    double e2_place = 0.05;
};

enum class ScriptedOutcome { Success, E1, E2 };

class DuplicateName : public SchemaError {
public:
    explicit DuplicateName(const std::string& name) : SchemaError("entities", "duplicate name \"" + name + "\"") {}
};

/// A discrete household room set. One Scene is one episode's mutable world.
class Scene final : public Environment {
public:
    Scene() = default;

    /// Throws SchemaError / DuplicateName.
    static Scene from_json(const nlohmann::json& doc);

    Observations observe() const override;
    ExecOutcome execute(const Subtask& subtask, const Inventory& inventory) override;

    /// Exact lookup on the normalized name; F2 feedback on a miss.
    std::variant<const Entity*, Feedback> resolve_target(std::string_view name) const;

    void reseed(std::uint64_t seed);
    std::uint64_t seed() const { return seed_; }
    void set_noise(const ExecutionNoise& noise) { noise_ = noise; }
    const ExecutionNoise& noise() const { return noise_; }

    const std::string& name() const { return name_; }
    std::span<const Entity> entities() const { return entities_; }
    const Entity* find(std::string_view name) const;
    const AgentPose& pose() const { return pose_; }
    const std::optional<std::string>& held() const { return held_; }
    /// Spot an entity ultimately sits at (the agent's spot for the held object).
    std::string home_spot(const Entity& entity) const;
    /// Not held and not inside a closed container.
    bool visible(const Entity& entity) const;

private:
    Entity* find_mut(std::string_view name);
    std::vector<const Entity*> children(const std::string& parent) const;
    bool inside_closed_container(const Entity& entity) const;
    std::optional<ScriptedOutcome> next_scripted(const Subtask& subtask);
    ExecOutcome outcome(Feedback feedback) const;
    void arrive_at(const Entity& target);
    void render(const Entity& e, int depth, std::string& out, std::vector<std::string>& seen) const;

    std::string name_;
    std::vector<Entity> entities_;
    std::map<std::string, std::size_t> index_;
    std::map<std::string, std::array<std::vector<std::string>, 4>> views_;
    AgentPose pose_;
    std::optional<std::string> held_;
    std::map<std::pair<ActionType, std::string>, std::deque<ScriptedOutcome>> schedule_;
    ExecutionNoise noise_;
    std::uint64_t seed_ = 0;
    std::mt19937_64 rng_;
};

Scene load_scene(std::string_view bytes);

}  // namespace homeplan::sim
