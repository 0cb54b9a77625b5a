#include <array>
#include <iostream>
#include <map>
#include <memory>
#include <random>

#include <fmt/format.h>

#include "homeplan/agent/benchmark.hpp"
#include "homeplan/cli/commands.hpp"
#include "homeplan/core/errors.hpp"
#include "homeplan/core/schema.hpp"
#include "homeplan/planners/console.hpp"
#include "homeplan/planners/remote.hpp"
#include "homeplan/planners/scripted.hpp"
#include "homeplan/sim/scene.hpp"

namespace homeplan::cli {

namespace fs = std::filesystem;

std::string log_file_name(const std::string& task_id, int run_index) {
    return fmt::format("{}__run{}.traj.json", task_id, run_index);
}

std::vector<Task> load_tasks(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        throw ConfigError(fmt::format("tasks directory {} not found (set --tasks or HOMEPLAN_TASKS)", dir.string()));
    }
    try {
        return load_task_dir(dir);
    } catch (const std::exception& e) {
        throw ConfigError(fmt::format("cannot load tasks from {}: {}", dir.string(), e.what()));
    }
}

planners::RemotePlannerConfig remote_profile(const nlohmann::json& profiles, const std::string& name,
                                             const fs::path& base) {
    if (!profiles.is_object() || !profiles.contains(name)) {
        throw ConfigError(fmt::format("no remote profile \"{}\" under \"profiles\" in the config file", name));
    }
    try {
        auto cfg = planners::RemotePlannerConfig::from_json(profiles.at(name));
        if (cfg.api_key.empty()) {
            if (const char* key = std::getenv("HOMEPLAN_API_KEY")) cfg.api_key = key;
        }
        if (!cfg.template_path.empty() && fs::path(cfg.template_path).is_relative()) {
            cfg.template_path = (base / cfg.template_path).string();
        }
        cfg.validate();
        return cfg;
    } catch (const SchemaError& e) {
        throw ConfigError(fmt::format("profile \"{}\": {}", name, e.what()));
    }
}

namespace {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32), static_cast<std::uint32_t>(b),
                      static_cast<std::uint32_t>(b >> 32)};
    std::array<std::uint32_t, 2> out{};
    seq.generate(out.begin(), out.end());
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

fs::path scene_file(const fs::path& dir, const std::string& name) {
    fs::path p = dir / name;
    if (!p.has_extension()) p += ".json";
    return p;
}

std::map<std::string, sim::Scene> load_scenes(const fs::path& dir, const std::vector<Task>& tasks) {
    if (!fs::is_directory(dir)) {
        throw ConfigError(fmt::format("scenes directory {} not found (set --scenes or HOMEPLAN_SCENES)", dir.string()));
    }
    std::map<std::string, sim::Scene> scenes;
    for (const Task& t : tasks) {
        if (scenes.count(t.scene)) continue;
        const fs::path p = scene_file(dir, t.scene);
        if (!fs::exists(p)) {
            throw ConfigError(fmt::format("task {} uses scene \"{}\" but {} does not exist", t.id, t.scene, p.string()));
        }
        try {
            scenes.emplace(t.scene, sim::load_scene(read_file(p)));
        } catch (const std::exception& e) {
            throw ConfigError(fmt::format("scene {}: {}", p.string(), e.what()));
        }
    }
    return scenes;
}

struct PlannerSetup {
    agent::PlannerFactory factory;
    bool interactive = false;
    std::optional<agent::PromptTemplate> prompt;
};

PlannerSetup planner_setup(const RunConfig& cfg, const std::vector<Task>& tasks, Streams io) {
    const std::string& spec = cfg.planner;
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);

    if (kind == "scripted") {
        if (arg.empty()) throw ConfigError("scripted planner needs a path: scripted:DIR or scripted:FILE");
        const fs::path p = arg;
        auto load = [](const fs::path& file) {
            try {
                return planners::load_scripted_plan(read_file(file));
            } catch (const std::exception& e) {
                throw ConfigError(fmt::format("scripted plan {}: {}", file.string(), e.what()));
            }
        };
        auto plans = std::make_shared<std::map<std::string, planners::ScriptedPlan>>();
        if (fs::is_directory(p)) {
            for (const Task& t : tasks) {
                const fs::path file = p / (t.id + ".json");
                if (!fs::exists(file)) throw ConfigError(fmt::format("no scripted plan for task {} ({})", t.id, file.string()));
                plans->emplace(t.id, load(file));
            }
        } else if (fs::exists(p)) {
            auto plan = load(p);
            for (const Task& t : tasks) plans->emplace(t.id, plan);
        } else {
            throw ConfigError(fmt::format("scripted plan path {} not found", p.string()));
        }
        return {[plans](const Task& t, int) { return std::make_unique<planners::ScriptedPlanner>(plans->at(t.id)); },
                false, std::nullopt};
    }
    if (kind == "console") {
        return {[io](const Task&, int) { return std::make_unique<planners::ConsolePlanner>(io.in, io.out); }, true,
                std::nullopt};
    }
    if (kind == "remote") {
        auto profile = remote_profile(cfg.profiles, arg, cfg.profile_base);
        PlannerSetup s;
        if (!profile.template_path.empty()) {
            try {
                s.prompt = agent::PromptTemplate::from_file(profile.template_path);
            } catch (const std::exception& e) {
                throw ConfigError(fmt::format("profile \"{}\" template: {}", arg, e.what()));
            }
        }
        auto client = std::make_shared<planners::ChatClient>(profile);
        s.factory = [client](const Task&, int) { return std::make_unique<planners::RemotePlanner>(client); };
        return s;
    }
    if (kind == "constant") {
        return {[arg](const Task&, int) { return std::make_unique<planners::ConstantPlanner>(arg); }, false,
                std::nullopt};
    }
    throw ConfigError(fmt::format("unknown planner \"{}\"; use scripted:PATH, console, remote:PROFILE or constant:TEXT",
                                  spec));
}

}  // namespace

int cmd_run(const RunConfig& cfg, Streams io) {
    const std::vector<Task> tasks = load_tasks(cfg.tasks);
    if (tasks.empty()) throw ConfigError(fmt::format("no task files in {}", cfg.tasks.string()));
    auto scenes = std::make_shared<const std::map<std::string, sim::Scene>>(load_scenes(cfg.scenes, tasks));
    PlannerSetup planner = planner_setup(cfg, tasks, io);

    agent::BenchmarkOptions opts;
    opts.runs = cfg.runs;
    opts.jobs = planner.interactive ? 1 : cfg.jobs;
    opts.seed = cfg.seed;
    opts.episode.budget = cfg.budget;
    if (planner.prompt) opts.episode.prompt = *planner.prompt;

    const fs::path log_dir = cfg.out / "logs";
    fs::create_directories(log_dir);
    for (const auto& entry : fs::directory_iterator(log_dir)) {
        if (entry.path().filename().string().ends_with(".traj.json")) fs::remove(entry.path());
    }

    std::map<std::string, const Task*> by_id;
    for (const Task& t : tasks) by_id[t.id] = &t;
    const std::size_t total = tasks.size() * static_cast<std::size_t>(cfg.runs);
    std::size_t done = 0, succeeded = 0, ended = 0, aborted = 0;
    opts.on_episode = [&](const agent::EpisodeRecord& rec) {
        const Trajectory& t = rec.trajectory;
        write_file(log_dir / log_file_name(t.task_id(), t.run_index()), serialize_trajectory(t));
        ++done;
        std::string status = "aborted";
        if (rec.aborted()) {
            ++aborted;
            io.err << fmt::format("error: {}\n", rec.error);
        } else {
            const auto r = metrics::evaluate_episode(t, by_id.at(t.task_id())->keypaths);
            succeeded += r.success;
            ended += r.ended;
            status = r.success ? "success" : "failure";
        }
        io.out << fmt::format("[{}/{}] {} run {}: {} after {} steps\n", done, total, t.task_id(), t.run_index(), status,
                              t.size());
        io.out.flush();
    };

    agent::run_benchmark(
        tasks,
        [scenes](const Task& task, std::uint64_t seed) {
            auto scene = std::make_unique<sim::Scene>(scenes->at(task.scene));
            scene->reseed(mix_seed(seed, scene->seed()));
            return scene;
        },
        planner.factory, opts);

    io.out << fmt::format("{} episodes over {} tasks: {} successful, {} ended by End, {} aborted; logs in {}\n", total,
                          tasks.size(), succeeded, ended, aborted, log_dir.string());
    return aborted ? kExitTransport : kExitOk;
}

}  // namespace homeplan::cli
