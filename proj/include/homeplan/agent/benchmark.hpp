#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "homeplan/agent/episode.hpp"

namespace homeplan::agent {

/// Stable per-episode seed from the run seed, the task and the run index.
std::uint64_t episode_seed(std::uint64_t global_seed, std::string_view task_id, int run_index);

using EnvironmentFactory = std::function<std::unique_ptr<Environment>(const Task&, std::uint64_t seed)>;
using PlannerFactory = std::function<std::unique_ptr<Planner>(const Task&, int run_index)>;

struct EpisodeRecord;

struct BenchmarkOptions {
    int runs = 3;
    int jobs = 1;
    std::uint64_t seed = 0;
    EpisodeOptions episode;
    bool keep_transcripts = false;
    /// Called as each episode finishes, one call at a time, in completion order.
    std::function<void(const EpisodeRecord&)> on_episode;
};

struct EpisodeRecord {
    Trajectory trajectory;  // Aborted when the episode could not complete
    std::string error;
    Transcript transcript;

    bool aborted() const { return trajectory.aborted(); }
};

/// tasks x runs episodes, ordered by task then run regardless of `jobs`.
/// Factories are called from worker threads.
std::vector<EpisodeRecord> run_benchmark(const std::vector<Task>& tasks, const EnvironmentFactory& make_env,
                                         const PlannerFactory& make_planner, const BenchmarkOptions& options);

}  // namespace homeplan::agent
