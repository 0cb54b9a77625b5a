#include "homeplan/agent/benchmark.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <mutex>
#include <random>
#include <thread>

namespace homeplan::agent {

std::uint64_t episode_seed(std::uint64_t global_seed, std::string_view task_id, int run_index) {
    std::vector<std::uint32_t> material = {static_cast<std::uint32_t>(global_seed),
                                           static_cast<std::uint32_t>(global_seed >> 32),
                                           static_cast<std::uint32_t>(run_index)};
    for (unsigned char c : task_id) material.push_back(c);
    std::seed_seq seq(material.begin(), material.end());
    std::array<std::uint32_t, 2> out{};
    seq.generate(out.begin(), out.end());
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

namespace {

EpisodeRecord run_one(const Task& task, int run, const EnvironmentFactory& make_env,
                      const PlannerFactory& make_planner, const BenchmarkOptions& options) {
    EpisodeRecord rec;
    Transcript* transcript = options.keep_transcripts ? &rec.transcript : nullptr;
    try {
        auto env = make_env(task, episode_seed(options.seed, task.id, run));
        auto planner = make_planner(task, run);
        rec.trajectory = run_episode(*env, *planner, task, options.episode, run, transcript);
    } catch (const EpisodeAborted& e) {
        rec.trajectory = e.partial();
        rec.error = e.what();
    } catch (const std::exception& e) {
        rec.trajectory = Trajectory(task.id, run);
        rec.trajectory.finish(Termination::Aborted);
        rec.error = task.id + " run " + std::to_string(run) + ": " + e.what();
    }
    return rec;
}

}  // namespace

std::vector<EpisodeRecord> run_benchmark(const std::vector<Task>& tasks, const EnvironmentFactory& make_env,
                                         const PlannerFactory& make_planner, const BenchmarkOptions& options) {
    const std::size_t runs = static_cast<std::size_t>(std::max(options.runs, 0));
    const std::size_t total = tasks.size() * runs;
    std::vector<EpisodeRecord> records(total);

    std::atomic<std::size_t> next{0};
    std::mutex report;
    auto worker = [&] {
        for (std::size_t i = next++; i < total; i = next++) {
            records[i] = run_one(tasks[i / runs], static_cast<int>(i % runs), make_env, make_planner, options);
            if (options.on_episode) {
                std::lock_guard lock(report);
                options.on_episode(records[i]);
            }
        }
    };
    const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(total)));
    if (jobs == 1) {
        worker();
        return records;
    }
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    pool.clear();
    return records;
}

}  // namespace homeplan::agent
