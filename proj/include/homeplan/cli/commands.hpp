#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "homeplan/cli/settings.hpp"
#include "homeplan/core/trajectory.hpp"
#include "homeplan/metrics/rates.hpp"
#include "homeplan/planners/remote.hpp"

namespace homeplan::cli {

struct RunConfig {
    std::filesystem::path tasks;
    std::filesystem::path scenes;
    /// scripted:PATH | console | remote:PROFILE | constant:TEXT
    std::string planner;
    int runs = 3;
    int budget = 20;
    std::uint64_t seed = 0;
    int jobs = 1;
    std::filesystem::path out;
    nlohmann::json profiles = nlohmann::json::object();
    std::filesystem::path profile_base;
};

struct EvaluateConfig {
    std::filesystem::path logs;
    std::filesystem::path tasks;
    std::filesystem::path report;
    std::string label;
    metrics::PlwsrMode plwsr = metrics::PlwsrMode::Alfred;
};

struct ErrorReportConfig {
    std::filesystem::path logs;
    std::filesystem::path tasks;
    std::optional<std::filesystem::path> plot_data;
    std::string label;
    bool counts = false;
};

struct AugmentConfig {
    std::filesystem::path logs;
    std::filesystem::path tasks;
    std::filesystem::path out;
    std::filesystem::path lexicon;
    int rewrites = 3;
    /// identity | remote:PROFILE
    std::string rewriter = "identity";
    bool dedup = true;
    double holdout = 0.0;
    std::uint64_t seed = 0;
    nlohmann::json profiles = nlohmann::json::object();
    std::filesystem::path profile_base;
};

/// Writes <out>/logs/<task>__run<k>.traj.json per episode. Returns kExitTransport
/// if any episode aborted; failed episodes are still kExitOk.
int cmd_run(const RunConfig& config, Streams io);
/// Prints the summary and per-attribute tables and writes the JSON report.
int cmd_evaluate(const EvaluateConfig& config, Streams io);
/// Prints the success/failure partition tables.
int cmd_report_errors(const ErrorReportConfig& config, Streams io);
/// Builds SFT and preference datasets from logs.
int cmd_augment(const AugmentConfig& config, Streams io);

std::string log_file_name(const std::string& task_id, int run_index);

struct LoadedLogs {
    std::vector<Trajectory> trajectories;  // aborted ones included
    int corrupt = 0;
    std::vector<std::string> warnings;
};

/// Every *.traj.json under `dir`, in path order. Unparseable files are
/// counted and reported, not fatal. Throws ConfigError if `dir` is missing.
LoadedLogs load_logs(const std::filesystem::path& dir);

/// Throws ConfigError for unknown profiles or invalid settings. An empty
/// api_key falls back to HOMEPLAN_API_KEY.
planners::RemotePlannerConfig remote_profile(const nlohmann::json& profiles, const std::string& name,
                                             const std::filesystem::path& base);

/// Throws ConfigError.
std::vector<Task> load_tasks(const std::filesystem::path& dir);

}  // namespace homeplan::cli
