#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "homeplan/core/errors.hpp"
#include "homeplan/metrics/error_stats.hpp"
#include "homeplan/metrics/rates.hpp"

namespace homeplan::metrics {

struct TaskSummary {
    std::string task_id;
    int runs = 0;
    Rational sr{0};
    Rational plwsr{0};
    Rational tp{0};
};

struct BenchmarkReport {
    Rational sr{0};
    Rational plwsr{0};
    Rational tp_mean{0};
    Rate ser;
    Rate srr;
    PlwsrMode plwsr_mode = PlwsrMode::Alfred;
    /// Unset for attributes no evaluated task carries.
    std::map<TaskAttribute, std::optional<Rational>> attribute_sr;
    std::vector<TaskSummary> tasks;
    std::vector<EpisodeResult> episodes;
    ErrorBreakdown errors;
    std::vector<ActionStats> actions;
    int excluded_corrupt = 0;
    int excluded_aborted = 0;
    std::vector<std::string> warnings;
};

/// Throws MissingTask when a trajectory names a task not in `tasks`.
/// Aborted trajectories must be filtered out by the caller.
BenchmarkReport build_report(std::span<const Trajectory> trajectories, std::span<const Task> tasks,
                             PlwsrMode mode = PlwsrMode::Alfred);

nlohmann::json report_to_json(const BenchmarkReport& report);

/// Columns SR PLWSR TP SRR SER.
std::string render_summary_table(const BenchmarkReport& report, const std::string& label);
/// SR per task attribute.
std::string render_attribute_table(const BenchmarkReport& report, const std::string& label);
/// Success and failure partitions, per code and category, with an "All" column.
/// `as_counts` prints the raw "n/total" form instead of percentages.
std::string render_error_table(const ErrorBreakdown& errors, const std::string& label, bool as_counts = false);
std::string render_action_table(std::span<const ActionStats> actions);
/// Long-format CSV: partition,key,count,denominator,percent.
std::string error_plot_csv(const ErrorBreakdown& errors);

}  // namespace homeplan::metrics
