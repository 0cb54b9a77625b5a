#include <algorithm>
#include <iostream>

#include <fmt/format.h>

#include "homeplan/cli/commands.hpp"
#include "homeplan/core/errors.hpp"
#include "homeplan/core/schema.hpp"
#include "homeplan/metrics/report.hpp"

namespace homeplan::cli {

namespace fs = std::filesystem;

LoadedLogs load_logs(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw ConfigError(fmt::format("logs directory {} not found", dir.string()));
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().filename().string().ends_with(".traj.json")) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());

    LoadedLogs out;
    for (const fs::path& f : files) {
        try {
            out.trajectories.push_back(parse_trajectory_log(read_file(f)));
        } catch (const std::exception& e) {
            ++out.corrupt;
            out.warnings.push_back(fmt::format("skipping corrupt log {}: {}", f.string(), e.what()));
        }
    }
    if (files.empty()) out.warnings.push_back(fmt::format("no trajectory logs in {}", dir.string()));
    return out;
}

namespace {

metrics::BenchmarkReport report_from_logs(const fs::path& logs_dir, const fs::path& tasks_dir,
                                          metrics::PlwsrMode mode, Streams io) {
    LoadedLogs logs = load_logs(logs_dir);
    const std::vector<Task> tasks = load_tasks(tasks_dir);
    std::vector<Trajectory> complete;
    int aborted = 0;
    for (auto& t : logs.trajectories) {
        if (t.aborted()) {
            ++aborted;
        } else {
            complete.push_back(std::move(t));
        }
    }
    metrics::BenchmarkReport report = metrics::build_report(complete, tasks, mode);
    report.excluded_corrupt = logs.corrupt;
    report.excluded_aborted = aborted;
    if (aborted) logs.warnings.push_back(fmt::format("excluded {} aborted trajectories", aborted));
    logs.warnings.insert(logs.warnings.end(), report.warnings.begin(), report.warnings.end());
    report.warnings = logs.warnings;
    for (const auto& w : report.warnings) io.err << "warning: " << w << '\n';
    return report;
}

std::string label_for(const std::string& label, const fs::path& logs) {
    if (!label.empty()) return label;
    fs::path p = fs::absolute(logs).lexically_normal();
    if (!p.has_filename()) p = p.parent_path();
    if (p.filename() == "logs" && p.has_parent_path()) p = p.parent_path();
    return p.filename().string();
}

}  // namespace

int cmd_evaluate(const EvaluateConfig& cfg, Streams io) {
    const auto report = report_from_logs(cfg.logs, cfg.tasks, cfg.plwsr, io);
    const std::string label = label_for(cfg.label, cfg.logs);
    io.out << metrics::render_summary_table(report, label) << '\n'
           << metrics::render_attribute_table(report, label);
    write_file(cfg.report, metrics::report_to_json(report).dump(2) + "\n");
    io.out << fmt::format("\nreport written to {}\n", cfg.report.string());
    return kExitOk;
}

int cmd_report_errors(const ErrorReportConfig& cfg, Streams io) {
    const auto report = report_from_logs(cfg.logs, cfg.tasks, metrics::PlwsrMode::Alfred, io);
    io.out << metrics::render_error_table(report.errors, label_for(cfg.label, cfg.logs), cfg.counts);
    if (!report.actions.empty()) io.out << '\n' << metrics::render_action_table(report.actions);
    if (cfg.plot_data) {
        write_file(*cfg.plot_data, metrics::error_plot_csv(report.errors));
        io.out << fmt::format("\nplot data written to {}\n", cfg.plot_data->string());
    }
    return kExitOk;
}

}  // namespace homeplan::cli
