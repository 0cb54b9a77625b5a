#include "homeplan/metrics/report.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace homeplan::metrics {

using nlohmann::json;

namespace {

std::string rational_text(const Rational& r) { return fmt::format("{}/{}", r.numerator(), r.denominator()); }

json rate_json(const Rate& rate) {
    return {{"percent", percent_value(rate.value)},
            {"exact", rational_text(rate.value)},
            {"denominator_zero", rate.denominator_zero}};
}

json percent_json(const Rational& r) { return {{"percent", percent_value(r)}, {"exact", rational_text(r)}}; }

std::string flagged(const Rate& rate) { return format_percent(rate.value) + (rate.denominator_zero ? "*" : ""); }

// Column order of the error tables: codes grouped by category, each
// category followed by its subtotal.
struct ErrorColumn {
    std::string name;
    std::optional<ErrorCode> code;
    std::optional<ErrorCategory> cat;
};

std::vector<ErrorColumn> error_columns() {
    std::vector<ErrorColumn> cols;
    for (ErrorCategory cat : kAllErrorCategories) {
        for (ErrorCode code : kAllErrorCodes) {
            if (category(code) == cat) cols.push_back({std::string(to_string(code)), code, std::nullopt});
        }
        cols.push_back({std::string(to_string(cat)), std::nullopt, cat});
    }
    return cols;
}

json partition_json(const PartitionStats& p) {
    json codes = json::object();
    for (ErrorCode c : kAllErrorCodes) {
        codes[std::string(to_string(c))] = {{"count", p.count(c)}, {"percent", percent_value(p.share(c))}};
    }
    json cats = json::object();
    for (ErrorCategory c : kAllErrorCategories) {
        cats[std::string(to_string(c))] = {{"count", p.count(c)}, {"percent", percent_value(p.share(c))}};
    }
    return {{"trajectories", p.trajectories},
            {"failed_steps", p.failed_steps},
            {"total_steps", p.total_steps},
            {"failed_step_percent", percent_value(p.failed_fraction())},
            {"codes", codes},
            {"categories", cats}};
}

std::string pad_row(const std::vector<std::string>& cells, const std::vector<std::size_t>& widths) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i == 0) {
            line += fmt::format("{:<{}}", cells[i], widths[i]);
        } else {
            line += fmt::format("  {:>{}}", cells[i], widths[i]);
        }
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    return line + "\n";
}

std::string render_rows(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths(rows.front().size(), 0);
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) widths[i] = std::max(widths[i], r[i].size());
    }
    std::string out = pad_row(rows.front(), widths);
    std::size_t rule = 0;
    for (auto w : widths) rule += w + 2;
    out += std::string(rule - 2, '-') + "\n";
    for (std::size_t i = 1; i < rows.size(); ++i) out += pad_row(rows[i], widths);
    return out;
}

}  // namespace

BenchmarkReport build_report(std::span<const Trajectory> trajectories, std::span<const Task> tasks,
                             PlwsrMode mode) {
    std::map<std::string, const Task*> by_id;
    for (const Task& t : tasks) by_id[t.id] = &t;

    BenchmarkReport report;
    report.plwsr_mode = mode;
    std::map<std::string, int> expert;
    for (const Trajectory& t : trajectories) {
        auto it = by_id.find(t.task_id());
        if (it == by_id.end()) throw MissingTask(t.task_id());
        report.episodes.push_back(evaluate_episode(t, it->second->keypaths));
        expert[t.task_id()] = it->second->expert_length;
    }
    const std::span<const EpisodeResult> results = report.episodes;

    if (results.empty()) report.warnings.push_back("no trajectories to evaluate; all metrics are zero");

    const SuccessRates rates = compute_sr_plwsr(results, expert, mode);
    report.sr = rates.sr;
    report.plwsr = rates.plwsr;
    report.tp_mean = macro_average(results, [](const EpisodeResult& r) { return r.tp; });
    report.ser = compute_ser(results);
    report.srr = compute_srr(results);
    if (report.ser.denominator_zero && !results.empty()) {
        report.warnings.push_back("SER: no trajectory ended with End (denominator_zero)");
    }
    if (report.srr.denominator_zero && !results.empty()) {
        report.warnings.push_back("SRR: no replans in any trajectory (denominator_zero)");
    }

    std::map<std::string, std::vector<EpisodeResult>> grouped;
    for (const auto& r : results) grouped[r.task_id].push_back(r);
    for (const auto& [id, runs] : grouped) {
        TaskSummary s;
        s.task_id = id;
        s.runs = static_cast<int>(runs.size());
        const SuccessRates tr = compute_sr_plwsr(runs, expert, mode);
        s.sr = tr.sr;
        s.plwsr = tr.plwsr;
        s.tp = macro_average(runs, [](const EpisodeResult& r) { return r.tp; });
        report.tasks.push_back(s);
    }

    for (TaskAttribute attr : kAllAttributes) {
        Rational sum(0);
        std::int64_t n = 0;
        for (const TaskSummary& s : report.tasks) {
            if (!by_id.at(s.task_id)->has_attribute(attr)) continue;
            sum += s.sr;
            ++n;
        }
        report.attribute_sr[attr] = n == 0 ? std::nullopt : std::optional<Rational>(sum / n);
    }

    report.errors = aggregate_error_stats(trajectories, results);
    report.actions = per_action_stats(trajectories);
    return report;
}

json report_to_json(const BenchmarkReport& report) {
    json attrs = json::object();
    for (const auto& [attr, sr] : report.attribute_sr) {
        attrs[std::string(to_string(attr))] = sr ? percent_json(*sr) : json(nullptr);
    }
    json tasks = json::array();
    for (const auto& t : report.tasks) {
        tasks.push_back({{"task_id", t.task_id},
                         {"runs", t.runs},
                         {"sr", percent_json(t.sr)},
                         {"plwsr", percent_json(t.plwsr)},
                         {"tp", percent_json(t.tp)}});
    }
    json episodes = json::array();
    for (const auto& e : report.episodes) {
        episodes.push_back({{"task_id", e.task_id},
                            {"run_index", e.run_index},
                            {"tp", rational_text(e.tp)},
                            {"success", e.success},
                            {"ended", e.ended},
                            {"replans", e.replans},
                            {"length", e.length}});
    }
    json actions = json::array();
    for (const auto& a : report.actions) {
        actions.push_back({{"action", to_string(a.action)},
                           {"attempts", a.attempts},
                           {"successes", a.successes},
                           {"sr_percent", percent_value(a.success_rate)},
                           {"execution_errors", a.execution_errors},
                           {"execution_error_share_percent", percent_value(a.execution_error_share)}});
    }
    return {
        {"sr", percent_json(report.sr)},
        {"plwsr", percent_json(report.plwsr)},
        {"plwsr_mode", report.plwsr_mode == PlwsrMode::Alfred ? "alfred" : "literal"},
        {"tp", percent_json(report.tp_mean)},
        {"ser", rate_json(report.ser)},
        {"srr", rate_json(report.srr)},
        {"attribute_sr", attrs},
        {"tasks", tasks},
        {"episodes", episodes},
        {"errors",
         {{"successful", partition_json(report.errors.successful)},
          {"failed", partition_json(report.errors.failed)},
          {"overall", partition_json(report.errors.overall)}}},
        {"actions", actions},
        {"excluded_corrupt", report.excluded_corrupt},
        {"excluded_aborted", report.excluded_aborted},
        {"warnings", report.warnings},
    };
}

std::string render_summary_table(const BenchmarkReport& report, const std::string& label) {
    std::vector<std::vector<std::string>> rows = {
        {"Model", "SR", "PLWSR", "TP", "SRR", "SER"},
        {label, format_percent(report.sr), format_percent(report.plwsr), format_percent(report.tp_mean),
         flagged(report.srr), flagged(report.ser)},
    };
    std::string out = render_rows(rows);
    if (report.ser.denominator_zero || report.srr.denominator_zero) out += "* denominator was zero\n";
    return out;
}

std::string render_attribute_table(const BenchmarkReport& report, const std::string& label) {
    std::vector<std::string> header{"Model"};
    std::vector<std::string> row{label};
    for (TaskAttribute attr : kAllAttributes) {
        header.emplace_back(to_string(attr));
        auto it = report.attribute_sr.find(attr);
        row.push_back(it != report.attribute_sr.end() && it->second ? format_percent(*it->second) : "-");
    }
    return render_rows({header, row});
}

std::string render_error_table(const ErrorBreakdown& errors, const std::string& label, bool as_counts) {
    const auto cols = error_columns();
    std::vector<std::string> header{label};
    for (const auto& c : cols) header.push_back(c.name);
    header.emplace_back("All");

    auto row_for = [&](const std::string& name, const PartitionStats& p) {
        std::vector<std::string> row{name};
        for (const auto& c : cols) {
            if (c.code) {
                row.push_back(as_counts ? std::to_string(p.count(*c.code)) : format_percent(p.share(*c.code)));
            } else {
                row.push_back(as_counts ? fmt::format("{}/{}", p.count(*c.cat), p.failed_steps)
                                        : format_percent(p.share(*c.cat)));
            }
        }
        row.push_back(as_counts ? fmt::format("{}/{}", p.failed_steps, p.total_steps)
                                : format_percent(p.failed_fraction()));
        return row;
    };
    return render_rows({header, row_for("successful", errors.successful), row_for("failed", errors.failed)});
}

std::string render_action_table(std::span<const ActionStats> actions) {
    std::vector<std::vector<std::string>> rows = {{"Action", "Attempts", "SR", "E-errors", "P"}};
    for (const auto& a : actions) {
        rows.push_back({std::string(to_string(a.action)), std::to_string(a.attempts), format_percent(a.success_rate),
                        std::to_string(a.execution_errors), format_percent(a.execution_error_share)});
    }
    return render_rows(rows);
}

std::string error_plot_csv(const ErrorBreakdown& errors) {
    std::string out = "partition,key,count,denominator,percent\n";
    auto emit = [&](const char* name, const PartitionStats& p) {
        for (const auto& c : error_columns()) {
            const std::int64_t n = c.code ? p.count(*c.code) : p.count(*c.cat);
            const Rational share = c.code ? p.share(*c.code) : p.share(*c.cat);
            out += fmt::format("{},{},{},{},{}\n", name, c.name, n, p.failed_steps, format_percent(share));
        }
        out += fmt::format("{},All,{},{},{}\n", name, p.failed_steps, p.total_steps, format_percent(p.failed_fraction()));
    };
    emit("successful", errors.successful);
    emit("failed", errors.failed);
    return out;
}

}  // namespace homeplan::metrics
