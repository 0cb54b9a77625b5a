#include "homeplan/cli/app.hpp"

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "homeplan/cli/commands.hpp"
#include "homeplan/core/errors.hpp"

namespace homeplan::cli {

namespace fs = std::filesystem;

namespace {

struct Flags {
    std::optional<std::string> config;
    std::optional<std::uint64_t> seed;
    std::optional<long long> jobs;
    std::optional<std::string> out;

    std::optional<std::string> tasks;
    std::optional<std::string> scenes;
    std::optional<std::string> planner;
    std::optional<long long> runs;
    std::optional<long long> budget;

    std::optional<std::string> logs;
    std::optional<std::string> report;
    std::optional<std::string> label;
    std::optional<std::string> plwsr;
    std::optional<std::string> plot_data;
    bool counts = false;

    std::optional<std::string> dataset;
    std::optional<long long> rewrites;
    std::optional<std::string> rewriter;
    std::optional<std::string> lexicon;
    std::optional<double> holdout;
    bool no_dedup = false;
};

nlohmann::json profiles_of(const ConfigFile& file) {
    const nlohmann::json* p = file.find("profiles");
    if (!p) return nlohmann::json::object();
    if (!p->is_object()) throw ConfigError("config key \"profiles\" must be an object of remote profiles");
    return *p;
}

int dispatch(const CLI::App& app, const Flags& f, Streams io) {
    ConfigFile file;
    std::optional<std::string> config_path = f.config;
    if (!config_path) {
        if (const char* env = std::getenv("HOMEPLAN_CONFIG"); env && *env) config_path = env;
    }
    if (config_path) file = ConfigFile::load(*config_path);
    const Layers layers(file);

    const fs::path data = default_data_dir();
    const fs::path out = layers.path(f.out, "out", "out");
    const fs::path tasks = layers.path(f.tasks, "tasks", data / "tasks");
    const std::uint64_t seed = layers.seed(f.seed, "seed", 0);

    if (app.got_subcommand("run")) {
        RunConfig c;
        c.tasks = tasks;
        c.scenes = layers.path(f.scenes, "scenes", data / "scenes");
        c.planner = layers.text(f.planner, "planner", "scripted:" + (data / "plans").string());
        c.runs = static_cast<int>(layers.integer(f.runs, "runs", 3, 1));
        c.budget = static_cast<int>(layers.integer(f.budget, "budget", 20, 1));
        c.seed = seed;
        c.jobs = static_cast<int>(layers.integer(f.jobs, "jobs", 1, 1));
        c.out = out;
        c.profiles = profiles_of(file);
        c.profile_base = file.base();
        return cmd_run(c, io);
    }
    const fs::path logs = f.logs ? fs::path(*f.logs) : out / "logs";
    if (app.got_subcommand("evaluate")) {
        EvaluateConfig c;
        c.logs = logs;
        c.tasks = tasks;
        c.report = layers.path(f.report, "report", out / "report.json");
        c.label = f.label.value_or("");
        const std::string mode = layers.text(f.plwsr, "plwsr", "alfred");
        if (mode != "alfred" && mode != "literal") {
            throw ConfigError(fmt::format("plwsr must be alfred or literal (got \"{}\")", mode));
        }
        c.plwsr = mode == "literal" ? metrics::PlwsrMode::Literal : metrics::PlwsrMode::Alfred;
        return cmd_evaluate(c, io);
    }
    if (app.got_subcommand("report-errors")) {
        ErrorReportConfig c;
        c.logs = logs;
        c.tasks = tasks;
        if (f.plot_data) c.plot_data = *f.plot_data;
        c.label = f.label.value_or("");
        c.counts = f.counts;
        return cmd_report_errors(c, io);
    }
    AugmentConfig c;
    c.logs = logs;
    c.tasks = tasks;
    c.out = layers.path(f.dataset, "dataset", out / "dataset");
    c.lexicon = layers.path(f.lexicon, "lexicon", data / "lexicon" / "corrupt_actions.txt");
    c.rewrites = static_cast<int>(layers.integer(f.rewrites, "rewrites", 3, 0));
    c.rewriter = layers.text(f.rewriter, "rewriter", "identity");
    c.dedup = layers.boolean(f.no_dedup ? std::optional<bool>(false) : std::nullopt, "dedup", true);
    c.holdout = layers.number(f.holdout, "holdout", 0.0);
    if (c.holdout < 0.0 || c.holdout > 1.0) throw ConfigError("holdout must be a fraction within [0, 1]");
    c.seed = seed;
    c.profiles = profiles_of(file);
    c.profile_base = file.base();
    return cmd_augment(c, io);
}

}  // namespace

int main_entry(int argc, const char* const* argv, Streams io) {
    CLI::App app{"Household task-planning benchmark: run episodes, score them and build training data."};
    app.name("homeplan");
    app.require_subcommand(1);
    app.fallthrough();

    Flags f;
    app.add_option("--config", f.config, "JSON settings file (env HOMEPLAN_CONFIG)");
    app.add_option("--seed", f.seed, "Run seed (default 0)");
    app.add_option("--jobs", f.jobs, "Parallel episodes for run (default 1)");
    app.add_option("--out", f.out, "Output directory (default out)");
    app.add_option("--tasks", f.tasks, "Task directory (default: bundled tasks)");

    auto* run = app.add_subcommand("run", "Run every task a number of times and log the trajectories");
    run->add_option("--scenes", f.scenes, "Scene directory (default: bundled scenes)");
    run->add_option("--planner", f.planner, "scripted:PATH | console | remote:PROFILE | constant:TEXT");
    run->add_option("--runs", f.runs, "Runs per task (default 3)");
    run->add_option("--budget", f.budget, "Step budget per run (default 20)");

    auto* eval = app.add_subcommand("evaluate", "Score logs: SR, PLWSR, TP, SRR, SER and SR per task type");
    eval->add_option("logs", f.logs, "Log directory (default <out>/logs)");
    eval->add_option("--report", f.report, "Where to write the JSON report (default <out>/report.json)");
    eval->add_option("--label", f.label, "Row label (default: log directory name)");
    eval->add_option("--plwsr", f.plwsr, "Path-length weight: alfred or literal");

    auto* errs = app.add_subcommand("report-errors", "Break failed steps down by error code and category");
    errs->add_option("logs", f.logs, "Log directory (default <out>/logs)");
    errs->add_option("--plot-data", f.plot_data, "Write a CSV for plotting");
    errs->add_option("--label", f.label, "Table label");
    errs->add_flag("--counts", f.counts, "Show raw counts instead of percentages");

    auto* aug = app.add_subcommand("augment", "Build SFT and preference datasets from logs");
    aug->add_option("logs", f.logs, "Log directory (default <out>/logs)");
    aug->add_option("--dataset", f.dataset, "Dataset directory (default <out>/dataset)");
    aug->add_option("--rewrites", f.rewrites, "Rewritten copies per sample (default 3)");
    aug->add_option("--rewriter", f.rewriter, "identity | remote:PROFILE");
    aug->add_option("--lexicon", f.lexicon, "Corrupted action names, one per line");
    aug->add_option("--holdout", f.holdout, "Fraction of tasks written to the held-out files");
    aug->add_flag("--no-dedup", f.no_dedup, "Keep duplicate preference pairs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, io.out, io.err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        return dispatch(app, f, io);
    } catch (const ConfigError& e) {
        io.err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const MissingTask& e) {
        io.err << "error: " << e.what() << " (pass the matching --tasks directory)\n";
        return kExitConfig;
    } catch (const SchemaError& e) {
        io.err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        io.err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace homeplan::cli
