#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <unistd.h>

#include <fmt/format.h>
#include <json.hpp>

#include "homeplan/cli/app.hpp"
#include "homeplan/cli/commands.hpp"
#include "homeplan/core/schema.hpp"
#include "support/fixtures.hpp"

using namespace homeplan;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) {
        path = fs::temp_directory_path() / fmt::format("homeplan_cli_{}_{}", name, ::getpid());
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args, const std::string& input = "") {
    args.insert(args.begin(), "homeplan");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::istringstream in(input);
    std::ostringstream out, err;
    const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), {in, out, err});
    return {code, out.str(), err.str()};
}

std::vector<fs::path> logs_in(const fs::path& dir) {
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir)) out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

void clear_env() {
    for (const char* k : {"HOMEPLAN_CONFIG", "HOMEPLAN_RUNS", "HOMEPLAN_BUDGET", "HOMEPLAN_SEED", "HOMEPLAN_OUT",
                          "HOMEPLAN_TASKS", "HOMEPLAN_SCENES", "HOMEPLAN_PLANNER", "HOMEPLAN_JOBS"}) {
        ::unsetenv(k);
    }
}

const std::string kDeadProfile = R"({"endpoint": "http://127.0.0.1:1/v1/chat/completions", "model": "m",
                                      "max_retries": 0, "timeout_seconds": 2, "backoff_ms": 1})";

}  // namespace

TEST_CASE("run over the bundled tasks") {
    clear_env();
    TempDir tmp("run");
    const std::string out = tmp.path.string();

    auto r = invoke({"run", "--out", out});
    CHECK(r.code == cli::kExitOk);
    CHECK(logs_in(tmp.path / "logs").size() == 30);
    CHECK(r.out.find("30 episodes over 10 tasks") != std::string::npos);
    CHECK(r.out.find("[30/30]") != std::string::npos);

    SUBCASE("same seed, same bytes, any job count") {
        TempDir other("run_again");
        REQUIRE(invoke({"run", "--out", other.path.string(), "--jobs", "3"}).code == 0);
        for (const auto& f : logs_in(tmp.path / "logs")) {
            CHECK(read_file(f) == read_file(other.path / "logs" / f.filename()));
        }
    }
    SUBCASE("evaluate its own output") {
        auto e = invoke({"evaluate", "--out", out});
        CHECK(e.code == 0);
        CHECK(e.out.find("SR  PLWSR") != std::string::npos);
        CHECK(e.out.find("human_style") != std::string::npos);
        auto report = json::parse(read_file(tmp.path / "report.json"));
        CHECK(report.contains("sr"));
    }
    SUBCASE("a rerun replaces old logs") {
        REQUIRE(invoke({"run", "--out", out, "--runs", "1", "--budget", "5"}).code == 0);
        auto files = logs_in(tmp.path / "logs");
        CHECK(files.size() == 10);
        for (const auto& f : files) {
            CHECK(parse_trajectory_log(read_file(f)).size() <= 5);
            CHECK(f.filename().string().ends_with("__run0.traj.json"));
        }
    }
}

TEST_CASE("configuration errors exit with 2") {
    clear_env();
    TempDir tmp("config");
    const std::string out = tmp.path.string();
    auto missing = invoke({"run", "--out", out, "--scenes", (tmp.path / "nowhere").string()});
    CHECK(missing.code == cli::kExitConfig);
    CHECK(missing.err.find("scenes directory") != std::string::npos);

    CHECK(invoke({"run", "--out", out, "--planner", "psychic"}).code == cli::kExitConfig);
    CHECK(invoke({"run", "--out", out, "--runs", "0"}).code == cli::kExitConfig);
    CHECK(invoke({"run", "--out", out, "--planner", "remote:nope"}).code == cli::kExitConfig);
    CHECK(invoke({"evaluate", (tmp.path / "absent").string()}).code == cli::kExitConfig);
    CHECK(invoke({"frobnicate"}).code == cli::kExitConfig);
    CHECK(invoke({"--help"}).code == cli::kExitOk);

    write_file(tmp.path / "bad.json", "{not json");
    CHECK(invoke({"--config", (tmp.path / "bad.json").string(), "run", "--out", out}).code == cli::kExitConfig);
}

TEST_CASE("flags beat environment beats config file") {
    clear_env();
    TempDir tmp("layers");
    write_file(tmp.path / "cfg.json", json{{"runs", 2}, {"budget", 4}, {"out", "from_config"}}.dump());
    const std::string cfg = (tmp.path / "cfg.json").string();

    REQUIRE(invoke({"--config", cfg, "run"}).code == 0);
    const fs::path cfg_logs = tmp.path / "from_config" / "logs";
    CHECK(logs_in(cfg_logs).size() == 20);
    for (const auto& f : logs_in(cfg_logs)) CHECK(parse_trajectory_log(read_file(f)).size() <= 4);

    ::setenv("HOMEPLAN_RUNS", "1", 1);
    REQUIRE(invoke({"--config", cfg, "run"}).code == 0);
    CHECK(logs_in(cfg_logs).size() == 10);

    REQUIRE(invoke({"--config", cfg, "run", "--runs", "3"}).code == 0);
    CHECK(logs_in(cfg_logs).size() == 30);

    ::setenv("HOMEPLAN_RUNS", "many", 1);
    auto bad = invoke({"--config", cfg, "run"});
    CHECK(bad.code == cli::kExitConfig);
    CHECK(bad.err.find("HOMEPLAN_RUNS") != std::string::npos);
    clear_env();
}

TEST_CASE("evaluate") {
    clear_env();
    TempDir tmp("evaluate");
    SUBCASE("empty logs directory") {
        fs::create_directories(tmp.path / "logs");
        auto r = invoke({"evaluate", (tmp.path / "logs").string(), "--tasks", (tmp.path / "logs").string(), "--report",
                      (tmp.path / "r.json").string()});
        CHECK(r.code == 0);
        CHECK(r.err.find("warning: no trajectory logs") != std::string::npos);
        CHECK(r.out.find("0.00*  0.00*") != std::string::npos);
    }
    SUBCASE("worked example gives TP 50.00") {
        auto ex = testing::worked_tp_example();
        write_file(tmp.path / "tasks" / "drawer_can.json", serialize_task(ex.task));
        write_file(tmp.path / "logs" / cli::log_file_name("drawer_can", 0), serialize_trajectory(ex.trajectory));
        write_file(tmp.path / "logs" / "broken.traj.json", "{}");
        auto r = invoke({"evaluate", (tmp.path / "logs").string(), "--tasks", (tmp.path / "tasks").string(), "--report",
                      (tmp.path / "r.json").string(), "--label", "example"});
        CHECK(r.code == 0);
        CHECK(r.out.find("50.00") != std::string::npos);
        CHECK(r.err.find("corrupt") != std::string::npos);
        auto report = json::parse(read_file(tmp.path / "r.json"));
        CHECK(report["excluded_corrupt"] == 1);
        CHECK(report["episodes"][0]["tp"] == "1/2");
    }
    SUBCASE("unknown task id") {
        fs::create_directories(tmp.path / "tasks");
        write_file(tmp.path / "logs" / "x.traj.json", serialize_trajectory(testing::worked_tp_example().trajectory));
        auto r = invoke({"evaluate", (tmp.path / "logs").string(), "--tasks", (tmp.path / "tasks").string(), "--report",
                      (tmp.path / "r.json").string()});
        CHECK(r.code == cli::kExitConfig);
        CHECK(r.err.find("drawer_can") != std::string::npos);
    }
}

TEST_CASE("report-errors") {
    clear_env();
    TempDir tmp("errors");
    Task task;
    task.id = "apple";
    task.instruction = "Pick up the apple";
    task.attributes = {TaskAttribute::ShortHorizon};
    task.scene = "kitchen";
    task.keypaths = {{{ActionType::Pick, "apple"}}};
    task.expert_length = 1;
    write_file(tmp.path / "tasks" / "apple.json", serialize_task(task));
    const std::string tasks = (tmp.path / "tasks").string();
    const std::string logs = (tmp.path / "logs").string();

    SUBCASE("7 logic errors among 126 failed steps") {
        using E = ErrorCode;
        auto runs = testing::successful_runs_with_failures(
            {{E::L1, 5}, {E::L2, 1}, {E::L3, 1}, {E::D1, 56}, {E::F1, 2}, {E::F2, 22}, {E::E1, 20}, {E::E2, 19}}, 416,
            "apple");
        for (const auto& t : runs) write_file(tmp.path / "logs" / cli::log_file_name("apple", t.run_index()), serialize_trajectory(t));
        auto r = invoke({"report-errors", logs, "--tasks", tasks, "--plot-data", (tmp.path / "plot.csv").string()});
        CHECK(r.code == 0);
        CHECK(r.out.find(" 5.56 ") != std::string::npos);
        CHECK(r.out.find("44.44") != std::string::npos);
        CHECK(r.out.find("30.29") != std::string::npos);
        CHECK(read_file(tmp.path / "plot.csv").starts_with("partition,key,count,denominator,percent\n"));
    }
    SUBCASE("one D1 failure") {
        Trajectory t("apple", 0);
        t.append(testing::step(ActionType::Pick, "apple", ModelChoice::RT1X, false, ErrorCode::D1));
        t.finish(Termination::Budget);
        write_file(tmp.path / "logs" / cli::log_file_name("apple", 0), serialize_trajectory(t));
        auto r = invoke({"report-errors", logs, "--tasks", tasks});
        CHECK(r.code == 0);
        CHECK(r.out.find("100.00") != std::string::npos);
    }
}

TEST_CASE("augment") {
    clear_env();
    TempDir tmp("augment");
    const std::string out = tmp.path.string();
    REQUIRE(invoke({"run", "--out", out, "--runs", "1"}).code == 0);

    std::size_t successes = 0;
    for (const auto& f : logs_in(tmp.path / "logs")) {
        for (const auto& s : parse_trajectory_log(read_file(f)).steps()) successes += s.succeeded();
    }

    auto r = invoke({"augment", "--out", out});
    CHECK(r.code == 0);
    auto manifest = json::parse(read_file(tmp.path / "dataset" / "manifest.json"));
    CHECK(manifest["sft_total"] == 4 * successes);
    CHECK(manifest["end_chosen_violations"] == 0);
    const std::string sft = read_file(tmp.path / "dataset" / "sft.jsonl");
    CHECK(static_cast<std::size_t>(std::count(sft.begin(), sft.end(), '\n')) == 4 * successes);

    SUBCASE("byte-identical reruns") {
        const std::string dpo = read_file(tmp.path / "dataset" / "dpo.jsonl");
        REQUIRE(invoke({"augment", "--out", out, "--dataset", (tmp.path / "again").string()}).code == 0);
        CHECK(read_file(tmp.path / "again" / "dpo.jsonl") == dpo);
        CHECK(read_file(tmp.path / "again" / "sft.jsonl") == sft);
    }
    SUBCASE("no dedup keeps every generated pair") {
        REQUIRE(invoke({"augment", "--out", out, "--no-dedup", "--dataset", (tmp.path / "all").string()}).code == 0);
        auto m = json::parse(read_file(tmp.path / "all" / "manifest.json"));
        CHECK(m["duplicates_removed"] == 0);
        CHECK(m["dpo_total"].get<int>() ==
              m["dpo_generated"].get<int>() - m["identical_pairs_removed"].get<int>() -
                  m["end_chosen_violations"].get<int>());
        CHECK(m["dpo_total"].get<int>() >= manifest["dpo_total"].get<int>());
    }
    SUBCASE("holdout") {
        REQUIRE(invoke({"augment", "--out", out, "--holdout", "0.2", "--dataset", (tmp.path / "split").string()}).code == 0);
        CHECK(fs::exists(tmp.path / "split" / "sft_heldout.jsonl"));
        auto m = json::parse(read_file(tmp.path / "split" / "manifest.json"));
        CHECK(m["heldout_tasks"].size() == 2);
    }
    SUBCASE("unreachable rewriter degrades to fewer samples") {
        write_file(tmp.path / "cfg.json", R"({"profiles": {"dead": )" + kDeadProfile + "}}");
        auto d = invoke({"--config", (tmp.path / "cfg.json").string(), "augment", "--out", out, "--rewriter",
                      "remote:dead", "--rewrites", "1", "--dataset", (tmp.path / "degraded").string()});
        CHECK(d.code == 0);
        CHECK(d.err.find("rewrites failed") != std::string::npos);
        auto m = json::parse(read_file(tmp.path / "degraded" / "manifest.json"));
        CHECK(m["sft_total"] == successes);
        CHECK(m["rewrite_failures"] == successes);
    }
}

TEST_CASE("console and remote planners through run") {
    clear_env();
    TempDir tmp("planners");
    const std::string out = tmp.path.string();
    std::string input;
    for (int i = 0; i < 10; ++i) input += "end\n";
    auto r = invoke({"run", "--out", out, "--runs", "1", "--planner", "console", "--jobs", "4"}, input);
    CHECK(r.code == 0);
    CHECK(r.out.find("Task: ") != std::string::npos);
    for (const auto& f : logs_in(tmp.path / "logs")) {
        auto t = parse_trajectory_log(read_file(f));
        CHECK(t.size() == 1);
        CHECK(t.terminated_by_end());
    }

    write_file(tmp.path / "cfg.json", R"({"profiles": {"dead": )" + kDeadProfile + "}}");
    auto dead = invoke({"--config", (tmp.path / "cfg.json").string(), "run", "--out", out, "--runs", "1", "--planner",
                     "remote:dead"});
    CHECK(dead.code == cli::kExitTransport);
    CHECK(dead.out.find("10 aborted") != std::string::npos);
    CHECK(logs_in(tmp.path / "logs").size() == 10);
    auto e = invoke({"evaluate", "--out", out});
    CHECK(e.code == 0);
    CHECK(e.err.find("excluded 10 aborted") != std::string::npos);
}
