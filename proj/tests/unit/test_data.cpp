#include <doctest.h>

#include <random>

#include <fmt/format.h>

#include "homeplan/agent/episode.hpp"
#include "homeplan/agent/parse.hpp"
#include "homeplan/core/schema.hpp"
#include "homeplan/data/dataset.hpp"
#include "homeplan/sim/scene.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/planners.hpp"
#include "support/scenes.hpp"

using namespace homeplan;
using namespace homeplan::data;
using testing::end_step;
using testing::step;
using A = ActionType;
using M = ModelChoice;

namespace {

Task simple_task(const std::string& id = "t") {
    Task t;
    t.id = id;
    t.instruction = "Put the banana on the table";
    t.keypaths = {{{A::Pick, "banana"}}};
    t.expert_length = 3;
    return t;
}

// Non-End steps with the given outcomes ('S' success, 'F' failure), then optionally End.
Trajectory from_statuses(const std::string& statuses, bool with_end = false, const std::string& id = "t") {
    static const std::vector<std::pair<A, std::string>> nodes = {
        {A::GoTo, "fridge"}, {A::Open, "fridge"}, {A::Pick, "banana"}, {A::GoTo, "table"}, {A::Place, "table"}};
    Trajectory t(id, 0);
    for (std::size_t i = 0; i < statuses.size(); ++i) {
        const auto& [a, target] = nodes[i % nodes.size()];
        const M m = a == A::GoTo ? M::NoMaD : M::RT1X;
        t.append(step(a, target, m, statuses[i] == 'S', ErrorCode::D1));
    }
    if (with_end) t.append(end_step());
    t.finish(with_end ? Termination::End : Termination::Budget);
    return t;
}

const CorruptionLexicon& lexicon() {
    static const CorruptionLexicon lex =
        CorruptionLexicon::parse(read_file(std::string(HOMEPLAN_DATA_DIR) + "/lexicon/corrupt_actions.txt"));
    return lex;
}

std::vector<std::string> fields(const PlannerOutput& o) { return {o.analysis, o.action, o.target, o.model}; }

// Indices of the fields in which two outputs differ.
std::vector<int> diff(const PlannerOutput& a, const PlannerOutput& b) {
    std::vector<int> out;
    auto fa = fields(a);
    auto fb = fields(b);
    for (int i = 0; i < 4; ++i) {
        if (fa[i] != fb[i]) out.push_back(i);
    }
    return out;
}

}  // namespace

TEST_CASE("sft keeps only successful steps") {
    PromptConfig cfg;
    CHECK(sft_convert(from_statuses("SSFSS"), simple_task(), cfg).size() == 4);
    CHECK(sft_convert(from_statuses("FFFF"), simple_task(), cfg).empty());
    auto samples = sft_convert(from_statuses("SFS"), simple_task(), cfg);
    REQUIRE(samples.size() == 2);
    CHECK(samples[1].step_index == 3);
    CHECK(samples[1].state.history.size() == 1);
    const std::string prompt = samples[1].prompt(cfg);
    CHECK(prompt.find("1. Go to fridge: success") != std::string::npos);
    CHECK(prompt.find("Open fridge") == std::string::npos);
    CHECK(prompt.find("Feedback: success") != std::string::npos);
}

TEST_CASE("sft prompts match what the planner saw") {
    sim::Scene scene = sim::load_scene(testing::kKitchenScene);
    std::vector<std::string> replies;
    for (int i = 0; i < 5; ++i) {
        replies.push_back(testing::reply("Go to", "table", "NoMaD", "walk " + std::to_string(i)));
        replies.push_back(testing::reply("Go to", "fridge", "PixNav", "back " + std::to_string(i)));
    }
    testing::SequencePlanner planner(replies);
    agent::EpisodeOptions opts;
    opts.budget = 10;
    agent::Transcript transcript;
    Trajectory t = agent::run_episode(scene, planner, simple_task(), opts, 0, &transcript);
    REQUIRE(t.size() == 10);

    PromptConfig cfg;
    auto samples = sft_convert(t, simple_task(), cfg);
    REQUIRE(samples.size() == 10);
    for (std::size_t k = 0; k < samples.size(); ++k) {
        CHECK(samples[k].state.history.size() == k);
        CHECK(samples[k].prompt(cfg) == transcript[k].instruction.text());
        CHECK(samples[k].response_text() == agent::format_planner_output(t.steps()[k].output));
    }
}

TEST_CASE("sft prompts keep the hand state of dropped failures") {
    Trajectory t("t", 0);
    t.append(step(A::Pick, "apple", M::RT1X));
    t.append(step(A::Place, "table", M::RT1X, false, ErrorCode::E2));
    t.append(step(A::Pick, "apple", M::RT1X));
    t.finish(Termination::Budget);
    auto samples = sft_convert(t, simple_task(), PromptConfig{});
    REQUIRE(samples.size() == 2);
    CHECK(samples[1].state.inventory.empty());
    CHECK(samples[1].state.history.size() == 1);
}

namespace {

class TaggingRewriter : public Rewriter {
public:
    std::string rewrite(const std::string& text, TextKind kind, int variant) override {
        ++calls;
        if (fail_every && calls % fail_every == 0) throw RewriterTransportError("down");
        return fmt::format("[v{} {}] {}", variant, kind == TextKind::Task ? "task" : "why", text);
    }
    int calls = 0;
    int fail_every = 0;
};

}  // namespace

TEST_CASE("rewrites multiply samples and touch only free text") {
    auto base = sft_convert(from_statuses("SSSFS"), simple_task(), PromptConfig{});
    REQUIRE(base.size() == 4);

    IdentityRewriter identity;
    auto none = expand_with_rewrites(base, identity, 0);
    CHECK(none.samples.size() == base.size());

    auto tripled = expand_with_rewrites(base, identity, 2);
    REQUIRE(tripled.samples.size() == 12);
    for (std::size_t i = 0; i < tripled.samples.size(); ++i) {
        const auto& s = tripled.samples[i];
        CHECK(s.variant == static_cast<int>(i / 4));
        CHECK(s.response_text() == base[i % 4].response_text());
        CHECK(s.prompt(PromptConfig{}) == base[i % 4].prompt(PromptConfig{}));
    }

    TaggingRewriter tagger;
    auto tagged = expand_with_rewrites(base, tagger, 3);
    REQUIRE(tagged.samples.size() == 16);
    CHECK(tagged.failures == 0);
    const auto& r = tagged.samples[4 * 2 + 1];
    CHECK(r.variant == 2);
    CHECK(r.state.task_text == "[v2 task] Put the banana on the table");
    CHECK(r.response.analysis == "[v2 why] " + base[1].response.analysis);
    CHECK(r.response.action == base[1].response.action);
    CHECK(r.response.target == base[1].response.target);
    CHECK(r.response.model == base[1].response.model);
    CHECK(r.state.history == base[1].state.history);
    CHECK(r.state.inventory == base[1].state.inventory);

    TaggingRewriter flaky;
    flaky.fail_every = 4;
    auto partial = expand_with_rewrites(base, flaky, 3);
    CHECK(partial.failures > 0);
    CHECK(partial.samples.size() + static_cast<std::size_t>(partial.failures) == 16);
}

TEST_CASE("930 samples with three rewrites give 3720") {
    auto one = sft_convert(from_statuses("SSSSSSSSSS"), simple_task(), PromptConfig{});
    std::vector<ConversationSample> base;
    for (int i = 0; i < 93; ++i) base.insert(base.end(), one.begin(), one.end());
    REQUIRE(base.size() == 930);
    IdentityRewriter identity;
    CHECK(expand_with_rewrites(base, identity, 3).samples.size() == 3720);
}

TEST_CASE("sift pairs") {
    PromptConfig cfg;
    auto p = dpo_sift(from_statuses("SFS"), simple_task(), cfg);
    REQUIRE(p.size() == 1);
    const Trajectory t = from_statuses("SFS");
    CHECK(p[0].rejected == t.steps()[1].output);
    CHECK(p[0].chosen == t.steps()[2].output);
    CHECK(p[0].prompt == agent::assemble_instruction(state_before(t, 1, simple_task().instruction, cfg)).text());
    CHECK(p[0].prompt.find("1. Go to fridge: success") != std::string::npos);

    CHECK(dpo_sift(from_statuses("FFS"), simple_task(), cfg).size() == 1);
    CHECK(dpo_sift(from_statuses("SSSS"), simple_task(), cfg).empty());
    // A failure fixed only by End gives no pair; End is never chosen.
    CHECK(dpo_sift(from_statuses("SF", true), simple_task(), cfg).empty());

    // Every status string up to length 4.
    for (int len = 0; len <= 4; ++len) {
        for (int mask = 0; mask < (1 << len); ++mask) {
            std::string s;
            for (int i = 0; i < len; ++i) s += (mask >> i) & 1 ? 'S' : 'F';
            std::size_t expected = 0;
            for (int i = 0; i + 1 < len; ++i) expected += s[i] == 'F' && s[i + 1] == 'S';
            CHECK(dpo_sift(from_statuses(s), simple_task(), cfg).size() == expected);
        }
    }
}

TEST_CASE("order-change pairs") {
    PromptConfig cfg;
    CHECK(dpo_order_change(from_statuses("SSS"), simple_task(), cfg).size() == 2);
    auto with_end = dpo_order_change(from_statuses("S", true), simple_task(), cfg);
    REQUIRE(with_end.size() == 1);
    CHECK(with_end[0].rejected.is_end());
    CHECK_FALSE(with_end[0].chosen.is_end());
    CHECK(dpo_order_change(from_statuses("SFSF"), simple_task(), cfg).empty());
}

TEST_CASE("action-change pairs") {
    PromptConfig cfg;
    Trajectory t("t", 0);
    t.append(step(A::Pick, "apple", M::RT1X));
    t.append(end_step());
    t.finish(Termination::End);
    auto p = dpo_action_change(t, simple_task(), cfg, lexicon(), 7);
    REQUIRE(p.size() == 1);
    CHECK(p[0].rejected.action == "hold");
    CHECK(diff(p[0].chosen, p[0].rejected) == std::vector<int>{1});
    CHECK_FALSE(agent::validate_output(p[0].rejected));

    CHECK(dpo_action_change(from_statuses("SSSSSS"), simple_task(), cfg, lexicon(), 1).size() == 6);
    CHECK(dpo_action_change(from_statuses("SSFSS"), simple_task(), cfg, lexicon(), 1).size() == 4);
    auto first = dpo_action_change(from_statuses("SSSS"), simple_task(), cfg, lexicon(), 3);
    auto second = dpo_action_change(from_statuses("SSSS"), simple_task(), cfg, lexicon(), 3);
    REQUIRE(first.size() == second.size());
    for (std::size_t i = 0; i < first.size(); ++i) CHECK(first[i].rejected.action == second[i].rejected.action);
}

TEST_CASE("corruption lexicon") {
    CHECK_THROWS_AS(CorruptionLexicon::parse("# nothing\n\n"), EmptyLexicon);
    CHECK_THROWS_AS(CorruptionLexicon::parse("PICK\ngo to\nPut\n"), EmptyLexicon);
    auto lex = CorruptionLexicon::parse("grab\n  PICK \nshut\n");
    CHECK(lex.entries() == std::vector<std::string>{"grab", "shut"});
    CHECK(lex.rejected() == std::vector<std::string>{"PICK"});
    for (const auto& e : lexicon().entries()) CHECK_FALSE(parse_action(e));
    CHECK(lexicon().rejected().empty());
}

TEST_CASE("model-change pairs") {
    PromptConfig cfg;
    Trajectory t("t", 0);
    t.append(step(A::GoTo, "fridge", M::NoMaD));
    t.append(step(A::Pick, "apple", M::RT1X));
    t.append(step(A::Pick, "pear", M::M3));
    t.append(step(A::GoTo, "sink", M::PixNav, false));
    t.append(end_step());
    t.finish(Termination::End);
    auto p = dpo_model_change(t, simple_task(), cfg);
    REQUIRE(p.size() == 2);
    CHECK(p[0].rejected.model == "PixNav");
    CHECK(p[1].rejected.model == "Octo");
    for (const auto& pair : p) CHECK(diff(pair.chosen, pair.rejected) == std::vector<int>{3});
}

TEST_CASE("generators on random trajectories match independent counts") {
    std::mt19937_64 rng(123);
    PromptConfig cfg;
    for (int n = 0; n < 200; ++n) {
        Trajectory t = testing::random_trajectory(rng, 12, "t", n, 0.35, true);
        const auto steps = t.steps();
        std::size_t sift = 0, order = 0, action = 0, model = 0;
        for (std::size_t i = 0; i < steps.size(); ++i) {
            const bool ok = steps[i].feedback.status == Status::Success;
            const bool end = ok && steps[i].output.action == "End";
            const bool next_ok = i + 1 < steps.size() && steps[i + 1].feedback.status == Status::Success;
            const bool next_end = next_ok && steps[i + 1].output.action == "End";
            if (!ok && next_ok && !next_end) ++sift;
            if (ok && !end && next_ok) ++order;
            if (ok && !end) ++action;
            if (ok && !end && steps[i].output.model != "M3") ++model;
        }
        auto s = dpo_sift(t, simple_task(), cfg);
        auto o = dpo_order_change(t, simple_task(), cfg);
        auto a = dpo_action_change(t, simple_task(), cfg, lexicon(), 9);
        auto m = dpo_model_change(t, simple_task(), cfg);
        CHECK(s.size() == sift);
        CHECK(o.size() == order);
        CHECK(a.size() == action);
        CHECK(m.size() == model);
        for (const auto* set : {&s, &o, &a, &m}) {
            for (const auto& pair : *set) CHECK_FALSE(pair.chosen.is_end());
        }
        for (const auto& pair : a) CHECK(diff(pair.chosen, pair.rejected) == std::vector<int>{1});
        for (const auto& pair : m) CHECK(diff(pair.chosen, pair.rejected) == std::vector<int>{3});
    }
}

TEST_CASE("building datasets") {
    std::mt19937_64 rng(5);
    std::vector<Trajectory> corpus;
    std::vector<Task> tasks = {simple_task("a"), simple_task("b"), simple_task("c")};
    for (int n = 0; n < 30; ++n) corpus.push_back(testing::random_trajectory(rng, 10, tasks[n % 3].id, n / 3, 0.35, true));

    const std::string lex_text = read_file(std::string(HOMEPLAN_DATA_DIR) + "/lexicon/corrupt_actions.txt");
    DatasetConfig cfg;
    cfg.seed = 11;
    cfg.lexicon = &lexicon();
    cfg.lexicon_text = lex_text;

    Datasets d = build_datasets(corpus, tasks, cfg);
    std::size_t successes = 0;
    for (const auto& t : corpus) {
        for (const auto& s : t.steps()) successes += s.succeeded();
    }
    CHECK(d.manifest["sft_base"] == successes);
    CHECK(d.manifest["sft_total"] == successes * 4);
    CHECK(d.train.sft_lines.size() == successes * 4);
    CHECK(d.manifest["end_chosen_violations"] == 0);
    CHECK(d.manifest["lexicon_sha256"] == sha256_hex(lex_text));
    CHECK(d.manifest["dpo_total"] == d.train.dpo_lines.size());
    for (const auto& line : d.train.dpo_lines) {
        auto j = nlohmann::json::parse(line);
        auto chosen = agent::parse_planner_output(j["chosen"].get<std::string>());
        REQUIRE(std::holds_alternative<PlannerOutput>(chosen));
        CHECK_FALSE(std::get<PlannerOutput>(chosen).is_end());
        CHECK(j["chosen"] != j["rejected"]);
    }

    SUBCASE("deterministic") {
        Datasets again = build_datasets(corpus, tasks, cfg);
        CHECK(again.train.sft_lines == d.train.sft_lines);
        CHECK(again.train.dpo_lines == d.train.dpo_lines);
        CHECK(again.manifest == d.manifest);
    }
    SUBCASE("ingesting twice changes nothing after dedup") {
        std::vector<Trajectory> doubled = corpus;
        doubled.insert(doubled.end(), corpus.begin(), corpus.end());
        cfg.rewrites = 0;
        Datasets single = build_datasets(corpus, tasks, cfg);
        Datasets twice = build_datasets(doubled, tasks, cfg);
        for (const auto* src : {"sift", "order_change", "action_change", "model_change"}) {
            CHECK(twice.manifest["dpo_sources"][src]["kept"] == single.manifest["dpo_sources"][src]["kept"]);
            CHECK(twice.manifest["dpo_sources"][src]["generated"] ==
                  2 * single.manifest["dpo_sources"][src]["generated"].get<int>());
        }
        CHECK(twice.train.dpo_lines == single.train.dpo_lines);
    }
    SUBCASE("no failures, no sift pairs") {
        std::vector<Trajectory> clean = {from_statuses("SSSS", true, "a"), from_statuses("SS", false, "b")};
        Datasets c = build_datasets(clean, tasks, cfg);
        CHECK(c.manifest["dpo_sources"]["sift"]["kept"] == 0);
    }
    SUBCASE("held-out tasks go to their own split") {
        cfg.heldout_tasks = {"b"};
        Datasets h = build_datasets(corpus, tasks, cfg);
        CHECK(h.train.sft_lines.size() + h.heldout.sft_lines.size() == successes * 4);
        CHECK_FALSE(h.heldout.sft_lines.empty());
    }
    SUBCASE("aborted logs are skipped and unknown tasks rejected") {
        Trajectory partial("a", 9);
        partial.append(step(A::Pick, "banana", M::RT1X));
        partial.finish(Termination::Aborted);
        std::vector<Trajectory> with_partial = corpus;
        with_partial.push_back(partial);
        CHECK(build_datasets(with_partial, tasks, cfg).manifest["excluded_aborted"] == 1);
        std::vector<Trajectory> unknown = {from_statuses("S", false, "zzz")};
        CHECK_THROWS_AS(build_datasets(unknown, tasks, cfg), MissingTask);
    }
}

TEST_CASE("holdout helper and hashing") {
    std::vector<std::string> ids;
    for (int i = 0; i < 20; ++i) ids.push_back("task" + std::to_string(i));
    auto h = holdout_tasks(ids, 0.1, 4);
    CHECK(h.size() == 2);
    CHECK(holdout_tasks(ids, 0.1, 4) == h);
    std::vector<std::string> reversed(ids.rbegin(), ids.rend());
    CHECK(holdout_tasks(reversed, 0.1, 4) == h);
    CHECK(holdout_tasks(ids, 0.0, 4).empty());
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
