#include "homeplan/data/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "homeplan/agent/parse.hpp"
#include "homeplan/core/errors.hpp"
#include "homeplan/core/schema.hpp"

namespace homeplan::data {

using ojson = nlohmann::ordered_json;

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 failed");
    }
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
    return hex;
}

std::set<std::string> holdout_tasks(std::vector<std::string> task_ids, double fraction, std::uint64_t seed) {
    if (fraction < 0.0 || fraction > 1.0) throw std::invalid_argument("holdout fraction must be within [0, 1]");
    std::sort(task_ids.begin(), task_ids.end());
    task_ids.erase(std::unique(task_ids.begin(), task_ids.end()), task_ids.end());
    std::mt19937_64 rng(seed);
    std::shuffle(task_ids.begin(), task_ids.end(), rng);
    const auto n = static_cast<std::size_t>(std::lround(fraction * static_cast<double>(task_ids.size())));
    return {task_ids.begin(), task_ids.begin() + static_cast<std::ptrdiff_t>(n)};
}

Datasets build_datasets(const std::vector<Trajectory>& trajectories, const std::vector<Task>& tasks,
                        const DatasetConfig& config) {
    if (!config.lexicon) throw std::invalid_argument("a corruption lexicon is required");
    std::map<std::string, const Task*> by_id;
    for (const Task& t : tasks) by_id[t.id] = &t;

    std::vector<const Trajectory*> order;
    int aborted = 0;
    for (const Trajectory& t : trajectories) {
        if (t.aborted()) {
            ++aborted;
            continue;
        }
        if (!by_id.count(t.task_id())) throw MissingTask(t.task_id());
        order.push_back(&t);
    }
    std::stable_sort(order.begin(), order.end(), [](const Trajectory* a, const Trajectory* b) {
        return std::pair(a->task_id(), a->run_index()) < std::pair(b->task_id(), b->run_index());
    });

    Datasets out;
    const auto split_of = [&](const std::string& task_id) -> DatasetSplit& {
        return config.heldout_tasks.count(task_id) ? out.heldout : out.train;
    };

    // Conversation samples.
    std::vector<ConversationSample> base;
    for (const Trajectory* t : order) {
        auto samples = sft_convert(*t, *by_id.at(t->task_id()), config.prompt);
        base.insert(base.end(), std::make_move_iterator(samples.begin()), std::make_move_iterator(samples.end()));
    }
    IdentityRewriter identity;
    Rewriter& rewriter = config.rewriter ? *config.rewriter : identity;
    RewriteResult expanded = expand_with_rewrites(base, rewriter, config.rewrites);
    for (const ConversationSample& s : expanded.samples) {
        ojson line;
        line["prompt"] = s.prompt(config.prompt);
        line["response"] = s.response_text();
        split_of(s.task_id).sft_lines.push_back(line.dump());
    }

    // Preference pairs.
    std::map<PairSource, int> generated;
    std::map<PairSource, int> kept;
    for (PairSource src : kAllPairSources) generated[src] = kept[src] = 0;
    int duplicates = 0;
    int identical = 0;
    int end_chosen = 0;
    std::unordered_set<std::string> seen;
    for (const Trajectory* t : order) {
        const Task& task = *by_id.at(t->task_id());
        std::vector<PreferencePair> pairs = dpo_sift(*t, task, config.prompt);
        for (auto&& more : {dpo_order_change(*t, task, config.prompt),
                            dpo_action_change(*t, task, config.prompt, *config.lexicon, config.seed),
                            dpo_model_change(*t, task, config.prompt)}) {
            pairs.insert(pairs.end(), more.begin(), more.end());
        }
        for (const PreferencePair& p : pairs) {
            ++generated[p.source];
            if (p.chosen.is_end()) {
                ++end_chosen;
                continue;
            }
            const std::string chosen = agent::format_planner_output(p.chosen);
            const std::string rejected = agent::format_planner_output(p.rejected);
            if (chosen == rejected) {
                ++identical;
                continue;
            }
            if (config.dedup && !seen.insert(p.prompt + '\0' + chosen + '\0' + rejected).second) {
                ++duplicates;
                continue;
            }
            ++kept[p.source];
            ojson line;
            line["prompt"] = p.prompt;
            line["chosen"] = chosen;
            line["rejected"] = rejected;
            line["source"] = to_string(p.source);
            split_of(p.task_id).dpo_lines.push_back(line.dump());
        }
    }

    ojson& m = out.manifest;
    m["seed"] = config.seed;
    m["lexicon_sha256"] = sha256_hex(config.lexicon_text);
    m["trajectories"] = order.size();
    m["excluded_aborted"] = aborted;
    m["rewrites"] = config.rewrites;
    m["sft_base"] = base.size();
    m["sft_total"] = expanded.samples.size();
    m["rewrite_failures"] = expanded.failures;
    int total_generated = 0;
    int total_kept = 0;
    for (PairSource src : kAllPairSources) {
        m["dpo_sources"][std::string(to_string(src))] = {{"generated", generated[src]}, {"kept", kept[src]}};
        total_generated += generated[src];
        total_kept += kept[src];
    }
    m["dpo_generated"] = total_generated;
    m["dpo_total"] = total_kept;
    m["dedup"] = config.dedup;
    m["duplicates_removed"] = duplicates;
    m["identical_pairs_removed"] = identical;
    m["end_chosen_violations"] = end_chosen;
    m["heldout_tasks"] = config.heldout_tasks;
    m["train"] = {{"sft", out.train.sft_lines.size()}, {"dpo", out.train.dpo_lines.size()}};
    m["heldout"] = {{"sft", out.heldout.sft_lines.size()}, {"dpo", out.heldout.dpo_lines.size()}};
    return out;
}

namespace {

std::string join_lines(const std::vector<std::string>& lines) {
    std::string out;
    for (const auto& l : lines) out += l + '\n';
    return out;
}

}  // namespace

void write_datasets(const Datasets& d, const std::filesystem::path& dir) {
    write_file(dir / "sft.jsonl", join_lines(d.train.sft_lines));
    write_file(dir / "dpo.jsonl", join_lines(d.train.dpo_lines));
    if (!d.manifest.value("heldout_tasks", ojson::array()).empty()) {
        write_file(dir / "sft_heldout.jsonl", join_lines(d.heldout.sft_lines));
        write_file(dir / "dpo_heldout.jsonl", join_lines(d.heldout.dpo_lines));
    }
    write_file(dir / "manifest.json", d.manifest.dump(2) + "\n");
}

}  // namespace homeplan::data
