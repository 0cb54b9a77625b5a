#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "homeplan/data/dpo.hpp"

namespace homeplan::data {

struct DatasetConfig {
    std::uint64_t seed = 0;
    int rewrites = 3;
    Rewriter* rewriter = nullptr;  // identity when null
    const CorruptionLexicon* lexicon = nullptr;
    std::string lexicon_text;  // hashed into the manifest
    bool dedup = true;
    PromptConfig prompt;
    std::set<std::string> heldout_tasks;
};

struct DatasetSplit {
    std::vector<std::string> sft_lines;  // {"prompt", "response"}
    std::vector<std::string> dpo_lines;  // {"prompt", "chosen", "rejected", "source"}
};

struct Datasets {
    DatasetSplit train;
    DatasetSplit heldout;
    nlohmann::ordered_json manifest;
};

/// Throws MissingTask when a trajectory names an unknown task. Aborted
/// trajectories are skipped and counted.
Datasets build_datasets(const std::vector<Trajectory>& trajectories, const std::vector<Task>& tasks,
                        const DatasetConfig& config);

/// Writes sft.jsonl, dpo.jsonl, manifest.json (and *_heldout.jsonl when a holdout exists).
void write_datasets(const Datasets& datasets, const std::filesystem::path& dir);

/// Deterministic choice of round(fraction * n) task ids for evaluation.
std::set<std::string> holdout_tasks(std::vector<std::string> task_ids, double fraction, std::uint64_t seed);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);

}  // namespace homeplan::data
