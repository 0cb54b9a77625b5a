#include <iostream>
#include <memory>

#include <fmt/format.h>

#include "homeplan/cli/commands.hpp"
#include "homeplan/core/schema.hpp"
#include "homeplan/data/dataset.hpp"

namespace homeplan::cli {

namespace fs = std::filesystem;

int cmd_augment(const AugmentConfig& cfg, Streams io) {
    LoadedLogs logs = load_logs(cfg.logs);
    for (const auto& w : logs.warnings) io.err << "warning: " << w << '\n';
    const std::vector<Task> tasks = load_tasks(cfg.tasks);

    std::string lexicon_text;
    try {
        lexicon_text = read_file(cfg.lexicon);
    } catch (const std::exception&) {
        throw ConfigError(fmt::format("lexicon {} cannot be read (set --lexicon)", cfg.lexicon.string()));
    }
    std::optional<data::CorruptionLexicon> lexicon;
    try {
        lexicon.emplace(data::CorruptionLexicon::parse(lexicon_text));
    } catch (const data::EmptyLexicon& e) {
        throw ConfigError(fmt::format("lexicon {}: {}", cfg.lexicon.string(), e.what()));
    }
    for (const auto& r : lexicon->rejected()) {
        io.err << fmt::format("warning: lexicon entry \"{}\" is a valid action and was ignored\n", r);
    }

    std::unique_ptr<data::Rewriter> rewriter;
    if (cfg.rewriter == "identity") {
        rewriter = std::make_unique<data::IdentityRewriter>();
    } else if (cfg.rewriter.starts_with("remote:")) {
        auto profile = remote_profile(cfg.profiles, cfg.rewriter.substr(7), cfg.profile_base);
        rewriter = std::make_unique<data::RemoteRewriter>(std::make_shared<planners::ChatClient>(profile));
    } else {
        throw ConfigError(fmt::format("unknown rewriter \"{}\"; use identity or remote:PROFILE", cfg.rewriter));
    }

    data::DatasetConfig dc;
    dc.seed = cfg.seed;
    dc.rewrites = cfg.rewrites;
    dc.rewriter = rewriter.get();
    dc.lexicon = &*lexicon;
    dc.lexicon_text = lexicon_text;
    dc.dedup = cfg.dedup;
    if (cfg.holdout > 0.0) {
        std::vector<std::string> ids;
        for (const Task& t : tasks) ids.push_back(t.id);
        dc.heldout_tasks = data::holdout_tasks(ids, cfg.holdout, cfg.seed);
    }

    const data::Datasets d = data::build_datasets(logs.trajectories, tasks, dc);
    data::write_datasets(d, cfg.out);

    const auto& m = d.manifest;
    if (m["rewrite_failures"].get<int>() > 0) {
        io.err << fmt::format("warning: {} rewrites failed and were skipped\n", m["rewrite_failures"].get<int>());
    }
    io.out << fmt::format("trajectories: {} ({} aborted excluded)\n", m["trajectories"].get<int>(),
                          m["excluded_aborted"].get<int>());
    io.out << fmt::format("sft: {} samples from {} successful steps with {} rewrites each\n", m["sft_total"].get<int>(),
                          m["sft_base"].get<int>(), cfg.rewrites);
    for (const auto& [src, counts] : m["dpo_sources"].items()) {
        io.out << fmt::format("dpo {}: {} generated, {} kept\n", src, counts["generated"].get<int>(),
                              counts["kept"].get<int>());
    }
    io.out << fmt::format("dpo: {} pairs ({} duplicates removed{})\n", m["dpo_total"].get<int>(),
                          m["duplicates_removed"].get<int>(), cfg.dedup ? "" : ", dedup off");
    io.out << fmt::format("written to {}\n", cfg.out.string());
    return kExitOk;
}

}  // namespace homeplan::cli
