#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "homeplan/data/sft.hpp"

namespace homeplan::data {

enum class PairSource { Sift, OrderChange, ActionChange, ModelChange };
inline constexpr std::array<PairSource, 4> kAllPairSources = {PairSource::Sift, PairSource::OrderChange,
                                                              PairSource::ActionChange, PairSource::ModelChange};

/// "sift", "order_change", "action_change", "model_change".
std::string_view to_string(PairSource source);

struct PreferencePair {
    std::string prompt;
    PlannerOutput chosen;
    PlannerOutput rejected;
    PairSource source = PairSource::Sift;
    std::string task_id;
};

class EmptyLexicon : public std::invalid_argument {
public:
    EmptyLexicon() : std::invalid_argument("corruption lexicon has no usable entries") {}
};

/// Non-standard action names. Entries that parse as a valid action (in any
/// casing) are not corruptions and are rejected.
class CorruptionLexicon {
public:
    /// One entry per line; blank lines and '#' comments ignored. Throws EmptyLexicon.
    static CorruptionLexicon parse(std::string_view text);
    explicit CorruptionLexicon(std::vector<std::string> entries);

    const std::vector<std::string>& entries() const { return entries_; }
    const std::vector<std::string>& rejected() const { return rejected_; }

private:
    std::vector<std::string> entries_;
    std::vector<std::string> rejected_;
};

/// Failed step followed by a successful one: the failure is rejected, the fix chosen.
std::vector<PreferencePair> dpo_sift(const Trajectory& trajectory, const Task& task, const PromptConfig& config);

/// Adjacent successes: the earlier output is chosen over the later one.
std::vector<PreferencePair> dpo_order_change(const Trajectory& trajectory, const Task& task,
                                             const PromptConfig& config);

/// Each successful non-End step against a copy with a corrupted action name.
std::vector<PreferencePair> dpo_action_change(const Trajectory& trajectory, const Task& task,
                                              const PromptConfig& config, const CorruptionLexicon& lexicon,
                                              std::uint64_t seed);

/// Each successful non-End step against the other model of the same kind.
std::vector<PreferencePair> dpo_model_change(const Trajectory& trajectory, const Task& task,
                                             const PromptConfig& config);

/// Same-category alternative, if the category has exactly one other member.
std::optional<ModelChoice> sibling_model(ModelChoice model);

}  // namespace homeplan::data
