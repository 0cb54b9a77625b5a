#include "homeplan/data/dpo.hpp"

#include <random>
#include <sstream>

namespace homeplan::data {

std::string_view to_string(PairSource source) {
    switch (source) {
        case PairSource::Sift: return "sift";
        case PairSource::OrderChange: return "order_change";
        case PairSource::ActionChange: return "action_change";
        case PairSource::ModelChange: return "model_change";
    }
    return "?";
}

CorruptionLexicon::CorruptionLexicon(std::vector<std::string> entries) {
    for (auto& e : entries) {
        if (parse_action(e)) {
            rejected_.push_back(std::move(e));
        } else {
            entries_.push_back(std::move(e));
        }
    }
    if (entries_.empty()) throw EmptyLexicon();
}

CorruptionLexicon CorruptionLexicon::parse(std::string_view text) {
    std::vector<std::string> entries;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#') continue;
        entries.push_back(line.substr(b, line.find_last_not_of(" \t\r") - b + 1));
    }
    return CorruptionLexicon(std::move(entries));
}

std::optional<ModelChoice> sibling_model(ModelChoice model) {
    switch (model) {
        case ModelChoice::NoMaD: return ModelChoice::PixNav;
        case ModelChoice::PixNav: return ModelChoice::NoMaD;
        case ModelChoice::RT1X: return ModelChoice::Octo;
        case ModelChoice::Octo: return ModelChoice::RT1X;
        case ModelChoice::M3: return std::nullopt;
    }
    return std::nullopt;
}

namespace {

std::string prompt_at(const Trajectory& t, std::size_t i, const Task& task, const PromptConfig& config) {
    return agent::assemble_instruction(state_before(t, i, task.instruction, config), config.prompt).text();
}

bool substantive(const StepRecord& s) { return s.succeeded() && !s.output.is_end(); }

}  // namespace

std::vector<PreferencePair> dpo_sift(const Trajectory& t, const Task& task, const PromptConfig& config) {
    std::vector<PreferencePair> out;
    const auto steps = t.steps();
    for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
        if (steps[i].succeeded() || !substantive(steps[i + 1])) continue;
        out.push_back({prompt_at(t, i, task, config), steps[i + 1].output, steps[i].output, PairSource::Sift, t.task_id()});
    }
    return out;
}

std::vector<PreferencePair> dpo_order_change(const Trajectory& t, const Task& task, const PromptConfig& config) {
    std::vector<PreferencePair> out;
    const auto steps = t.steps();
    for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
        if (!substantive(steps[i]) || !steps[i + 1].succeeded()) continue;
        out.push_back(
            {prompt_at(t, i, task, config), steps[i].output, steps[i + 1].output, PairSource::OrderChange, t.task_id()});
    }
    return out;
}

std::vector<PreferencePair> dpo_action_change(const Trajectory& t, const Task& task, const PromptConfig& config,
                                              const CorruptionLexicon& lexicon, std::uint64_t seed) {
    std::vector<std::uint32_t> material = {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                                           static_cast<std::uint32_t>(t.run_index())};
    for (unsigned char c : t.task_id()) material.push_back(c);
    std::seed_seq seq(material.begin(), material.end());
    std::mt19937_64 rng(seq);
    std::uniform_int_distribution<std::size_t> pick(0, lexicon.entries().size() - 1);

    std::vector<PreferencePair> out;
    const auto steps = t.steps();
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (!substantive(steps[i])) continue;
        PlannerOutput rejected = steps[i].output;
        rejected.action = lexicon.entries()[pick(rng)];
        out.push_back({prompt_at(t, i, task, config), steps[i].output, std::move(rejected), PairSource::ActionChange,
                       t.task_id()});
    }
    return out;
}

std::vector<PreferencePair> dpo_model_change(const Trajectory& t, const Task& task, const PromptConfig& config) {
    std::vector<PreferencePair> out;
    const auto steps = t.steps();
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (!substantive(steps[i])) continue;
        auto model = steps[i].output.model_choice();
        auto other = model ? sibling_model(*model) : std::nullopt;
        if (!other) continue;
        PlannerOutput rejected = steps[i].output;
        rejected.model = std::string(to_string(*other));
        out.push_back({prompt_at(t, i, task, config), steps[i].output, std::move(rejected), PairSource::ModelChange,
                       t.task_id()});
    }
    return out;
}

}  // namespace homeplan::data
