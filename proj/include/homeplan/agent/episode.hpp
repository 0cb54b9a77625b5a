#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "homeplan/agent/instruction.hpp"
#include "homeplan/agent/planner.hpp"
#include "homeplan/core/environment.hpp"
#include "homeplan/core/trajectory.hpp"

namespace homeplan::agent {

struct EpisodeOptions {
    int budget = 20;
    int max_attempts = 3;  // per step, E1 only
    std::string system_info = default_system_prompt();
    PromptTemplate prompt;
};

struct Exchange {
    Instruction instruction;
    std::string response;
};
using Transcript = std::vector<Exchange>;

class EpisodeAborted : public std::runtime_error {
public:
    EpisodeAborted(const std::string& what, Trajectory partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}
    const Trajectory& partial() const { return partial_; }

private:
    Trajectory partial_;
};

/// Drives one episode until End or budget exhaustion. Planner transport
/// failures surface as EpisodeAborted with the steps taken so far.
Trajectory run_episode(Environment& env, Planner& planner, const Task& task, const EpisodeOptions& options,
                       int run_index = 0, Transcript* transcript = nullptr);

}  // namespace homeplan::agent
