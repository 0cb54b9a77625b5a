#pragma once

#include <optional>

#include "homeplan/core/types.hpp"

namespace homeplan {

/// Result of one execution attempt.
struct ExecOutcome {
    Feedback feedback;
    /// Post-step views; unset when the world was not consulted.
    std::optional<Observations> observations;
    /// Authoritative hand state after an E2 failure.
    std::optional<Inventory> inventory_correction;
};

/// The low-level side of the planner/executor protocol.
class Environment {
public:
    virtual ~Environment() = default;

    virtual Observations observe() const = 0;
    /// One attempt. Never returns F1 (format screening happens upstream).
    virtual ExecOutcome execute(const Subtask& subtask, const Inventory& inventory) = 0;
};

}  // namespace homeplan
