#pragma once

#include <stdexcept>
#include <string>

#include "homeplan/agent/instruction.hpp"

namespace homeplan::agent {

/// The planner could not be reached or gave no usable reply at the transport level.
class PlannerTransportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Planner {
public:
    virtual ~Planner() = default;
    /// Raw reply text. Throws PlannerTransportError.
    virtual std::string next(const Instruction& instruction) = 0;
};

}  // namespace homeplan::agent
