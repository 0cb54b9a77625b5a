#pragma once

#include <iosfwd>

#include "homeplan/agent/planner.hpp"

namespace homeplan::planners {

/// A person plays the planner: the instruction is printed and one reply is
/// read back. A reply continues over several lines while its braces are
/// unbalanced. "end" is shorthand for the End reply; closed input also ends.
class ConsolePlanner : public agent::Planner {
public:
    ConsolePlanner(std::istream& in, std::ostream& out) : in_(in), out_(out) {}
    std::string next(const agent::Instruction& instruction) override;

private:
    std::istream& in_;
    std::ostream& out_;
};

}  // namespace homeplan::planners
