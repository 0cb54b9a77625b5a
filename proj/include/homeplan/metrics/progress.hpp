#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/rational.hpp>

#include "homeplan/core/trajectory.hpp"
#include "homeplan/core/types.hpp"

namespace homeplan::metrics {

using Rational = boost::rational<std::int64_t>;

class EmptyKeypathSet : public std::invalid_argument {
public:
    EmptyKeypathSet() : std::invalid_argument("keypath set is empty") {}
};

/// Progress of one keypath against a trajectory. `checked` is always a
/// prefix of `keypath` and `cursor == checked.size()`.
struct MatchState {
    Keypath keypath;
    Keypath checked;
    std::size_t cursor = 0;

    bool complete() const { return cursor == keypath.size(); }
    Rational ratio() const;
};

/// Single left-to-right scan. A step advances the cursor only if it
/// succeeded and its (action, target) equals the node under the cursor.
MatchState match_keypath(const Trajectory& trajectory, const Keypath& keypath);

/// Best matched fraction over all keypaths, exact.
Rational compute_tp(const Trajectory& trajectory, const KeypathSet& keypaths);

/// Steps whose predecessor failed.
int count_replans(const Trajectory& trajectory);

/// Steps that did work (End excluded).
int trajectory_length(const Trajectory& trajectory);

}  // namespace homeplan::metrics
