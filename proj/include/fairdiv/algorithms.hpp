#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "fairdiv/instance.hpp"
#include "fairdiv/rational.hpp"

namespace fairdiv {

/// Per-round record of one Match&Freeze execution, for invariant checking
/// and reproducibility audits.
struct MatchFreezeRound {
    std::vector<int> active;            // L at round start, in list order
    std::vector<int> remaining_before;  // R at round start
    std::vector<int> order;             // full agent list snapshot at round start
    std::vector<std::pair<int, int>> matched;   // (agent, good) from the matching
    std::vector<std::pair<int, int>> fallback;  // (agent, good) handed out in list order
    std::vector<int> freeze_set;                // F, ascending agent index
    std::optional<BigInt> freeze_duration;      // floor(a/b - 1); nullopt = forever (b = 0)
};

struct MatchFreezeTrace {
    Rational high_value;  // a
    Rational low_value;   // b
    std::vector<MatchFreezeRound> rounds;
    std::vector<int> freeze_count;                    // per agent
    std::vector<std::optional<int>> last_high_round;  // r_i: last round (1-based) in which
                                                      // any good the agent values at a
                                                      // was allocated; nullopt if none
};

/// Round-based solver for 2-value instances (values a > b >= 0): maximum
/// matching on a-valued edges, fallback goods for unmatched agents, and
/// temporary freezing of agents whose gains would create excess envy.
/// The output is validated to be EFX0 before returning.
std::pair<Allocation, MatchFreezeTrace> match_and_freeze(const Instance& inst);

/// Round-robin picking with the final partial round in reverse agent order.
/// Intended for instances where each agent's values span a ratio of at most
/// 2; enforce_ratio = false skips that precondition check (the procedure is
/// total either way, but the EFX guarantee needs the ratio).
Allocation modified_round_robin(const Instance& inst, bool enforce_ratio = true);

enum class GapMode { Exact, Bound };

/// Minimum positive difference between any two subset values, over all
/// agents. Exact mode enumerates the 2^m subset sums per agent (m capped);
/// bound mode returns 1/lcm(denominators), a guaranteed lower bound. Exact
/// mode throws DomainError when no two subsets differ (e.g. all values 0).
Rational min_gap(const Instance& inst, GapMode mode, int exact_good_cap = 20);

struct PerturbedInstance {
    Instance instance;               // zeros replaced by epsilon
    std::optional<Rational> epsilon; // nullopt for the degenerate m = 0 case
    Instance original;
};

/// Replaces every zero value by epsilon = 1 / ((m+1) * lcm(denominators)),
/// which lies strictly inside (0, delta/m). Any EFX allocation of the result
/// is EFX0 on the original instance.
PerturbedInstance perturb_for_efx0(const Instance& inst);

}  // namespace fairdiv
