#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "fairdiv/instance.hpp"
#include "fairdiv/rational.hpp"

namespace fairdiv {

/// Refined lexicographic MNW objective: first the number of agents with
/// positive value, then the product of those values (empty product = 1).
struct MnwKey {
    int positive_count = 0;
    Rational product{1};

    std::strong_ordering operator<=>(const MnwKey& other) const {
        if (auto c = positive_count <=> other.positive_count; c != 0) return c;
        return product <=> other.product;
    }
    bool operator==(const MnwKey&) const = default;
};

/// Plain Nash welfare: product over all agents (zero if anyone gets zero).
Rational nash_welfare(const Instance& inst, const Allocation& alloc);

MnwKey mnw_key(const Instance& inst, const Allocation& alloc);

struct MnwResult {
    MnwKey key;
    /// All optima (canonical enumeration order) or a single representative,
    /// always completed with the zero-valued goods.
    std::vector<Allocation> allocations;
    std::uint64_t search_space_size = 0;
};

struct BruteForceOptions {
    bool all_optima = false;
    std::uint64_t budget = 20'000'000;  // maximum number of enumerated assignments
    int threads = 1;
};

/// Exhaustive MNW over the sub-instance of positively-valued goods, then
/// completion via complete_with_zero_goods. Throws BudgetError when the
/// assignment space exceeds the budget.
MnwResult brute_force_mnw(const Instance& inst, const BruteForceOptions& options = {});

/// Appends every good that no agent values positively to one agent of
/// minimum bundle value (lowest index on ties). `partial` must cover exactly
/// the positively-valued goods.
Allocation complete_with_zero_goods(const Instance& inst, const Allocation& partial);

/// Polynomial-time MNW for binary instances: maximum matching fixes the set
/// of positive agents, alternating-path balancing maximizes their product,
/// completion handles the zero goods. Attains the brute-force key.
Allocation binary_mnw(const Instance& inst);

}  // namespace fairdiv
