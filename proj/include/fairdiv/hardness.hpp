#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "fairdiv/instance.hpp"
#include "fairdiv/rational.hpp"

namespace fairdiv {

struct Literal {
    int var = 0;  // 0-based variable index
    bool positive = true;

    bool operator==(const Literal&) const = default;
};

/// 3-CNF where every variable occurs exactly twice positively and twice
/// negatively, hence 3 * clause_count = 4 * var_count.
struct Formula2P2N {
    int var_count = 0;
    std::vector<std::array<Literal, 3>> clauses;

    int clause_count() const { return static_cast<int>(clauses.size()); }
};

/// DIMACS CNF input. Validates clause width 3 and the 2P2N occurrence counts.
Formula2P2N parse_formula(std::string_view dimacs);

std::string serialize_formula(const Formula2P2N& formula);

bool satisfies(const Formula2P2N& formula, const std::vector<bool>& assignment);

/// The 3-value instance built from a 2P2N formula, with its role maps.
///
/// Agent layout: T_i = 2i, F_i = 2i+1 for variables i; clause-agent t of
/// clause j = 2n + 3j + t. Good layout: s_{i,k} = 5i + k (k = 0..4);
/// p_j = 5n + 2j, q_j = 5n + 2j + 1.
struct ReductionOutput {
    Instance instance;
    Rational a;          // the large value, chosen as the integer 3m
    Rational threshold;  // U = 2^n * a^(2m+n)
    int var_count = 0;
    int clause_count = 0;
    /// Designated variable-good of each clause-agent, indexed by t-major
    /// clause order (3j + t); each occurrence of a literal maps to a
    /// distinct copy of the variable's goods.
    std::vector<int> clause_agent_good;

    int agent_var_true(int i) const { return 2 * i; }
    int agent_var_false(int i) const { return 2 * i + 1; }
    int agent_clause(int j, int t) const { return 2 * var_count + 3 * j + t; }
    int good_s(int i, int k) const { return 5 * i + k; }
    int good_p(int j) const { return 5 * var_count + 2 * j; }
    int good_q(int j) const { return 5 * var_count + 2 * j + 1; }

    std::string agent_name(int agent) const;
    std::string good_name(int good) const;
};

ReductionOutput reduce(const Formula2P2N& formula);

/// Forward direction: a satisfying assignment yields an allocation with Nash
/// welfare at least the threshold U. Throws DomainError on an unsatisfying
/// assignment.
Allocation allocation_from_assignment(const ReductionOutput& reduction,
                                      const std::vector<bool>& assignment);

/// Applies the welfare-preserving rewrites until fixpoint: goods move to
/// positive valuers, each clause's p/q pair splits across distinct
/// clause-agents, and the s_{i,0}-holder sheds the unit goods toward their
/// unique other valuer. Never decreases the Nash welfare.
Allocation normalize_allocation(const ReductionOutput& reduction, const Allocation& alloc);

/// Reads the assignment off the s_{i,0} holders of a normalized allocation.
std::vector<bool> assignment_from_allocation(const ReductionOutput& reduction,
                                             const Allocation& alloc);

}  // namespace fairdiv
