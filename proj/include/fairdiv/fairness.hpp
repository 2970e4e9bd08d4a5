#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fairdiv/instance.hpp"
#include "fairdiv/rational.hpp"

namespace fairdiv {

enum class FairnessNotion { EF, EF1, EFX, EFX0 };

std::string notion_name(FairnessNotion notion);
std::optional<FairnessNotion> notion_from_name(std::string_view name);

/// A concrete violation: `envier` envies `envied` in a way the notion forbids.
/// `good` is the removal that still leaves envy (absent for EF, where no
/// removal is involved).
struct EnvyWitness {
    int envier = -1;
    int envied = -1;
    std::optional<int> good;

    bool operator==(const EnvyWitness&) const = default;
};

struct FairnessReport {
    FairnessNotion notion;
    bool holds = true;
    std::optional<EnvyWitness> witness;  // present iff !holds
};

/// Exact evaluation of EF / EF1 / EFX / EFX0. EFX quantifies only over goods
/// the envier values positively; EFX0 over all goods. The witness is the
/// first violation in lexicographic (envier, envied, good) order.
FairnessReport check(const Instance& inst, const Allocation& alloc, FairnessNotion notion);

/// Largest alpha in [0,1] such that the allocation is alpha-EFX. An agent
/// with value 0 facing a positive post-removal bundle forces alpha = 0; pairs
/// with no positive post-removal bundle contribute 1.
Rational efx_factor(const Instance& inst, const Allocation& alloc);

/// Minimal augmenting set taken from one other agent's bundle: the subset X
/// of that bundle with v_i(A_i u X) minimal subject to i being EFX toward the
/// remainder. Ties break by smaller value, then smaller cardinality, then
/// lexicographic good order.
struct EfxValueWitness {
    int other = -1;
    Bundle set;
    Rational value;  // v_i(A_i u set)
};

struct EfxValue {
    Rational chi;                            // max over others of the minima
    std::vector<EfxValueWitness> per_other;  // one entry per j != i, ascending j
};

/// Exhaustive over subsets of each other bundle; bundles larger than
/// subset_cap raise BudgetError. With a single agent, chi = v_i(A_i).
EfxValue efx_value(const Instance& inst, const Allocation& alloc, int agent,
                   std::size_t subset_cap = 22);

struct VefxReport {
    std::vector<Rational> chi;                           // per agent
    std::vector<std::optional<EfxValueWitness>> witness;  // arg-max other, per agent
    Rational factor;  // min_i v_i(A_i) / chi_i, with 1 when chi_i = 0
};

VefxReport vefx_factor(const Instance& inst, const Allocation& alloc,
                       std::size_t subset_cap = 22);

}  // namespace fairdiv
