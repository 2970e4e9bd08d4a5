#include "fairdiv/fairness.hpp"

#include <algorithm>

#include "fairdiv/errors.hpp"

namespace fairdiv {

std::string notion_name(FairnessNotion notion) {
    switch (notion) {
        case FairnessNotion::EF: return "ef";
        case FairnessNotion::EF1: return "ef1";
        case FairnessNotion::EFX: return "efx";
        case FairnessNotion::EFX0: return "efx0";
    }
    return "?";
}

std::optional<FairnessNotion> notion_from_name(std::string_view name) {
    if (name == "ef") return FairnessNotion::EF;
    if (name == "ef1") return FairnessNotion::EF1;
    if (name == "efx") return FairnessNotion::EFX;
    if (name == "efx0") return FairnessNotion::EFX0;
    return std::nullopt;
}

namespace {

void require_valid(const Instance& inst, const Allocation& alloc) {
    AllocationCheck check = validate_allocation(inst, alloc);
    if (!check.ok) throw ValidationError("invalid allocation: " + check.diagnostic);
}

// Is (envier, envied) a violating pair, and if so through which good?
// Returns the first violating good in index order (nullopt good for EF).
std::optional<EnvyWitness> pair_violation(const Instance& inst, const Allocation& alloc,
                                          FairnessNotion notion, int i, int j,
                                          const Rational& own, const Rational& others) {
    const Bundle& envied = alloc.bundles[j];
    switch (notion) {
        case FairnessNotion::EF:
            if (own < others) return EnvyWitness{i, j, std::nullopt};
            return std::nullopt;
        case FairnessNotion::EF1: {
            if (envied.empty()) return std::nullopt;
            // One removal must suffice; the strongest removal is the max-valued good.
            int best = envied.front();
            for (int g : envied) {
                if (inst.value(i, g) > inst.value(i, best)) best = g;
            }
            if (own < others - inst.value(i, best)) return EnvyWitness{i, j, best};
            return std::nullopt;
        }
        case FairnessNotion::EFX:
        case FairnessNotion::EFX0: {
            for (int g : envied) {
                if (notion == FairnessNotion::EFX && !inst.value(i, g).is_positive()) continue;
                if (own < others - inst.value(i, g)) return EnvyWitness{i, j, g};
            }
            return std::nullopt;
        }
    }
    return std::nullopt;
}

}  // namespace

FairnessReport check(const Instance& inst, const Allocation& alloc, FairnessNotion notion) {
    require_valid(inst, alloc);
    int n = inst.agent_count();

    std::vector<Rational> own(n);
    for (int i = 0; i < n; ++i) own[i] = bundle_value(inst, i, alloc.bundles[i]);

    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            Rational others = bundle_value(inst, i, alloc.bundles[j]);
            if (auto witness = pair_violation(inst, alloc, notion, i, j, own[i], others))
                return {notion, false, witness};
        }
    }
    return {notion, true, std::nullopt};
}

Rational efx_factor(const Instance& inst, const Allocation& alloc) {
    require_valid(inst, alloc);
    int n = inst.agent_count();

    Rational factor(1);
    for (int i = 0; i < n; ++i) {
        Rational own = bundle_value(inst, i, alloc.bundles[i]);
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            Rational whole = bundle_value(inst, i, alloc.bundles[j]);
            for (int g : alloc.bundles[j]) {
                if (!inst.value(i, g).is_positive()) continue;
                Rational rest = whole - inst.value(i, g);
                if (!rest.is_positive()) continue;
                Rational ratio = own / rest;
                if (ratio < factor) factor = ratio;
                if (factor.is_zero()) return factor;
            }
        }
    }
    return factor;
}

namespace {

// Exhaustive scan over subsets X of `theirs`: feasible when the envier,
// holding own+X, is EFX toward the remainder. The full bundle is always
// feasible, so a minimum exists.
EfxValueWitness minimal_augmenting_set(const Instance& inst, int agent, const Rational& own,
                                       int other, const Bundle& theirs) {
    std::size_t k = theirs.size();
    std::vector<Rational> vals(k);
    for (std::size_t t = 0; t < k; ++t) vals[t] = inst.value(agent, theirs[t]);

    EfxValueWitness best;
    best.other = other;
    bool have_best = false;

    std::uint64_t limit = std::uint64_t{1} << k;
    for (std::uint64_t mask = 0; mask < limit; ++mask) {
        Rational taken;
        for (std::size_t t = 0; t < k; ++t) {
            if (mask >> t & 1) taken += vals[t];
        }
        Rational augmented = own + taken;

        // Remainder check: augmented value must cover the remainder minus its
        // cheapest good; equivalently every single-removal of the remainder.
        bool feasible = true;
        Rational remainder;
        for (std::size_t t = 0; t < k; ++t) {
            if (!(mask >> t & 1)) remainder += vals[t];
        }
        for (std::size_t t = 0; t < k && feasible; ++t) {
            if (mask >> t & 1) continue;
            if (augmented < remainder - vals[t]) feasible = false;
        }
        if (!feasible) continue;

        if (!have_best) {
            have_best = true;
        } else if (augmented > best.value) {
            continue;
        } else if (augmented == best.value) {
            std::size_t card = static_cast<std::size_t>(__builtin_popcountll(mask));
            if (card > best.set.size()) continue;
            if (card == best.set.size()) {
                Bundle candidate;
                for (std::size_t t = 0; t < k; ++t) {
                    if (mask >> t & 1) candidate.push_back(theirs[t]);
                }
                if (!(candidate < best.set)) continue;
                best.set = std::move(candidate);
                best.value = augmented;
                continue;
            }
        }
        best.value = augmented;
        best.set.clear();
        for (std::size_t t = 0; t < k; ++t) {
            if (mask >> t & 1) best.set.push_back(theirs[t]);
        }
    }
    return best;
}

}  // namespace

EfxValue efx_value(const Instance& inst, const Allocation& alloc, int agent,
                   std::size_t subset_cap) {
    require_valid(inst, alloc);
    if (agent < 0 || agent >= inst.agent_count())
        throw ValidationError("agent index out of range");

    Rational own = bundle_value(inst, agent, alloc.bundles[agent]);
    EfxValue result;
    result.chi = own;  // with no other agents, chi degenerates to the own value

    for (int j = 0; j < inst.agent_count(); ++j) {
        if (j == agent) continue;
        if (alloc.bundles[j].size() > subset_cap)
            throw BudgetError("bundle of agent " + std::to_string(j) + " has " +
                              std::to_string(alloc.bundles[j].size()) +
                              " goods, exceeding the subset-search cap of " +
                              std::to_string(subset_cap));
        EfxValueWitness w = minimal_augmenting_set(inst, agent, own, j, alloc.bundles[j]);
        if (w.value > result.chi) result.chi = w.value;
        result.per_other.push_back(std::move(w));
    }
    return result;
}

VefxReport vefx_factor(const Instance& inst, const Allocation& alloc, std::size_t subset_cap) {
    require_valid(inst, alloc);
    int n = inst.agent_count();

    VefxReport report;
    report.factor = Rational(1);
    report.chi.reserve(n);
    report.witness.reserve(n);

    for (int i = 0; i < n; ++i) {
        EfxValue ev = efx_value(inst, alloc, i, subset_cap);
        std::optional<EfxValueWitness> arg;
        for (const auto& w : ev.per_other) {
            if (w.value == ev.chi) {
                arg = w;
                break;
            }
        }
        Rational own = bundle_value(inst, i, alloc.bundles[i]);
        // chi_i = 0 only when agent i values nothing reachable; treat as satisfied.
        Rational ratio = ev.chi.is_zero() ? Rational(1) : own / ev.chi;
        if (ratio < report.factor) report.factor = ratio;
        report.chi.push_back(std::move(ev.chi));
        report.witness.push_back(std::move(arg));
    }
    return report;
}

}  // namespace fairdiv
