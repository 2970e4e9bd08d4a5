#include "fairdiv/algorithms.hpp"

#include <boost/integer/common_factor_rt.hpp>

#include <algorithm>
#include <list>
#include <set>

#include "fairdiv/errors.hpp"
#include "fairdiv/fairness.hpp"
#include "fairdiv/matching.hpp"

namespace fairdiv {

namespace {

// The two values of a 2-value instance. Instances with a single distinct
// value v are admitted as (v, unused-lower) so that no entry equals b: with
// v > 0 the pair is (v, 0); all-zero instances use (1, 0). Either way the
// freeze condition never fires and the run degenerates to balanced rounds.
struct TwoValues {
    Rational high;
    Rational low;
};

TwoValues two_values_of(const Instance& inst) {
    std::set<Rational> distinct(inst.values().begin(), inst.values().end());
    if (distinct.size() > 2)
        throw DomainError("match_and_freeze requires a 2-value instance, found " +
                          std::to_string(distinct.size()) + " distinct values");
    if (distinct.empty()) return {Rational(1), Rational(0)};
    if (distinct.size() == 1) {
        Rational only = *distinct.begin();
        if (only.is_positive()) return {only, Rational(0)};
        return {Rational(1), Rational(0)};
    }
    auto it = distinct.begin();
    Rational low = *it++;
    Rational high = *it;
    return {high, low};
}

}  // namespace

std::pair<Allocation, MatchFreezeTrace> match_and_freeze(const Instance& inst) {
    const int n = inst.agent_count();
    const int m = inst.good_count();
    TwoValues values = two_values_of(inst);
    const bool low_is_zero = values.low.is_zero();

    // floor(a/b - 1); forever when b = 0.
    std::optional<BigInt> freeze_span;
    if (!low_is_zero) freeze_span = (values.high / values.low).floor() - 1;

    std::vector<std::vector<char>> is_high(n, std::vector<char>(m, 0));
    for (int i = 0; i < n; ++i) {
        for (int g = 0; g < m; ++g) is_high[i][g] = inst.value(i, g) == values.high;
    }

    MatchFreezeTrace trace;
    trace.high_value = values.high;
    trace.low_value = values.low;
    trace.freeze_count.assign(n, 0);
    trace.last_high_round.assign(n, std::nullopt);

    Allocation alloc;
    alloc.bundles.assign(n, {});

    std::list<int> order;
    for (int i = 0; i < n; ++i) order.push_back(i);
    std::vector<char> frozen(n, 0);
    std::vector<char> frozen_forever(n, 0);
    std::vector<BigInt> frozen_remaining(n, 0);

    std::vector<char> good_left(m, 1);
    int goods_left = m;
    int round = 0;

    while (goods_left > 0) {
        ++round;
        if (round > m + 1)
            throw InternalInvariantError("round count exceeded good count");

        // Thaw agents whose counters ran out; they rejoin at their current
        // list position (the tail segment they were moved to when frozen).
        // Everyone still frozen misses this round, so their counter drops.
        for (int i = 0; i < n; ++i) {
            if (!frozen[i] || frozen_forever[i]) continue;
            if (frozen_remaining[i] == 0) {
                frozen[i] = 0;
            } else {
                --frozen_remaining[i];
            }
        }

        MatchFreezeRound record;
        record.order.assign(order.begin(), order.end());
        for (int i : order) {
            if (!frozen[i]) record.active.push_back(i);
        }
        for (int g = 0; g < m; ++g) {
            if (good_left[g]) record.remaining_before.push_back(g);
        }

        // Last-round priority: with fewer goods than active agents, only the
        // first |R| agents of the list take part; never-frozen agents sit
        // ahead of ever-frozen ones by construction.
        std::vector<int> participants = record.active;
        if (static_cast<int>(participants.size()) > goods_left)
            participants.resize(goods_left);

        BipartiteGraph graph;
        graph.left_count = static_cast<int>(participants.size());
        graph.right_count = static_cast<int>(record.remaining_before.size());
        graph.adjacency.assign(participants.size(), {});
        for (std::size_t p = 0; p < participants.size(); ++p) {
            for (std::size_t r = 0; r < record.remaining_before.size(); ++r) {
                if (is_high[participants[p]][record.remaining_before[r]])
                    graph.adjacency[p].push_back(static_cast<int>(r));
            }
        }
        Matching matching = max_matching(graph);

        std::vector<int> received_good(n, -1);
        for (std::size_t p = 0; p < participants.size(); ++p) {
            int r = matching.left_to_right[p];
            if (r == -1) continue;
            int agent = participants[p];
            int good = record.remaining_before[r];
            alloc.bundles[agent].push_back(good);
            good_left[good] = 0;
            --goods_left;
            received_good[agent] = good;
            record.matched.emplace_back(agent, good);
        }

        // Unmatched participants take the lowest-index remaining good, in
        // list order, while goods last.
        for (int agent : participants) {
            if (received_good[agent] != -1) continue;
            if (goods_left == 0) break;
            int good = -1;
            for (int g = 0; g < m; ++g) {
                if (good_left[g]) {
                    good = g;
                    break;
                }
            }
            alloc.bundles[agent].push_back(good);
            good_left[good] = 0;
            --goods_left;
            received_good[agent] = good;
            record.fallback.emplace_back(agent, good);
        }

        // Freeze set: start from agents whose round-good is high-valued by a
        // participant that itself received a low-valued good, then close
        // under coveting by already-frozen agents. Agents that received no
        // good this round stay out of both quantifiers.
        std::vector<int> got;
        for (int agent : participants) {
            if (received_good[agent] != -1) got.push_back(agent);
        }
        std::vector<char> in_freeze(n, 0);
        for (int i : got) {
            for (int j : got) {
                if (is_high[j][received_good[i]] && !is_high[j][received_good[j]]) {
                    in_freeze[i] = 1;
                    break;
                }
            }
        }
        bool grew = true;
        while (grew) {
            grew = false;
            for (int i : got) {
                if (in_freeze[i]) continue;
                for (int j : got) {
                    if (in_freeze[j] && is_high[j][received_good[i]]) {
                        in_freeze[i] = 1;
                        grew = true;
                        break;
                    }
                }
            }
        }
        for (int i = 0; i < n; ++i) {
            if (in_freeze[i]) record.freeze_set.push_back(i);
        }
        record.freeze_duration = freeze_span;

        if (record.freeze_set.size() == record.active.size() && !record.freeze_set.empty())
            throw InternalInvariantError("freeze set equals the whole active set");

        // Move frozen agents to the end of the list in ascending index order
        // and start their counters. A zero-length freeze (a/b < 2) only
        // reorders: the agent thaws again at the next round start.
        for (int i : record.freeze_set) {
            order.remove(i);
            order.push_back(i);
            frozen[i] = 1;
            ++trace.freeze_count[i];
            if (low_is_zero) {
                frozen_forever[i] = 1;
            } else {
                frozen_remaining[i] = *freeze_span;
            }
        }

        // r_i bookkeeping: the last round in which a good valued a by agent i
        // was allocated.
        for (int i = 0; i < n; ++i) {
            for (int agent : got) {
                if (is_high[i][received_good[agent]]) {
                    trace.last_high_round[i] = round;
                    break;
                }
            }
        }

        trace.rounds.push_back(std::move(record));
    }

    for (auto& bundle : alloc.bundles) std::sort(bundle.begin(), bundle.end());

    FairnessReport report = check(inst, alloc, FairnessNotion::EFX0);
    if (!report.holds)
        throw InternalInvariantError(
            "match_and_freeze produced a non-EFX0 allocation (envier " +
            std::to_string(report.witness->envier) + ", envied " +
            std::to_string(report.witness->envied) + ")");
    return {std::move(alloc), std::move(trace)};
}

Allocation modified_round_robin(const Instance& inst, bool enforce_ratio) {
    const int n = inst.agent_count();
    const int m = inst.good_count();

    if (enforce_ratio) {
        ValueClass cls = classify(inst);
        if (!cls.fits_interval_ratio(Rational(2)))
            throw DomainError(
                "modified_round_robin requires per-agent values in [x, 2x] with x > 0");
    }

    Allocation alloc;
    alloc.bundles.assign(n, {});
    std::vector<char> taken(m, 0);

    auto pick_best = [&](int agent) {
        int best = -1;
        for (int g = 0; g < m; ++g) {
            if (taken[g]) continue;
            if (best == -1 || inst.value(agent, g) > inst.value(agent, best)) best = g;
        }
        taken[best] = 1;
        alloc.bundles[agent].push_back(best);
    };

    int full_rounds = n > 0 ? m / n : 0;
    int leftover = m - full_rounds * n;
    for (int r = 0; r < full_rounds; ++r) {
        for (int i = 0; i < n; ++i) pick_best(i);
    }
    // Final partial round in reverse order: agents n-1 down to n-leftover.
    for (int i = n - 1; i >= n - leftover; --i) pick_best(i);

    for (auto& bundle : alloc.bundles) std::sort(bundle.begin(), bundle.end());
    return alloc;
}

Rational min_gap(const Instance& inst, GapMode mode, int exact_good_cap) {
    const int m = inst.good_count();
    if (mode == GapMode::Bound) {
        BigInt lcm = 1;
        for (const auto& v : inst.values()) lcm = boost::integer::lcm(lcm, v.den());
        return Rational(BigInt(1), lcm);
    }

    if (m > exact_good_cap)
        throw BudgetError("exact min_gap enumerates 2^" + std::to_string(m) +
                          " subset sums per agent, above the cap of 2^" +
                          std::to_string(exact_good_cap));

    std::optional<Rational> gap;
    for (int i = 0; i < inst.agent_count(); ++i) {
        // All subset sums of this agent's values, deduplicated and ordered.
        std::set<Rational> sums;
        sums.insert(Rational(0));
        for (int g = 0; g < m; ++g) {
            std::set<Rational> next = sums;
            for (const auto& s : sums) next.insert(s + inst.value(i, g));
            sums = std::move(next);
        }
        auto it = sums.begin();
        Rational prev = *it++;
        for (; it != sums.end(); ++it) {
            Rational diff = *it - prev;
            if (!gap || diff < *gap) gap = diff;
            prev = *it;
        }
    }
    if (!gap)
        throw DomainError("no two subsets differ in value; the minimum gap is undefined");
    return *gap;
}

PerturbedInstance perturb_for_efx0(const Instance& inst) {
    const int m = inst.good_count();
    if (m == 0) return {inst, std::nullopt, inst};

    Rational bound = min_gap(inst, GapMode::Bound);
    Rational epsilon = bound / Rational(m + 1);

    std::vector<Rational> values = inst.values();
    for (auto& v : values) {
        if (v.is_zero()) v = epsilon;
    }
    Instance perturbed(inst.agent_count(), m, std::move(values));
    return {std::move(perturbed), std::move(epsilon), inst};
}

}  // namespace fairdiv
