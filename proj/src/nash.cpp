#include "fairdiv/nash.hpp"

#include <boost/integer/common_factor_rt.hpp>

#include <algorithm>
#include <deque>
#include <thread>

#include "fairdiv/errors.hpp"
#include "fairdiv/matching.hpp"

namespace fairdiv {

namespace {

void require_valid(const Instance& inst, const Allocation& alloc) {
    AllocationCheck check = validate_allocation(inst, alloc);
    if (!check.ok) throw ValidationError("invalid allocation: " + check.diagnostic);
}

std::vector<int> positively_valued_goods(const Instance& inst) {
    std::vector<int> goods;
    for (int g = 0; g < inst.good_count(); ++g) {
        for (int i = 0; i < inst.agent_count(); ++i) {
            if (inst.value(i, g).is_positive()) {
                goods.push_back(g);
                break;
            }
        }
    }
    return goods;
}

// One assignment of the positive goods, as an owner vector (digit t = owner
// of positive good t). Codes order assignments big-endian by good position.
struct EnumState {
    std::vector<int> digits;
    std::vector<BigInt> agent_value;  // scaled integer values
};

EnumState decode(std::uint64_t code, int agent_count, const std::vector<std::vector<BigInt>>& scaled) {
    std::size_t mp = scaled.empty() ? 0 : scaled[0].size();
    EnumState state;
    state.digits.assign(mp, 0);
    state.agent_value.assign(agent_count, 0);
    for (std::size_t t = mp; t-- > 0;) {
        state.digits[t] = static_cast<int>(code % agent_count);
        code /= agent_count;
    }
    for (std::size_t t = 0; t < mp; ++t)
        state.agent_value[state.digits[t]] += scaled[state.digits[t]][t];
    return state;
}

struct ShardBest {
    bool have = false;
    int positive_count = 0;
    BigInt product;
    std::vector<int> best_digits;               // representative (lowest code)
    std::vector<std::vector<int>> all_digits;   // filled in all-optima mode
};

// Enumerates codes [begin, end) with incremental value updates and keeps the
// assignments maximizing (positive_count, product of positive scaled values).
ShardBest enumerate_range(std::uint64_t begin, std::uint64_t end, int agent_count,
                          const std::vector<std::vector<BigInt>>& scaled, bool all_optima) {
    ShardBest best;
    if (begin >= end) return best;
    EnumState state = decode(begin, agent_count, scaled);
    std::size_t mp = state.digits.size();

    BigInt product;
    for (std::uint64_t code = begin; code < end; ++code) {
        int positives = 0;
        for (const BigInt& v : state.agent_value) {
            if (v > 0) ++positives;
        }
        bool candidate = !best.have || positives >= best.positive_count;
        if (candidate) {
            product = 1;
            for (const BigInt& v : state.agent_value) {
                if (v > 0) product *= v;
            }
            // Comparing scaled products is sound: equal positive counts carry
            // the same scaling factor L^count.
            int cmp;
            if (!best.have) {
                cmp = 1;
            } else if (positives != best.positive_count) {
                cmp = positives > best.positive_count ? 1 : -1;
            } else {
                cmp = product > best.product ? 1 : (product < best.product ? -1 : 0);
            }
            if (cmp > 0) {
                best.have = true;
                best.positive_count = positives;
                best.product = product;
                best.best_digits = state.digits;
                if (all_optima) {
                    best.all_digits.clear();
                    best.all_digits.push_back(state.digits);
                }
            } else if (cmp == 0 && all_optima) {
                best.all_digits.push_back(state.digits);
            }
        }

        if (code + 1 == end) break;
        // Odometer step.
        std::size_t t = mp;
        while (t-- > 0) {
            int owner = state.digits[t];
            state.agent_value[owner] -= scaled[owner][t];
            if (owner + 1 < agent_count) {
                state.digits[t] = owner + 1;
                state.agent_value[owner + 1] += scaled[owner + 1][t];
                break;
            }
            state.digits[t] = 0;
            state.agent_value[0] += scaled[0][t];
        }
    }
    return best;
}

Allocation allocation_from_digits(const std::vector<int>& digits, int agent_count,
                                  const std::vector<int>& positive_goods) {
    Allocation alloc;
    alloc.bundles.assign(agent_count, {});
    for (std::size_t t = 0; t < digits.size(); ++t)
        alloc.bundles[digits[t]].push_back(positive_goods[t]);
    return alloc;  // bundles sorted by construction (goods scanned ascending)
}

}  // namespace

Rational nash_welfare(const Instance& inst, const Allocation& alloc) {
    require_valid(inst, alloc);
    Rational product(1);
    for (int i = 0; i < inst.agent_count(); ++i) {
        product *= bundle_value(inst, i, alloc.bundles[i]);
        if (product.is_zero()) return product;
    }
    return product;
}

MnwKey mnw_key(const Instance& inst, const Allocation& alloc) {
    require_valid(inst, alloc);
    MnwKey key;
    for (int i = 0; i < inst.agent_count(); ++i) {
        Rational v = bundle_value(inst, i, alloc.bundles[i]);
        if (v.is_positive()) {
            ++key.positive_count;
            key.product *= v;
        }
    }
    return key;
}

MnwResult brute_force_mnw(const Instance& inst, const BruteForceOptions& options) {
    const int n = inst.agent_count();
    std::vector<int> positive_goods = positively_valued_goods(inst);
    const std::size_t mp = positive_goods.size();

    std::uint64_t space = 1;
    bool over_budget = false;
    for (std::size_t t = 0; t < mp; ++t) {
        if (space > options.budget / static_cast<std::uint64_t>(n)) {
            over_budget = true;
            break;
        }
        space *= static_cast<std::uint64_t>(n);
    }
    if (over_budget || space > options.budget)
        throw BudgetError("assignment space " + std::to_string(n) + "^" + std::to_string(mp) +
                          " exceeds budget " + std::to_string(options.budget));

    // Scale values to integers; products of equally many positives compare exactly.
    BigInt denominator_lcm = 1;
    for (const auto& v : inst.values())
        denominator_lcm = boost::integer::lcm(denominator_lcm, v.den());
    std::vector<std::vector<BigInt>> scaled(n, std::vector<BigInt>(mp));
    for (int i = 0; i < n; ++i) {
        for (std::size_t t = 0; t < mp; ++t) {
            const Rational& v = inst.value(i, positive_goods[t]);
            scaled[i][t] = v.num() * (denominator_lcm / v.den());
        }
    }

    int threads = std::max(1, options.threads);
    std::vector<ShardBest> shard(threads);
    if (threads == 1 || space < 1024) {
        shard[0] = enumerate_range(0, space, n, scaled, options.all_optima);
        shard.resize(1);
    } else {
        std::vector<std::thread> pool;
        std::uint64_t chunk = space / threads + 1;
        for (int w = 0; w < threads; ++w) {
            std::uint64_t begin = std::min<std::uint64_t>(space, chunk * w);
            std::uint64_t end = std::min<std::uint64_t>(space, chunk * (w + 1));
            pool.emplace_back([&, w, begin, end] {
                shard[w] = enumerate_range(begin, end, n, scaled, options.all_optima);
            });
        }
        for (auto& t : pool) t.join();
    }

    // Deterministic reduction: max key, ties resolved toward the lower shard,
    // i.e. the lower assignment code.
    ShardBest merged;
    for (auto& s : shard) {
        if (!s.have) continue;
        int cmp;
        if (!merged.have) {
            cmp = 1;
        } else if (s.positive_count != merged.positive_count) {
            cmp = s.positive_count > merged.positive_count ? 1 : -1;
        } else {
            cmp = s.product > merged.product ? 1 : (s.product < merged.product ? -1 : 0);
        }
        if (cmp > 0) {
            merged.have = true;
            merged.positive_count = s.positive_count;
            merged.product = s.product;
            merged.best_digits = std::move(s.best_digits);
            merged.all_digits = std::move(s.all_digits);
        } else if (cmp == 0 && options.all_optima) {
            merged.all_digits.insert(merged.all_digits.end(),
                                     std::make_move_iterator(s.all_digits.begin()),
                                     std::make_move_iterator(s.all_digits.end()));
        }
    }

    MnwResult result;
    result.search_space_size = space;
    result.key.positive_count = merged.positive_count;
    // Undo the scaling: true product = scaled product / L^count.
    BigInt scale_power = 1;
    for (int c = 0; c < merged.positive_count; ++c) scale_power *= denominator_lcm;
    result.key.product = Rational(merged.product, scale_power);

    std::vector<std::vector<int>> representative;
    if (!options.all_optima) representative.push_back(merged.best_digits);
    const auto& digit_sets = options.all_optima ? merged.all_digits : representative;
    for (const auto& digits : digit_sets) {
        Allocation partial = allocation_from_digits(digits, n, positive_goods);
        result.allocations.push_back(complete_with_zero_goods(inst, partial));
    }
    return result;
}

Allocation complete_with_zero_goods(const Instance& inst, const Allocation& partial) {
    AllocationCheck check = validate_partial_allocation(inst, partial);
    if (!check.ok) throw ValidationError("invalid partial allocation: " + check.diagnostic);

    std::vector<int> positive_goods = positively_valued_goods(inst);
    std::vector<char> covered(inst.good_count(), 0);
    std::size_t count = 0;
    for (const auto& bundle : partial.bundles) {
        for (int g : bundle) {
            covered[g] = 1;
            ++count;
        }
    }
    for (int g : positive_goods) {
        if (!covered[g])
            throw ValidationError("partial allocation misses positively-valued good " +
                                  std::to_string(g));
    }
    if (count != positive_goods.size())
        throw ValidationError("partial allocation contains a zero-valued good");

    Allocation complete = partial;
    std::vector<int> zeros;
    for (int g = 0; g < inst.good_count(); ++g) {
        if (!covered[g]) zeros.push_back(g);
    }
    if (zeros.empty()) return complete;

    int receiver = 0;
    Rational least = bundle_value(inst, 0, complete.bundles[0]);
    for (int i = 1; i < inst.agent_count(); ++i) {
        Rational v = bundle_value(inst, i, complete.bundles[i]);
        if (v < least) {
            least = v;
            receiver = i;
        }
    }
    Bundle& target = complete.bundles[receiver];
    target.insert(target.end(), zeros.begin(), zeros.end());
    std::sort(target.begin(), target.end());
    return complete;
}

Allocation binary_mnw(const Instance& inst) {
    ValueClass cls = classify(inst);
    if (cls.tag != ValueClassTag::Binary)
        throw DomainError("binary_mnw requires a binary instance");

    const int n = inst.agent_count();
    std::vector<int> positive_goods = positively_valued_goods(inst);
    const int mp = static_cast<int>(positive_goods.size());

    BipartiteGraph graph;
    graph.left_count = n;
    graph.right_count = mp;
    graph.adjacency.assign(n, {});
    for (int i = 0; i < n; ++i) {
        for (int t = 0; t < mp; ++t) {
            if (inst.value(i, positive_goods[t]).is_positive()) graph.adjacency[i].push_back(t);
        }
    }
    Matching matching = max_matching(graph);

    std::vector<char> in_support(n, 0);
    for (int i = 0; i < n; ++i) {
        if (matching.left_to_right[i] != -1) in_support[i] = 1;
    }

    // Start from the matching, hand each remaining good to its lowest-index
    // lover inside the support; every positive good has one (otherwise the
    // matching would not be maximum).
    std::vector<int> owner(mp, -1);
    for (int i = 0; i < n; ++i) {
        if (matching.left_to_right[i] != -1) owner[matching.left_to_right[i]] = i;
    }
    for (int t = 0; t < mp; ++t) {
        if (owner[t] != -1) continue;
        for (int i = 0; i < n; ++i) {
            if (in_support[i] && inst.value(i, positive_goods[t]).is_positive()) {
                owner[t] = i;
                break;
            }
        }
        if (owner[t] == -1)
            throw InternalInvariantError("positive good has no lover in the matched support");
    }

    std::vector<int> size(n, 0);
    for (int t = 0; t < mp; ++t) ++size[owner[t]];

    // Alternating-path balancing: shift goods along value-1 paths from an
    // oversized bundle to one smaller by at least 2; each shift strictly
    // increases the product of the supported agents' sizes.
    std::vector<std::vector<int>> held(n);
    auto rebuild_held = [&] {
        for (auto& h : held) h.clear();
        for (int t = 0; t < mp; ++t) held[owner[t]].push_back(t);
    };
    rebuild_held();

    bool improved = true;
    while (improved) {
        improved = false;
        for (int start = 0; start < n && !improved; ++start) {
            if (!in_support[start]) continue;
            std::vector<int> via_good(n, -1), parent(n, -2);
            parent[start] = -1;
            std::deque<int> queue{start};
            while (!queue.empty() && !improved) {
                int u = queue.front();
                queue.pop_front();
                if (u != start && size[start] >= size[u] + 2) {
                    // Shift goods backward along the path; only the endpoints
                    // change bundle size.
                    int current = u;
                    while (current != start) {
                        int g = via_good[current];
                        int prev = owner[g];
                        owner[g] = current;
                        current = prev;
                    }
                    --size[start];
                    ++size[u];
                    rebuild_held();
                    improved = true;
                    break;
                }
                for (int g : held[u]) {
                    for (int w = 0; w < n; ++w) {
                        if (parent[w] != -2 || !in_support[w]) continue;
                        if (!inst.value(w, positive_goods[g]).is_positive()) continue;
                        parent[w] = u;
                        via_good[w] = g;
                        queue.push_back(w);
                    }
                }
            }
        }
    }

    Allocation partial;
    partial.bundles.assign(n, {});
    for (int t = 0; t < mp; ++t) partial.bundles[owner[t]].push_back(positive_goods[t]);
    return complete_with_zero_goods(inst, partial);
}

}  // namespace fairdiv
