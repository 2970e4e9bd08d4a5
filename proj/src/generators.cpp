#include "fairdiv/generators.hpp"

#include <algorithm>
#include <limits>
#include <thread>
#include <unordered_set>

#include "fairdiv/errors.hpp"

namespace fairdiv {

bool Rng::chance(const Rational& p) {
    if (p.num() >= p.den()) return true;
    if (p.is_zero()) return false;
    if (p.den() > std::numeric_limits<std::uint64_t>::max())
        throw DomainError("probability denominator too large");
    std::uint64_t den = p.den().convert_to<std::uint64_t>();
    std::uint64_t num = p.num().convert_to<std::uint64_t>();
    return below(den) < num;
}

Instance generate(const GeneratorSpec& spec) {
    if (spec.n < 1) throw DomainError("generator requires n >= 1");
    if (spec.m < 0) throw DomainError("generator requires m >= 0");
    Rng rng(spec.seed);
    std::vector<Rational> values;
    values.reserve(static_cast<std::size_t>(spec.n) * spec.m);

    switch (spec.kind) {
        case GeneratorSpec::Kind::Binary: {
            if (spec.density > Rational(1)) throw DomainError("density must lie in [0,1]");
            for (int c = 0; c < spec.n * spec.m; ++c)
                values.push_back(rng.chance(spec.density) ? Rational(1) : Rational(0));
            break;
        }
        case GeneratorSpec::Kind::TwoValue: {
            if (!(spec.high > spec.low)) throw DomainError("two_value requires high > low");
            if (spec.p_high > Rational(1)) throw DomainError("p_high must lie in [0,1]");
            for (int c = 0; c < spec.n * spec.m; ++c)
                values.push_back(rng.chance(spec.p_high) ? spec.high : spec.low);
            break;
        }
        case GeneratorSpec::Kind::KValue: {
            if (spec.values.empty()) throw DomainError("k_value requires a non-empty value set");
            for (int c = 0; c < spec.n * spec.m; ++c)
                values.push_back(spec.values[rng.below(spec.values.size())]);
            break;
        }
        case GeneratorSpec::Kind::Interval: {
            if (spec.x_lo_min < 1 || spec.x_lo_max < spec.x_lo_min)
                throw DomainError("interval requires 1 <= x_lo_min <= x_lo_max");
            if (spec.ratio_bound < Rational(1)) throw DomainError("ratio bound must be >= 1");
            if (spec.resolution < 1) throw DomainError("resolution must be >= 1");
            Rational stretch = spec.ratio_bound - Rational(1);
            for (int i = 0; i < spec.n; ++i) {
                Rational x(rng.range(spec.x_lo_min, spec.x_lo_max));
                for (int g = 0; g < spec.m; ++g) {
                    Rational step(rng.range(0, spec.resolution), spec.resolution);
                    values.push_back(x * (Rational(1) + step * stretch));
                }
            }
            break;
        }
    }
    return Instance(spec.n, spec.m, std::move(values));
}

const Allocation& Fixture::allocation(const std::string& name) const {
    for (const auto& [candidate, alloc] : allocations) {
        if (candidate == name) return alloc;
    }
    throw DomainError("fixture " + id + " has no allocation named '" + name + "'");
}

std::vector<std::string> fixture_ids() {
    return {"zero-nw", "zero-good", "three-value", "vefx", "thm7-efx", "thm7-vefx"};
}

namespace {

Rational param_or(const std::map<std::string, Rational>& params, const std::string& key,
                  Rational fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

void reject_unknown_params(const std::string& id, const std::map<std::string, Rational>& params,
                           std::initializer_list<const char*> known) {
    for (const auto& [key, value] : params) {
        if (std::find_if(known.begin(), known.end(),
                         [&](const char* k) { return key == k; }) == known.end())
            throw DomainError("fixture " + id + " does not take parameter '" + key + "'");
    }
}

using FactKind = Fixture::Fact::Kind;

Fixture::Fact key_fact(MnwKey key) {
    Fixture::Fact f;
    f.kind = FactKind::MnwKeyIs;
    f.key = std::move(key);
    f.description = "brute-force MNW key is (" + std::to_string(f.key.positive_count) + ", " +
                    f.key.product.str() + ")";
    return f;
}

Fixture::Fact optima_fact(std::vector<std::string> names) {
    Fixture::Fact f;
    f.kind = FactKind::MnwOptimaAre;
    f.optima = std::move(names);
    f.description = "MNW optimum set matches the named allocations";
    return f;
}

Fixture::Fact check_fact(bool holds, std::string alloc, FairnessNotion notion,
                         std::optional<EnvyWitness> witness = std::nullopt) {
    Fixture::Fact f;
    f.kind = holds ? FactKind::CheckHolds : FactKind::CheckFails;
    f.allocation = std::move(alloc);
    f.notion = notion;
    f.witness = std::move(witness);
    f.description = notion_name(notion) + std::string(holds ? " holds" : " fails") + " on " +
                    f.allocation;
    return f;
}

Fixture::Fact factor_fact(FactKind kind, std::string alloc, Rational value) {
    Fixture::Fact f;
    f.kind = kind;
    f.allocation = std::move(alloc);
    f.value = std::move(value);
    const char* what = kind == FactKind::EfxFactorIs ? "efx_factor of "
                       : kind == FactKind::VefxFactorIs ? "vefx_factor of "
                                                        : "vefx_factor lower bound of ";
    f.description = what + f.allocation + (kind == FactKind::VefxFactorAtLeast ? " >= " : " = ") +
                    f.value.str();
    return f;
}

Fixture::Fact chi_fact(std::string alloc, int agent, Rational value, Bundle set) {
    Fixture::Fact f;
    f.kind = FactKind::ChiIs;
    f.allocation = std::move(alloc);
    f.agent = agent;
    f.value = std::move(value);
    f.set = std::move(set);
    f.description = "chi of agent " + std::to_string(agent) + " on " + f.allocation + " = " +
                    f.value.str();
    return f;
}

Fixture::Fact representative_fact(std::string alloc) {
    Fixture::Fact f;
    f.kind = FactKind::MnwRepresentativeIs;
    f.allocation = std::move(alloc);
    f.description = "brute-force representative optimum is " + f.allocation;
    return f;
}

}  // namespace

Fixture make_fixture(const std::string& id, const std::map<std::string, Rational>& params) {
    const Rational one(1);

    if (id == "zero-nw") {
        reject_unknown_params(id, params, {});
        Fixture fx;
        fx.id = id;
        fx.instance = Instance::from_rows({{one, {}, {}}, {one, {}, {}}, {{}, one, one}});
        fx.allocations = {{"good", Allocation{{{0}, {}, {1, 2}}}},
                          {"bad", Allocation{{{0, 1}, {}, {2}}}},
                          {"lump", Allocation{{{}, {}, {0, 1, 2}}}}};
        fx.facts.push_back(key_fact({2, Rational(2)}));
        fx.facts.push_back(check_fact(true, "good", FairnessNotion::EFX0));
        fx.facts.push_back(check_fact(false, "bad", FairnessNotion::EFX0, EnvyWitness{1, 0, 1}));
        fx.facts.push_back(check_fact(false, "lump", FairnessNotion::EFX0));
        return fx;
    }

    if (id == "zero-good") {
        reject_unknown_params(id, params, {});
        Fixture fx;
        fx.id = id;
        fx.instance = Instance::from_rows(
            {{one, {}, {}, {}}, {one, {}, {}, {}}, {{}, one, one, {}}});
        fx.allocations = {{"completed", Allocation{{{0}, {3}, {1, 2}}}},
                          {"completed-alt", Allocation{{{3}, {0}, {1, 2}}}}};
        fx.facts.push_back(key_fact({2, Rational(2)}));
        fx.facts.push_back(representative_fact("completed"));
        fx.facts.push_back(optima_fact({"completed", "completed-alt"}));
        fx.facts.push_back(check_fact(true, "completed", FairnessNotion::EFX0));
        return fx;
    }

    if (id == "three-value") {
        reject_unknown_params(id, params, {"eps"});
        Rational eps = param_or(params, "eps", Rational(1, 10));
        if (!eps.is_positive() || !(eps < one))
            throw DomainError("three-value requires 0 < eps < 1");
        Fixture fx;
        fx.id = id;
        fx.instance = Instance::from_rows(
            {{one - eps, one, one + eps}, {one, one - eps, one + eps}});
        fx.allocations = {{"A1", Allocation{{{1}, {0, 2}}}}, {"A2", Allocation{{{1, 2}, {0}}}}};
        fx.facts.push_back(key_fact({2, Rational(2) + eps}));
        fx.facts.push_back(optima_fact({"A1", "A2"}));
        fx.facts.push_back(check_fact(false, "A1", FairnessNotion::EFX, EnvyWitness{0, 1, 0}));
        fx.facts.push_back(check_fact(false, "A2", FairnessNotion::EFX, EnvyWitness{1, 0, 1}));
        fx.facts.push_back(check_fact(true, "A1", FairnessNotion::EF1));
        fx.facts.push_back(check_fact(true, "A2", FairnessNotion::EF1));
        Rational vefx = one / (Rational(2) - eps);
        fx.facts.push_back(factor_fact(FactKind::VefxFactorIs, "A1", vefx));
        fx.facts.push_back(factor_fact(FactKind::VefxFactorIs, "A2", vefx));
        return fx;
    }

    if (id == "vefx") {
        reject_unknown_params(id, params, {"w", "eps"});
        Rational w = param_or(params, "w", Rational(3));
        Rational eps = param_or(params, "eps", Rational(1, 10));
        if (!(w > one)) throw DomainError("vefx requires w > 1");
        if (!eps.is_positive() || !(eps < one / (Rational(2) * w)))
            throw DomainError("vefx requires 0 < eps < 1/(2w)");
        Fixture fx;
        fx.id = id;
        fx.instance = Instance::from_rows({{w, {}, Rational(1, 2)}, {w, one, eps}});
        fx.allocations = {{"mnw", Allocation{{{0, 2}, {1}}}}};
        fx.facts.push_back(key_fact({2, w + Rational(1, 2)}));
        fx.facts.push_back(optima_fact({"mnw"}));
        fx.facts.push_back(factor_fact(FactKind::EfxFactorIs, "mnw", one / w));
        fx.facts.push_back(factor_fact(FactKind::VefxFactorIs, "mnw", one / (one + eps)));
        fx.facts.push_back(chi_fact("mnw", 1, one + eps, {2}));
        return fx;
    }

    if (id == "thm7-efx") {
        reject_unknown_params(id, params, {"alpha"});
        Rational alpha = param_or(params, "alpha", Rational(1, 2));
        if (!alpha.is_positive() || !(alpha < one))
            throw DomainError("thm7-efx requires 0 < alpha < 1");
        Rational inv = one / alpha;
        Fixture fx;
        fx.id = id;
        fx.instance = Instance::from_rows({{one, inv, inv}, {one, inv, inv}});
        fx.allocations = {{"A", Allocation{{{0}, {1, 2}}}}};
        fx.facts.push_back(factor_fact(FactKind::EfxFactorIs, "A", alpha));
        fx.facts.push_back(factor_fact(FactKind::VefxFactorIs, "A", alpha / (one + alpha)));
        fx.facts.push_back(chi_fact("A", 0, one + inv, {1}));
        return fx;
    }

    if (id == "thm7-vefx") {
        reject_unknown_params(id, params, {"alpha", "gamma"});
        Rational alpha = param_or(params, "alpha", Rational(1, 2));
        Rational gamma = param_or(params, "gamma", Rational(4));
        if (!alpha.is_positive() || !(alpha < one))
            throw DomainError("thm7-vefx requires 0 < alpha < 1");
        Rational third_value = (one - alpha) / alpha;
        if (!(gamma > third_value)) throw DomainError("thm7-vefx requires gamma > (1-alpha)/alpha");
        Fixture fx;
        fx.id = id;
        fx.instance = Instance::from_rows({{one, gamma, third_value}, {one, gamma, third_value}});
        fx.allocations = {{"A", Allocation{{{0}, {1, 2}}}}};
        // Closed forms: the envied bundle {g2,g3} binds through whichever
        // removal leaves the larger remainder; the empty augmenting set is
        // feasible only when both single-removal remainders are at most 1.
        Rational efx = std::min({one, alpha / (one - alpha), one / gamma});
        bool empty_feasible = gamma <= one && third_value <= one;
        Rational vefx = empty_feasible ? one : alpha;
        fx.facts.push_back(factor_fact(FactKind::EfxFactorIs, "A", efx));
        fx.facts.push_back(factor_fact(FactKind::VefxFactorIs, "A", vefx));
        fx.facts.push_back(factor_fact(FactKind::VefxFactorAtLeast, "A", alpha));
        return fx;
    }

    throw DomainError("unknown fixture id '" + id + "'");
}

std::vector<FactOutcome> verify_fixture(const Fixture& fixture) {
    std::vector<FactOutcome> outcomes;
    outcomes.reserve(fixture.facts.size());

    for (const auto& fact : fixture.facts) {
        FactOutcome outcome;
        outcome.description = fact.description;
        try {
            switch (fact.kind) {
                case FactKind::MnwKeyIs: {
                    MnwKey key = brute_force_mnw(fixture.instance).key;
                    outcome.passed = key == fact.key;
                    if (!outcome.passed)
                        outcome.detail = "computed key (" + std::to_string(key.positive_count) +
                                         ", " + key.product.str() + ")";
                    break;
                }
                case FactKind::MnwOptimaAre: {
                    BruteForceOptions options;
                    options.all_optima = true;
                    MnwResult result = brute_force_mnw(fixture.instance, options);
                    std::vector<Allocation> expected;
                    for (const auto& name : fact.optima)
                        expected.push_back(fixture.allocation(name));
                    auto order = [](const Allocation& a, const Allocation& b) {
                        return a.bundles < b.bundles;
                    };
                    std::sort(expected.begin(), expected.end(), order);
                    std::vector<Allocation> got = result.allocations;
                    std::sort(got.begin(), got.end(), order);
                    outcome.passed = got == expected;
                    if (!outcome.passed)
                        outcome.detail = "solver found " + std::to_string(got.size()) + " optima";
                    break;
                }
                case FactKind::MnwRepresentativeIs: {
                    MnwResult result = brute_force_mnw(fixture.instance);
                    outcome.passed = result.allocations.size() == 1 &&
                                     result.allocations.front() == fixture.allocation(fact.allocation);
                    break;
                }
                case FactKind::CheckHolds:
                case FactKind::CheckFails: {
                    FairnessReport report =
                        check(fixture.instance, fixture.allocation(fact.allocation), fact.notion);
                    bool expected_holds = fact.kind == FactKind::CheckHolds;
                    outcome.passed = report.holds == expected_holds;
                    if (outcome.passed && fact.witness)
                        outcome.passed = report.witness == fact.witness;
                    if (!outcome.passed)
                        outcome.detail = report.holds ? "predicate holds" : "predicate fails";
                    break;
                }
                case FactKind::EfxFactorIs: {
                    Rational factor =
                        efx_factor(fixture.instance, fixture.allocation(fact.allocation));
                    outcome.passed = factor == fact.value;
                    if (!outcome.passed) outcome.detail = "computed " + factor.str();
                    break;
                }
                case FactKind::VefxFactorIs:
                case FactKind::VefxFactorAtLeast: {
                    VefxReport report =
                        vefx_factor(fixture.instance, fixture.allocation(fact.allocation));
                    outcome.passed = fact.kind == FactKind::VefxFactorIs
                                         ? report.factor == fact.value
                                         : report.factor >= fact.value;
                    if (!outcome.passed) outcome.detail = "computed " + report.factor.str();
                    break;
                }
                case FactKind::ChiIs: {
                    EfxValue ev =
                        efx_value(fixture.instance, fixture.allocation(fact.allocation), fact.agent);
                    outcome.passed = ev.chi == fact.value;
                    if (outcome.passed && !fact.set.empty()) {
                        bool set_matches = false;
                        for (const auto& w : ev.per_other) {
                            if (w.value == ev.chi && w.set == fact.set) set_matches = true;
                        }
                        outcome.passed = set_matches;
                    }
                    if (!outcome.passed) outcome.detail = "computed chi " + ev.chi.str();
                    break;
                }
            }
        } catch (const std::exception& e) {
            outcome.passed = false;
            outcome.detail = e.what();
        }
        outcomes.push_back(std::move(outcome));
    }
    return outcomes;
}

Instance canonical_instance(const Instance& inst) {
    const int n = inst.agent_count();
    const int m = inst.good_count();
    std::vector<std::vector<Rational>> rows(n);
    for (int i = 0; i < n; ++i) {
        rows[i].reserve(m);
        for (int g = 0; g < m; ++g) rows[i].push_back(inst.value(i, g));
    }
    std::sort(rows.begin(), rows.end());
    std::vector<std::vector<Rational>> cols(m, std::vector<Rational>(n));
    for (int g = 0; g < m; ++g) {
        for (int i = 0; i < n; ++i) cols[g][i] = rows[i][g];
    }
    std::sort(cols.begin(), cols.end());
    std::vector<Rational> flat;
    flat.reserve(static_cast<std::size_t>(n) * m);
    for (int i = 0; i < n; ++i) {
        for (int g = 0; g < m; ++g) flat.push_back(cols[g][i]);
    }
    return Instance(n, m, std::move(flat));
}

SearchResult search_mnw_vs_efx(const std::vector<Rational>& value_set, int n, int m,
                               const SearchOptions& options) {
    if (value_set.empty()) throw DomainError("search requires a non-empty value set");
    if (n < 1 || m < 0) throw DomainError("search requires n >= 1 and m >= 0");
    std::vector<Rational> values = value_set;
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());

    const std::uint64_t k = values.size();
    const int cells = n * m;
    const std::uint64_t max64 = std::numeric_limits<std::uint64_t>::max();

    std::uint64_t total_codes = 1;
    for (int c = 0; c < cells; ++c) {
        if (total_codes > max64 / k) {
            total_codes = max64;
            break;
        }
        total_codes *= k;
    }
    std::uint64_t alloc_space = 1;
    for (int g = 0; g < m; ++g) {
        if (alloc_space > max64 / static_cast<std::uint64_t>(n)) {
            alloc_space = max64;
            break;
        }
        alloc_space *= static_cast<std::uint64_t>(n);
    }

    auto decode = [&](std::uint64_t code) {
        std::vector<Rational> flat(cells);
        for (int c = cells - 1; c >= 0; --c) {
            flat[c] = values[code % k];
            code /= k;
        }
        return Instance(n, m, std::move(flat));
    };

    SearchResult result;
    result.total_codes = total_codes;
    result.resume_cursor = options.cursor;

    // Phase 1: collect orbit representatives in code order. Canonical keys
    // collide only within an orbit, so dropping later codes with a seen key
    // never discards an unexplored instance.
    std::unordered_set<std::string> seen;
    std::vector<std::uint64_t> representatives;
    std::uint64_t work = 0;
    std::uint64_t code = options.cursor;
    bool budget_hit = false;
    for (; code < total_codes; ++code) {
        if (work + 1 > options.budget) {
            budget_hit = true;
            break;
        }
        work += 1;
        Instance inst = decode(code);
        std::string key = serialize_instance(canonical_instance(inst));
        if (!seen.insert(std::move(key)).second) continue;
        if (alloc_space > options.budget || work > options.budget - alloc_space) {
            // Charging this representative's allocation sweep would overrun.
            budget_hit = true;
            break;
        }
        work += alloc_space;
        representatives.push_back(code);
    }
    result.scanned = code - options.cursor;
    result.completed = !budget_hit;
    result.resume_cursor = budget_hit ? code : total_codes;

    // Phase 2: the expensive sweep, sharded deterministically.
    const int threads = std::max(1, options.threads);
    std::vector<std::vector<SearchHit>> shard_hits(threads);
    auto process = [&](std::size_t begin, std::size_t end, int shard) {
        for (std::size_t r = begin; r < end; ++r) {
            Instance inst = decode(representatives[r]);
            BruteForceOptions bf;
            bf.all_optima = true;
            bf.budget = std::max<std::uint64_t>(alloc_space, 1);
            MnwResult mnw = brute_force_mnw(inst, bf);
            for (const auto& alloc : mnw.allocations) {
                if (!check(inst, alloc, FairnessNotion::EFX0).holds) {
                    shard_hits[shard].push_back({representatives[r], inst, alloc});
                    break;
                }
            }
        }
    };
    if (threads == 1 || representatives.size() < 16) {
        process(0, representatives.size(), 0);
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = representatives.size() / threads + 1;
        for (int w = 0; w < threads; ++w) {
            std::size_t begin = std::min(representatives.size(), chunk * w);
            std::size_t end = std::min(representatives.size(), chunk * (w + 1));
            pool.emplace_back(process, begin, end, w);
        }
        for (auto& t : pool) t.join();
    }
    for (auto& hits : shard_hits) {
        result.hits.insert(result.hits.end(), std::make_move_iterator(hits.begin()),
                           std::make_move_iterator(hits.end()));
    }
    return result;
}

std::pair<Formula2P2N, std::vector<bool>> random_satisfiable_2p2n(int var_count, Rng& rng) {
    if (var_count < 3 || var_count % 3 != 0)
        throw DomainError("2P2N formulas need a variable count divisible by 3");
    const int clause_count = 4 * var_count / 3;

    std::vector<bool> assignment(var_count);
    for (int v = 0; v < var_count; ++v) assignment[v] = rng.chance(Rational(1, 2));

    std::vector<Literal> pool;
    pool.reserve(4 * var_count);
    for (int v = 0; v < var_count; ++v) {
        pool.push_back({v, true});
        pool.push_back({v, true});
        pool.push_back({v, false});
        pool.push_back({v, false});
    }

    // Rejection sampling: shuffle the occurrence pool and chunk it into
    // clauses; accept when every clause has three distinct variables and at
    // least one literal true under the drawn assignment.
    for (int attempt = 0; attempt < 100000; ++attempt) {
        for (std::size_t i = pool.size(); i > 1; --i) {
            std::size_t j = rng.below(i);
            std::swap(pool[i - 1], pool[j]);
        }
        Formula2P2N formula;
        formula.var_count = var_count;
        bool ok = true;
        for (int c = 0; c < clause_count && ok; ++c) {
            std::array<Literal, 3> clause{pool[3 * c], pool[3 * c + 1], pool[3 * c + 2]};
            if (clause[0].var == clause[1].var || clause[0].var == clause[2].var ||
                clause[1].var == clause[2].var) {
                ok = false;
                break;
            }
            bool sat = false;
            for (const auto& lit : clause) sat = sat || assignment[lit.var] == lit.positive;
            if (!sat) {
                ok = false;
                break;
            }
            formula.clauses.push_back(clause);
        }
        if (ok) return {std::move(formula), std::move(assignment)};
    }
    throw InternalInvariantError("rejection sampling failed to produce a 2P2N formula");
}

}  // namespace fairdiv
