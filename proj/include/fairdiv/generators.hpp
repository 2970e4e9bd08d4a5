#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fairdiv/fairness.hpp"
#include "fairdiv/hardness.hpp"
#include "fairdiv/instance.hpp"
#include "fairdiv/nash.hpp"
#include "fairdiv/rational.hpp"

namespace fairdiv {

/// Deterministic 64-bit generator. The engine is the standard mt19937_64 and
/// all derived draws use explicit arithmetic, so identical seeds produce
/// identical instances on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform-ish draw in [0, bound); bound must be positive.
    std::uint64_t below(std::uint64_t bound) { return engine_() % bound; }

    int range(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    /// True with probability p (p in [0,1]), decided exactly.
    bool chance(const Rational& p);

private:
    std::mt19937_64 engine_;
};

struct GeneratorSpec {
    enum class Kind { Binary, TwoValue, KValue, Interval };

    Kind kind = Kind::Binary;
    int n = 1;
    int m = 0;
    std::uint64_t seed = 0;

    Rational density{1, 2};  // Binary: probability of a 1

    Rational high{2};        // TwoValue
    Rational low{1};
    Rational p_high{1, 2};

    std::vector<Rational> values;  // KValue: uniform over this set

    int x_lo_min = 1;        // Interval: x_i drawn from [x_lo_min, x_lo_max],
    int x_lo_max = 4;        // values from x_i..ratio_bound*x_i on a grid
    Rational ratio_bound{2};
    int resolution = 12;
};

/// Deterministic pseudo-random instance of the requested class.
Instance generate(const GeneratorSpec& spec);

/// Fixtures reproduce the worked example instances together with their named
/// allocations and machine-checkable expected facts.
struct Fixture {
    struct Fact {
        enum class Kind {
            MnwKeyIs,             // brute-force key equals `key`
            MnwOptimaAre,         // optimum set equals the named allocations
            MnwRepresentativeIs,  // single-representative run returns `allocation`
            CheckHolds,           // notion holds on `allocation`
            CheckFails,           // notion fails on `allocation` with `witness` (if set)
            EfxFactorIs,          // efx_factor(allocation) == value
            VefxFactorIs,         // vefx_factor(allocation) == value
            VefxFactorAtLeast,
            ChiIs,                // chi of `agent` == value, witness set == `set`
        };
        Kind kind;
        std::string description;
        std::string allocation;  // name, when applicable
        FairnessNotion notion = FairnessNotion::EF;
        std::optional<EnvyWitness> witness;
        MnwKey key;
        std::vector<std::string> optima;
        Rational value;
        int agent = -1;
        Bundle set;
    };

    std::string id;
    Instance instance{1, 0, {}};
    std::vector<std::pair<std::string, Allocation>> allocations;
    std::vector<Fact> facts;

    const Allocation& allocation(const std::string& name) const;
};

/// Known ids: zero-nw, zero-good, three-value(eps), vefx(w, eps),
/// thm7-efx(alpha), thm7-vefx(alpha, gamma). Parameters outside the valid
/// ranges raise DomainError.
Fixture make_fixture(const std::string& id, const std::map<std::string, Rational>& params);

std::vector<std::string> fixture_ids();

struct FactOutcome {
    std::string description;
    bool passed = false;
    std::string detail;  // filled on failure
};

/// Re-derives every expected fact through the fairness and nash modules.
std::vector<FactOutcome> verify_fixture(const Fixture& fixture);

/// Canonical representative of the instance's row/column-relabeling orbit:
/// rows sorted, then columns sorted lexicographically. Canonical keys
/// coincide only for instances in the same orbit.
Instance canonical_instance(const Instance& inst);

struct SearchOptions {
    std::uint64_t budget = 100'000'000;  // enumerated (instance, allocation) pairs
    int threads = 1;
    std::uint64_t cursor = 0;  // resume point in instance-code order
};

struct SearchHit {
    std::uint64_t code;  // position in the enumeration, for resume/report
    Instance instance;
    Allocation failing_optimum;  // an MNW optimum that is not EFX0
};

struct SearchResult {
    std::vector<SearchHit> hits;
    std::uint64_t scanned = 0;       // instance codes examined
    std::uint64_t total_codes = 0;
    bool completed = false;
    std::uint64_t resume_cursor = 0;  // first unexamined code when !completed
};

/// Enumerates every instance over the value set (deduplicated up to
/// agent/good relabeling), runs the exhaustive MNW solver with all optima,
/// and reports instances where some optimum fails EFX0. Exceeding the budget
/// yields partial results with completed = false.
SearchResult search_mnw_vs_efx(const std::vector<Rational>& value_set, int n, int m,
                               const SearchOptions& options = {});

/// Random 2P2N formula (var_count divisible by 3) together with an
/// assignment it is built to satisfy.
std::pair<Formula2P2N, std::vector<bool>> random_satisfiable_2p2n(int var_count, Rng& rng);

}  // namespace fairdiv
