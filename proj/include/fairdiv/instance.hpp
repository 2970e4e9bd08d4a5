#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fairdiv/rational.hpp"

namespace fairdiv {

/// A bundle is a set of good indices, kept sorted ascending without duplicates.
using Bundle = std::vector<int>;

/// A (possibly partial) division of goods into one bundle per agent.
struct Allocation {
    std::vector<Bundle> bundles;

    bool operator==(const Allocation&) const = default;
};

/// Additive valuation instance: n agents, m goods, exact non-negative values.
/// Immutable after construction.
class Instance {
public:
    /// values is row-major with n*m entries; throws ValidationError on bad shape.
    Instance(int agent_count, int good_count, std::vector<Rational> values);

    static Instance from_rows(const std::vector<std::vector<Rational>>& rows);

    int agent_count() const noexcept { return n_; }
    int good_count() const noexcept { return m_; }

    const Rational& value(int agent, int good) const {
        return values_[static_cast<std::size_t>(agent) * m_ + good];
    }

    const std::vector<Rational>& values() const noexcept { return values_; }

    bool operator==(const Instance&) const = default;

private:
    int n_;
    int m_;
    std::vector<Rational> values_;
};

/// Parses the instance text format, or its JSON mirror when the input starts
/// with '{'. Reports malformed syntax, negative values, and dimension
/// mismatches with line/column positions.
Instance parse_instance(std::string_view text);

/// Canonical text serialization; parse(serialize(x)) == x.
std::string serialize_instance(const Instance& inst);

/// Allocation file format: n lines of space-separated good indices. A JSON
/// object {"bundles": [[...], ...]} is accepted as well.
Allocation parse_allocation(std::string_view text, int agent_count, int good_count);

std::string serialize_allocation(const Allocation& alloc);

/// Exact value of `bundle` for `agent`; the empty bundle is worth 0.
Rational bundle_value(const Instance& inst, int agent, const Bundle& bundle);

enum class ValueClassTag { Binary, KValue, General };

/// Classification result. Per-agent [min,max] ranges are carried as metadata
/// regardless of tag (empty when m = 0); interval-ness is a predicate on them.
struct ValueClass {
    ValueClassTag tag = ValueClassTag::General;
    std::size_t distinct_count = 0;
    std::vector<Rational> values;  // sorted distinct entries; filled when tag != General
    std::vector<std::pair<Rational, Rational>> agent_ranges;

    bool is_two_value() const { return distinct_count <= 2; }

    /// True when every agent's values satisfy 0 < min and max <= bound * min.
    bool fits_interval_ratio(const Rational& bound) const;
};

ValueClass classify(const Instance& inst, std::size_t kvalue_cap = 8);

/// Outcome of structural validation; diagnostic names the first violation.
struct AllocationCheck {
    bool ok = true;
    std::string diagnostic;

    explicit operator bool() const { return ok; }
};

/// Complete-partition check: bundles pairwise disjoint, indices in range, and
/// every good allocated exactly once.
AllocationCheck validate_allocation(const Instance& inst, const Allocation& alloc);

/// Same as validate_allocation but without the completeness requirement.
AllocationCheck validate_partial_allocation(const Instance& inst, const Allocation& alloc);

}  // namespace fairdiv
