#include "fairdiv/instance.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "fairdiv/errors.hpp"

namespace fairdiv {

namespace {

std::pair<int, int> line_col_of_offset(std::string_view text, std::size_t offset) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return lines;
}

bool blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(),
                       [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

Instance instance_from_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        auto [line, col] = line_col_of_offset(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ParseError(std::string("invalid JSON: ") + e.what(), line, col);
    }
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("m") || !doc.contains("values"))
        throw ParseError("instance JSON requires fields n, m, values");
    if (!doc["n"].is_number_integer() || !doc["m"].is_number_integer())
        throw ParseError("instance JSON: n and m must be integers");
    int n = doc["n"].get<int>();
    int m = doc["m"].get<int>();
    const auto& rows = doc["values"];
    if (!rows.is_array() || static_cast<int>(rows.size()) != n)
        throw ParseError("instance JSON: values must be an array of n rows");
    std::vector<Rational> values;
    values.reserve(static_cast<std::size_t>(n) * m);
    for (int i = 0; i < n; ++i) {
        const auto& row = rows[i];
        if (!row.is_array() || static_cast<int>(row.size()) != m)
            throw ParseError("instance JSON: row " + std::to_string(i) + " must have m entries");
        for (int g = 0; g < m; ++g) {
            const auto& cell = row[g];
            try {
                if (cell.is_string()) {
                    values.push_back(Rational::parse(cell.get<std::string>()));
                } else if (cell.is_number_integer()) {
                    values.push_back(Rational(BigInt(cell.get<std::int64_t>())));
                } else {
                    throw ParseError("values must be strings or integers (floats are inexact)");
                }
            } catch (const std::exception& e) {
                throw ParseError("instance JSON: row " + std::to_string(i) + ", good " +
                                 std::to_string(g) + ": " + e.what());
            }
        }
    }
    return Instance(n, m, std::move(values));
}

}  // namespace

Instance::Instance(int agent_count, int good_count, std::vector<Rational> values)
    : n_(agent_count), m_(good_count), values_(std::move(values)) {
    if (n_ < 1) throw ValidationError("instance requires at least one agent");
    if (m_ < 0) throw ValidationError("negative good count");
    if (values_.size() != static_cast<std::size_t>(n_) * m_)
        throw ValidationError("value matrix has " + std::to_string(values_.size()) +
                              " entries, expected " + std::to_string(n_ * m_));
}

Instance Instance::from_rows(const std::vector<std::vector<Rational>>& rows) {
    if (rows.empty()) throw ValidationError("instance requires at least one agent");
    std::size_t m = rows.front().size();
    std::vector<Rational> flat;
    flat.reserve(rows.size() * m);
    for (const auto& row : rows) {
        if (row.size() != m) throw ValidationError("ragged value matrix");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return Instance(static_cast<int>(rows.size()), static_cast<int>(m), std::move(flat));
}

Instance parse_instance(std::string_view text) {
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') return instance_from_json(text);

    auto lines = split_lines(text);
    if (lines.empty() || blank(lines[0])) throw ParseError("missing 'n m' header", 1, 1);

    int n = 0, m = 0;
    {
        std::string header(lines[0]);
        std::istringstream hs(header);
        char extra;
        if (!(hs >> n >> m) || (hs >> extra))
            throw ParseError("header must be 'n m'", 1, 1);
        if (n < 1) throw ParseError("agent count must be at least 1", 1, 1);
        if (m < 0) throw ParseError("good count must be non-negative", 1, 1);
    }

    std::vector<Rational> values;
    values.reserve(static_cast<std::size_t>(n) * m);
    for (int i = 0; i < n; ++i) {
        int lineno = i + 2;
        std::string_view row =
            static_cast<std::size_t>(i + 1) < lines.size() ? lines[i + 1] : std::string_view{};
        if (m == 0) {
            if (!blank(row)) throw ParseError("expected empty row for m = 0", lineno, 1);
            continue;
        }
        if (static_cast<std::size_t>(i + 1) >= lines.size() || blank(row))
            throw ParseError("missing value row for agent " + std::to_string(i), lineno, 1);

        int col = 1;
        std::size_t pos = 0;
        for (int g = 0; g < m; ++g) {
            std::size_t comma = row.find(',', pos);
            bool last = (g == m - 1);
            if (!last && comma == std::string_view::npos)
                throw ParseError("expected " + std::to_string(m) + " comma-separated values",
                                 lineno, static_cast<int>(row.size()) + 1);
            if (last && comma != std::string_view::npos)
                throw ParseError("too many values in row", lineno,
                                 static_cast<int>(comma) + 1);
            std::string_view token =
                last ? row.substr(pos) : row.substr(pos, comma - pos);
            col = static_cast<int>(pos) + 1;
            try {
                values.push_back(Rational::parse(token));
            } catch (const std::exception& e) {
                throw ParseError(e.what(), lineno, col);
            }
            pos = last ? row.size() : comma + 1;
        }
    }
    // Anything after the value rows must be blank.
    for (std::size_t i = static_cast<std::size_t>(n) + 1; i < lines.size(); ++i) {
        if (!blank(lines[i]))
            throw ParseError("unexpected trailing content", static_cast<int>(i + 1), 1);
    }
    return Instance(n, m, std::move(values));
}

std::string serialize_instance(const Instance& inst) {
    std::string out = std::to_string(inst.agent_count()) + " " +
                      std::to_string(inst.good_count()) + "\n";
    for (int i = 0; i < inst.agent_count(); ++i) {
        for (int g = 0; g < inst.good_count(); ++g) {
            if (g > 0) out += ",";
            out += inst.value(i, g).str();
        }
        out += "\n";
    }
    return out;
}

Allocation parse_allocation(std::string_view text, int agent_count, int good_count) {
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(std::string("invalid JSON: ") + e.what());
        }
        if (!doc.is_object() || !doc.contains("bundles") || !doc["bundles"].is_array())
            throw ParseError("allocation JSON requires a bundles array");
        Allocation alloc;
        for (const auto& row : doc["bundles"]) {
            Bundle b;
            for (const auto& x : row) {
                if (!x.is_number_integer()) throw ParseError("good indices must be integers");
                b.push_back(x.get<int>());
            }
            std::sort(b.begin(), b.end());
            alloc.bundles.push_back(std::move(b));
        }
        if (static_cast<int>(alloc.bundles.size()) != agent_count)
            throw ParseError("allocation has " + std::to_string(alloc.bundles.size()) +
                             " bundles, expected " + std::to_string(agent_count));
        return alloc;
    }

    auto lines = split_lines(text);
    Allocation alloc;
    for (int i = 0; i < agent_count; ++i) {
        int lineno = i + 1;
        Bundle b;
        if (static_cast<std::size_t>(i) < lines.size() && !blank(lines[i])) {
            std::istringstream ls{std::string(lines[i])};
            std::string token;
            while (ls >> token) {
                try {
                    std::size_t used = 0;
                    int idx = std::stoi(token, &used);
                    if (used != token.size()) throw std::invalid_argument(token);
                    if (idx < 0 || idx >= good_count)
                        throw ParseError("good index " + token + " out of range", lineno, 1);
                    b.push_back(idx);
                } catch (const ParseError&) {
                    throw;
                } catch (const std::exception&) {
                    throw ParseError("malformed good index '" + token + "'", lineno, 1);
                }
            }
        } else if (static_cast<std::size_t>(i) >= lines.size()) {
            throw ParseError("missing bundle line for agent " + std::to_string(i), lineno, 1);
        }
        std::sort(b.begin(), b.end());
        alloc.bundles.push_back(std::move(b));
    }
    for (std::size_t i = static_cast<std::size_t>(agent_count); i < lines.size(); ++i) {
        if (!blank(lines[i]))
            throw ParseError("unexpected trailing content", static_cast<int>(i + 1), 1);
    }
    return alloc;
}

std::string serialize_allocation(const Allocation& alloc) {
    std::string out;
    for (const auto& bundle : alloc.bundles) {
        for (std::size_t k = 0; k < bundle.size(); ++k) {
            if (k > 0) out += " ";
            out += std::to_string(bundle[k]);
        }
        out += "\n";
    }
    return out;
}

Rational bundle_value(const Instance& inst, int agent, const Bundle& bundle) {
    if (agent < 0 || agent >= inst.agent_count())
        throw ValidationError("agent index out of range");
    Rational total;
    for (int g : bundle) {
        if (g < 0 || g >= inst.good_count())
            throw ValidationError("good index out of range");
        total += inst.value(agent, g);
    }
    return total;
}

bool ValueClass::fits_interval_ratio(const Rational& bound) const {
    for (const auto& [lo, hi] : agent_ranges) {
        if (!lo.is_positive()) return false;
        if (hi > bound * lo) return false;
    }
    return true;
}

ValueClass classify(const Instance& inst, std::size_t kvalue_cap) {
    ValueClass result;
    std::set<Rational> distinct;
    for (const auto& v : inst.values()) distinct.insert(v);
    result.distinct_count = distinct.size();

    if (inst.good_count() > 0) {
        result.agent_ranges.reserve(inst.agent_count());
        for (int i = 0; i < inst.agent_count(); ++i) {
            Rational lo = inst.value(i, 0), hi = inst.value(i, 0);
            for (int g = 1; g < inst.good_count(); ++g) {
                const Rational& v = inst.value(i, g);
                if (v < lo) lo = v;
                if (v > hi) hi = v;
            }
            result.agent_ranges.emplace_back(std::move(lo), std::move(hi));
        }
    }

    const Rational zero, one(1);
    bool binary = std::all_of(distinct.begin(), distinct.end(),
                              [&](const Rational& v) { return v == zero || v == one; });
    if (binary) {
        result.tag = ValueClassTag::Binary;
        result.values.assign(distinct.begin(), distinct.end());
    } else if (distinct.size() <= kvalue_cap) {
        result.tag = ValueClassTag::KValue;
        result.values.assign(distinct.begin(), distinct.end());
    } else {
        result.tag = ValueClassTag::General;
    }
    return result;
}

namespace {

AllocationCheck validate_common(const Instance& inst, const Allocation& alloc,
                                std::vector<int>& owner) {
    if (static_cast<int>(alloc.bundles.size()) != inst.agent_count())
        return {false, "allocation has " + std::to_string(alloc.bundles.size()) +
                           " bundles, instance has " + std::to_string(inst.agent_count()) +
                           " agents"};
    owner.assign(inst.good_count(), -1);
    for (int i = 0; i < inst.agent_count(); ++i) {
        for (int g : alloc.bundles[i]) {
            if (g < 0 || g >= inst.good_count())
                return {false, "good index " + std::to_string(g) + " out of range in bundle " +
                                   std::to_string(i)};
            if (owner[g] == i)
                return {false,
                        "good " + std::to_string(g) + " duplicated in bundle " + std::to_string(i)};
            if (owner[g] != -1)
                return {false, "good " + std::to_string(g) + " allocated to both agents " +
                                   std::to_string(owner[g]) + " and " + std::to_string(i)};
            owner[g] = i;
        }
    }
    return {};
}

}  // namespace

AllocationCheck validate_allocation(const Instance& inst, const Allocation& alloc) {
    std::vector<int> owner;
    AllocationCheck check = validate_common(inst, alloc, owner);
    if (!check.ok) return check;
    for (int g = 0; g < inst.good_count(); ++g) {
        if (owner[g] == -1)
            return {false, "good " + std::to_string(g) + " is unallocated"};
    }
    return {};
}

AllocationCheck validate_partial_allocation(const Instance& inst, const Allocation& alloc) {
    std::vector<int> owner;
    return validate_common(inst, alloc, owner);
}

}  // namespace fairdiv
