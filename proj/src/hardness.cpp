#include "fairdiv/hardness.hpp"

#include <algorithm>
#include <sstream>

#include "fairdiv/errors.hpp"

namespace fairdiv {

Formula2P2N parse_formula(std::string_view dimacs) {
    std::istringstream in{std::string(dimacs)};
    std::string line;
    int declared_vars = -1, declared_clauses = -1;
    std::vector<int> literals;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == 'c' || line[0] == '%') continue;
        if (line[0] == 'p') {
            std::istringstream header(line);
            std::string p, cnf;
            if (!(header >> p >> cnf >> declared_vars >> declared_clauses) || cnf != "cnf")
                throw ParseError("malformed problem line, expected 'p cnf <vars> <clauses>'",
                                 lineno, 1);
            continue;
        }
        std::istringstream body(line);
        int lit;
        while (body >> lit) literals.push_back(lit);
        std::string trailing;
        if (body.clear(), body >> trailing)
            throw ParseError("unexpected token '" + trailing + "'", lineno, 1);
    }
    if (declared_vars < 0) throw ParseError("missing 'p cnf' problem line");

    Formula2P2N formula;
    formula.var_count = declared_vars;
    std::vector<Literal> clause;
    for (int lit : literals) {
        if (lit == 0) {
            if (clause.size() != 3)
                throw ParseError("clause " + std::to_string(formula.clauses.size()) + " has " +
                                 std::to_string(clause.size()) + " literals, expected 3");
            formula.clauses.push_back({clause[0], clause[1], clause[2]});
            clause.clear();
            continue;
        }
        int var = std::abs(lit) - 1;
        if (var >= declared_vars)
            throw ParseError("literal " + std::to_string(lit) + " exceeds declared variable count");
        clause.push_back({var, lit > 0});
    }
    if (!clause.empty()) throw ParseError("unterminated clause (missing trailing 0)");
    if (declared_clauses >= 0 && formula.clause_count() != declared_clauses)
        throw ParseError("found " + std::to_string(formula.clause_count()) +
                         " clauses, problem line declares " + std::to_string(declared_clauses));

    std::vector<int> positive(formula.var_count, 0), negative(formula.var_count, 0);
    for (const auto& c : formula.clauses) {
        for (const auto& l : c) (l.positive ? positive : negative)[l.var] += 1;
    }
    for (int v = 0; v < formula.var_count; ++v) {
        if (positive[v] != 2 || negative[v] != 2)
            throw ParseError("variable " + std::to_string(v + 1) + " occurs " +
                             std::to_string(positive[v]) + " times positively and " +
                             std::to_string(negative[v]) +
                             " times negatively; 2P2N requires exactly 2 and 2");
    }
    return formula;
}

std::string serialize_formula(const Formula2P2N& formula) {
    std::string out = "p cnf " + std::to_string(formula.var_count) + " " +
                      std::to_string(formula.clause_count()) + "\n";
    for (const auto& clause : formula.clauses) {
        for (const auto& lit : clause) {
            out += std::to_string(lit.positive ? lit.var + 1 : -(lit.var + 1)) + " ";
        }
        out += "0\n";
    }
    return out;
}

bool satisfies(const Formula2P2N& formula, const std::vector<bool>& assignment) {
    if (static_cast<int>(assignment.size()) != formula.var_count)
        throw DomainError("assignment length does not match variable count");
    for (const auto& clause : formula.clauses) {
        bool sat = false;
        for (const auto& lit : clause) {
            if (assignment[lit.var] == lit.positive) {
                sat = true;
                break;
            }
        }
        if (!sat) return false;
    }
    return true;
}

std::string ReductionOutput::agent_name(int agent) const {
    if (agent < 2 * var_count)
        return (agent % 2 == 0 ? "T" : "F") + std::to_string(agent / 2 + 1);
    int c = agent - 2 * var_count;
    return "C" + std::to_string(c / 3 + 1) + "^" + std::to_string(c % 3 + 1);
}

std::string ReductionOutput::good_name(int good) const {
    if (good < 5 * var_count)
        return "s" + std::to_string(good / 5 + 1) + "," + std::to_string(good % 5);
    int c = good - 5 * var_count;
    return (c % 2 == 0 ? "p" : "q") + std::to_string(c / 2 + 1);
}

ReductionOutput reduce(const Formula2P2N& formula) {
    const int n = formula.var_count;
    const int m = formula.clause_count();
    const int agents = 3 * m + 2 * n;
    const int goods = 2 * m + 5 * n;

    // a = 3m certifiably exceeds 1/(2^(1/2m) - 1): equivalent to the integer
    // inequality (a+1)^(2m) < 2 a^(2m), which unit tests verify exactly.
    BigInt a_int = 3 * m;
    Rational a(a_int);

    std::vector<Rational> values(static_cast<std::size_t>(agents) * goods, Rational(0));
    auto at = [&](int agent, int good) -> Rational& {
        return values[static_cast<std::size_t>(agent) * goods + good];
    };

    ReductionOutput out{Instance(1, 0, {}), a, Rational(0), n, m, {}};

    for (int i = 0; i < n; ++i) {
        at(out.agent_var_true(i), out.good_s(i, 0)) = a;
        at(out.agent_var_false(i), out.good_s(i, 0)) = a;
        at(out.agent_var_true(i), out.good_s(i, 1)) = Rational(1);
        at(out.agent_var_true(i), out.good_s(i, 2)) = Rational(1);
        at(out.agent_var_false(i), out.good_s(i, 3)) = Rational(1);
        at(out.agent_var_false(i), out.good_s(i, 4)) = Rational(1);
    }

    out.clause_agent_good.assign(3 * m, -1);
    std::vector<int> positive_seen(n, 0), negative_seen(n, 0);
    for (int j = 0; j < m; ++j) {
        for (int t = 0; t < 3; ++t) {
            int agent = out.agent_clause(j, t);
            at(agent, out.good_p(j)) = a;
            at(agent, out.good_q(j)) = a;
            const Literal& lit = formula.clauses[j][t];
            // First occurrence of x_i takes s_{i,1}, the second s_{i,2};
            // negated occurrences take s_{i,3} then s_{i,4}.
            int k = lit.positive ? 1 + positive_seen[lit.var]++ : 3 + negative_seen[lit.var]++;
            int good = out.good_s(lit.var, k);
            at(agent, good) = Rational(1);
            out.clause_agent_good[3 * j + t] = good;
        }
    }

    out.instance = Instance(agents, goods, std::move(values));

    BigInt u = 1;
    for (int i = 0; i < n; ++i) u *= 2;
    for (int e = 0; e < 2 * m + n; ++e) u *= a_int;
    out.threshold = Rational(std::move(u));
    return out;
}

Allocation allocation_from_assignment(const ReductionOutput& reduction,
                                      const std::vector<bool>& assignment) {
    const int n = reduction.var_count;
    const int m = reduction.clause_count;
    const Instance& inst = reduction.instance;

    if (static_cast<int>(assignment.size()) != n)
        throw DomainError("assignment length does not match variable count");

    std::vector<int> owner(inst.good_count(), -1);
    for (int i = 0; i < n; ++i) {
        if (assignment[i]) {
            owner[reduction.good_s(i, 0)] = reduction.agent_var_true(i);
            owner[reduction.good_s(i, 3)] = reduction.agent_var_false(i);
            owner[reduction.good_s(i, 4)] = reduction.agent_var_false(i);
        } else {
            owner[reduction.good_s(i, 0)] = reduction.agent_var_false(i);
            owner[reduction.good_s(i, 1)] = reduction.agent_var_true(i);
            owner[reduction.good_s(i, 2)] = reduction.agent_var_true(i);
        }
    }

    for (int j = 0; j < m; ++j) {
        // The satisfied literal's agent takes its designated variable-good;
        // the other two clause-agents take p_j and q_j in index order.
        int satisfied = -1;
        for (int t = 0; t < 3 && satisfied == -1; ++t) {
            int good = reduction.clause_agent_good[3 * j + t];
            // Literal t is satisfied exactly when its designated good was not
            // handed to a variable-agent above.
            if (owner[good] == -1) satisfied = t;
        }
        if (satisfied == -1)
            throw DomainError("assignment does not satisfy clause " + std::to_string(j + 1));
        owner[reduction.clause_agent_good[3 * j + satisfied]] =
            reduction.agent_clause(j, satisfied);
        std::vector<int> rest;
        for (int t = 0; t < 3; ++t) {
            if (t != satisfied) rest.push_back(t);
        }
        owner[reduction.good_p(j)] = reduction.agent_clause(j, rest[0]);
        owner[reduction.good_q(j)] = reduction.agent_clause(j, rest[1]);
    }

    // Remaining goods (unclaimed true-literal copies) go to the lowest-index
    // agent valuing them positively, falling back to agent 0.
    for (int g = 0; g < inst.good_count(); ++g) {
        if (owner[g] != -1) continue;
        owner[g] = 0;
        for (int i = 0; i < inst.agent_count(); ++i) {
            if (inst.value(i, g).is_positive()) {
                owner[g] = i;
                break;
            }
        }
    }

    Allocation alloc;
    alloc.bundles.assign(inst.agent_count(), {});
    for (int g = 0; g < inst.good_count(); ++g) alloc.bundles[owner[g]].push_back(g);
    return alloc;
}

namespace {

void require_reduction_allocation(const ReductionOutput& reduction, const Allocation& alloc) {
    AllocationCheck check = validate_allocation(reduction.instance, alloc);
    if (!check.ok)
        throw ValidationError("allocation does not fit the reduction instance: " +
                              check.diagnostic);
}

}  // namespace

Allocation normalize_allocation(const ReductionOutput& reduction, const Allocation& alloc) {
    require_reduction_allocation(reduction, alloc);
    const Instance& inst = reduction.instance;
    const int n = reduction.var_count;
    const int m = reduction.clause_count;

    std::vector<int> owner(inst.good_count(), -1);
    for (int i = 0; i < inst.agent_count(); ++i) {
        for (int g : alloc.bundles[i]) owner[g] = i;
    }

    auto holder_value = [&](int agent) {
        Rational total;
        for (int g = 0; g < inst.good_count(); ++g) {
            if (owner[g] == agent) total += inst.value(agent, g);
        }
        return total;
    };

    bool changed = true;
    while (changed) {
        changed = false;

        // (1) No good stays with an agent valuing it zero.
        for (int g = 0; g < inst.good_count(); ++g) {
            if (inst.value(owner[g], g).is_positive()) continue;
            for (int i = 0; i < inst.agent_count(); ++i) {
                if (inst.value(i, g).is_positive()) {
                    owner[g] = i;
                    changed = true;
                    break;
                }
            }
        }

        // (2) p_j and q_j split across distinct clause-agents; prefer a
        // zero-value recipient.
        for (int j = 0; j < m; ++j) {
            int p = reduction.good_p(j), q = reduction.good_q(j);
            if (owner[p] != owner[q]) continue;
            int chosen = -1;
            for (int t = 0; t < 3; ++t) {
                int c = reduction.agent_clause(j, t);
                if (c == owner[p]) continue;
                if (holder_value(c).is_zero()) {
                    chosen = c;
                    break;
                }
                if (chosen == -1) chosen = c;
            }
            owner[q] = chosen;
            changed = true;
        }

        // (3) The s_{i,0}-holder sheds its unit goods to their unique other
        // valuer (a clause-agent).
        for (int i = 0; i < n; ++i) {
            int holder = owner[reduction.good_s(i, 0)];
            int lo, hi;
            if (holder == reduction.agent_var_true(i)) {
                lo = 1;
                hi = 2;
            } else if (holder == reduction.agent_var_false(i)) {
                lo = 3;
                hi = 4;
            } else {
                continue;  // step (1) will route s_{i,0} to T_i first
            }
            for (int k = lo; k <= hi; ++k) {
                int good = reduction.good_s(i, k);
                if (owner[good] != holder) continue;
                for (int c = 2 * n; c < inst.agent_count(); ++c) {
                    if (inst.value(c, good).is_positive()) {
                        owner[good] = c;
                        changed = true;
                        break;
                    }
                }
            }
        }
    }

    Allocation result;
    result.bundles.assign(inst.agent_count(), {});
    for (int g = 0; g < inst.good_count(); ++g) result.bundles[owner[g]].push_back(g);
    return result;
}

std::vector<bool> assignment_from_allocation(const ReductionOutput& reduction,
                                             const Allocation& alloc) {
    require_reduction_allocation(reduction, alloc);
    std::vector<int> owner(reduction.instance.good_count(), -1);
    for (int i = 0; i < reduction.instance.agent_count(); ++i) {
        for (int g : alloc.bundles[i]) owner[g] = i;
    }

    std::vector<bool> assignment(reduction.var_count);
    for (int i = 0; i < reduction.var_count; ++i) {
        int holder = owner[reduction.good_s(i, 0)];
        if (holder == reduction.agent_var_true(i)) {
            assignment[i] = true;
        } else if (holder == reduction.agent_var_false(i)) {
            assignment[i] = false;
        } else {
            throw ValidationError("good " + reduction.good_name(reduction.good_s(i, 0)) +
                                  " is held by " + reduction.agent_name(holder) +
                                  "; normalize the allocation first");
        }
    }
    return assignment;
}

}  // namespace fairdiv
