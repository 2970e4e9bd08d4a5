// fairdiv: exact fair-division toolbox over the library in include/fairdiv.
//
// Exit codes: 0 success / property holds; 1 property fails; 2 usage or input
// error; 3 budget exceeded.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "fairdiv/algorithms.hpp"
#include "fairdiv/errors.hpp"
#include "fairdiv/fairness.hpp"
#include "fairdiv/generators.hpp"
#include "fairdiv/hardness.hpp"
#include "fairdiv/instance.hpp"
#include "fairdiv/nash.hpp"

namespace {

using nlohmann::json;
using namespace fairdiv;

constexpr int kExitOk = 0;
constexpr int kExitPropertyFails = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write file: " + path);
    out << content;
}

Instance load_instance(const std::string& path) { return parse_instance(read_file(path)); }

Allocation load_allocation(const std::string& path, const Instance& inst) {
    return parse_allocation(read_file(path), inst.agent_count(), inst.good_count());
}

json instance_json(const Instance& inst) {
    json rows = json::array();
    for (int i = 0; i < inst.agent_count(); ++i) {
        json row = json::array();
        for (int g = 0; g < inst.good_count(); ++g) row.push_back(inst.value(i, g).str());
        rows.push_back(std::move(row));
    }
    return {{"n", inst.agent_count()}, {"m", inst.good_count()}, {"values", std::move(rows)}};
}

json bundles_json(const Allocation& alloc) {
    json out = json::array();
    for (const auto& bundle : alloc.bundles) out.push_back(bundle);
    return out;
}

json witness_json(const std::optional<EnvyWitness>& witness) {
    if (!witness) return nullptr;
    json w = {{"envier", witness->envier}, {"envied", witness->envied}};
    w["good"] = witness->good ? json(*witness->good) : json(nullptr);
    return w;
}

json key_json(const MnwKey& key) {
    return {{"positive_count", key.positive_count}, {"product", key.product.str()}};
}

Rational parse_rational_arg(const std::string& text, const std::string& flag) {
    try {
        return Rational::parse(text);
    } catch (const std::exception& e) {
        throw ParseError(std::string("bad value for ") + flag + ": " + e.what());
    }
}

std::vector<Rational> parse_rational_list(const std::string& text, const std::string& flag) {
    std::vector<Rational> values;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) values.push_back(parse_rational_arg(token, flag));
    if (values.empty()) throw ParseError(flag + " needs at least one value");
    return values;
}

void emit(const std::string& text) { std::cout << text; }

// ---------------------------------------------------------------- check

int run_check(const std::string& notion_arg, const std::string& instance_path,
              const std::string& allocation_path, bool as_json) {
    auto notion = notion_from_name(notion_arg);
    if (!notion) throw ParseError("unknown notion '" + notion_arg + "'");
    Instance inst = load_instance(instance_path);
    Allocation alloc = load_allocation(allocation_path, inst);
    FairnessReport report = check(inst, alloc, *notion);

    if (as_json) {
        json out = {{"notion", notion_name(*notion)},
                    {"holds", report.holds},
                    {"witness", witness_json(report.witness)}};
        emit(out.dump(2) + "\n");
    } else if (report.holds) {
        emit(notion_name(*notion) + ": holds\n");
    } else {
        std::string line = notion_name(*notion) + ": fails  (agent " +
                           std::to_string(report.witness->envier) + " envies agent " +
                           std::to_string(report.witness->envied);
        if (report.witness->good)
            line += " even after removing good " + std::to_string(*report.witness->good);
        emit(line + ")\n");
    }
    return report.holds ? kExitOk : kExitPropertyFails;
}

// ---------------------------------------------------------------- factor

int run_factor(const std::string& kind, const std::string& instance_path,
               const std::string& allocation_path, std::size_t cap, bool as_json) {
    Instance inst = load_instance(instance_path);
    Allocation alloc = load_allocation(allocation_path, inst);

    if (kind == "efx") {
        Rational factor = efx_factor(inst, alloc);
        if (as_json) {
            emit(json{{"kind", "efx"}, {"factor", factor.str()}}.dump(2) + "\n");
        } else {
            emit("efx-factor: " + factor.str() + "\n");
        }
        return kExitOk;
    }
    if (kind == "vefx") {
        VefxReport report = vefx_factor(inst, alloc, cap);
        if (as_json) {
            json chi = json::array();
            for (const auto& c : report.chi) chi.push_back(c.str());
            json witnesses = json::array();
            for (const auto& w : report.witness) {
                if (!w) {
                    witnesses.push_back(nullptr);
                } else {
                    witnesses.push_back(
                        {{"other", w->other}, {"set", w->set}, {"value", w->value.str()}});
                }
            }
            emit(json{{"kind", "vefx"},
                      {"factor", report.factor.str()},
                      {"chi", std::move(chi)},
                      {"witnesses", std::move(witnesses)}}
                     .dump(2) +
                 "\n");
        } else {
            emit("vefx-factor: " + report.factor.str() + "\n");
            for (std::size_t i = 0; i < report.chi.size(); ++i)
                emit("chi[" + std::to_string(i) + "] = " + report.chi[i].str() + "\n");
        }
        return kExitOk;
    }
    throw ParseError("unknown factor kind '" + kind + "'");
}

// ---------------------------------------------------------------- mnw

int run_mnw(const std::string& method, const std::string& instance_path, bool all_optima,
            std::uint64_t budget, int threads, const std::string& out_path, bool as_json) {
    Instance inst = load_instance(instance_path);

    MnwKey key;
    std::vector<Allocation> allocations;
    std::uint64_t space = 0;
    if (method == "brute") {
        BruteForceOptions options;
        options.all_optima = all_optima;
        options.budget = budget;
        options.threads = threads;
        MnwResult result = brute_force_mnw(inst, options);
        key = result.key;
        allocations = std::move(result.allocations);
        space = result.search_space_size;
    } else if (method == "binary") {
        Allocation alloc = binary_mnw(inst);
        key = mnw_key(inst, alloc);
        allocations.push_back(std::move(alloc));
    } else {
        throw ParseError("unknown method '" + method + "'");
    }

    if (!out_path.empty()) {
        if (allocations.size() == 1) {
            write_file(out_path, serialize_allocation(allocations.front()));
        } else {
            for (std::size_t k = 0; k < allocations.size(); ++k)
                write_file(out_path + "." + std::to_string(k),
                           serialize_allocation(allocations[k]));
        }
    }
    if (as_json) {
        json allocs = json::array();
        for (const auto& a : allocations) allocs.push_back(bundles_json(a));
        json out = {{"method", method}, {"key", key_json(key)}, {"allocations", std::move(allocs)}};
        if (method == "brute") out["search_space_size"] = space;
        emit(out.dump(2) + "\n");
    } else {
        emit("key: " + std::to_string(key.positive_count) + " " + key.product.str() + "\n");
        for (std::size_t k = 0; k < allocations.size(); ++k) {
            emit("allocation " + std::to_string(k) + ":\n" +
                 serialize_allocation(allocations[k]));
        }
    }
    return kExitOk;
}

// ---------------------------------------------------------------- solve

json trace_json(const MatchFreezeTrace& trace) {
    json rounds = json::array();
    for (std::size_t r = 0; r < trace.rounds.size(); ++r) {
        const auto& round = trace.rounds[r];
        json matched = json::array(), fallback = json::array();
        for (const auto& [agent, good] : round.matched) matched.push_back({agent, good});
        for (const auto& [agent, good] : round.fallback) fallback.push_back({agent, good});
        rounds.push_back({{"round", r + 1},
                          {"active", round.active},
                          {"remaining", round.remaining_before},
                          {"order", round.order},
                          {"matched", std::move(matched)},
                          {"fallback", std::move(fallback)},
                          {"freeze_set", round.freeze_set},
                          {"freeze_duration", round.freeze_duration
                                                  ? json(round.freeze_duration->str())
                                                  : json(nullptr)}});
    }
    json last = json::array();
    for (const auto& r : trace.last_high_round) last.push_back(r ? json(*r) : json(nullptr));
    return {{"a", trace.high_value.str()},
            {"b", trace.low_value.str()},
            {"rounds", std::move(rounds)},
            {"freeze_count", trace.freeze_count},
            {"last_high_round", std::move(last)}};
}

int run_solve(const std::string& algorithm, const std::string& instance_path,
              const std::string& trace_path, bool force, bool as_json) {
    Instance inst = load_instance(instance_path);

    Allocation alloc;
    std::optional<json> trace;
    if (algorithm == "match-freeze") {
        auto [result, t] = match_and_freeze(inst);
        alloc = std::move(result);
        trace = trace_json(t);
    } else if (algorithm == "round-robin") {
        if (force) {
            ValueClass cls = classify(inst);
            if (!cls.fits_interval_ratio(Rational(2)))
                std::cerr << "warning: per-agent value ratio exceeds 2; "
                             "the EFX guarantee does not apply\n";
        }
        alloc = modified_round_robin(inst, /*enforce_ratio=*/!force);
    } else {
        throw ParseError("unknown algorithm '" + algorithm + "'");
    }

    if (!trace_path.empty() && trace) write_file(trace_path, trace->dump(2) + "\n");
    if (as_json) {
        json out = {{"algorithm", algorithm}, {"allocation", bundles_json(alloc)}};
        if (trace) out["trace"] = *trace;
        emit(out.dump(2) + "\n");
    } else {
        emit(serialize_allocation(alloc));
    }
    return kExitOk;
}

// ---------------------------------------------------------------- perturb

int run_perturb(const std::string& instance_path, const std::string& out_path, bool as_json) {
    Instance inst = load_instance(instance_path);
    PerturbedInstance perturbed = perturb_for_efx0(inst);

    if (as_json) {
        json out = {{"epsilon", perturbed.epsilon ? json(perturbed.epsilon->str()) : json(nullptr)},
                    {"instance", instance_json(perturbed.instance)},
                    {"original", instance_json(perturbed.original)}};
        emit(out.dump(2) + "\n");
    } else {
        std::cerr << "epsilon: " << (perturbed.epsilon ? perturbed.epsilon->str() : "undefined")
                  << "\n";
        emit(serialize_instance(perturbed.instance));
    }
    if (!out_path.empty()) write_file(out_path, serialize_instance(perturbed.instance));
    return kExitOk;
}

// ---------------------------------------------------------------- gen

int run_gen(const GeneratorSpec& spec, const std::string& out_path, bool as_json) {
    Instance inst = generate(spec);
    std::string text = serialize_instance(inst);
    if (!out_path.empty()) write_file(out_path, text);
    if (as_json) {
        emit(instance_json(inst).dump(2) + "\n");
    } else {
        emit(text);
    }
    return kExitOk;
}

// ---------------------------------------------------------------- fixture

int run_fixture(const std::string& id, const std::vector<std::string>& raw_params, bool verify,
                const std::string& out_path, bool as_json) {
    std::map<std::string, Rational> params;
    for (const auto& raw : raw_params) {
        auto eq = raw.find('=');
        if (eq == std::string::npos)
            throw ParseError("--param expects key=value, got '" + raw + "'");
        params[raw.substr(0, eq)] = parse_rational_arg(raw.substr(eq + 1), "--param " + raw);
    }
    Fixture fixture = make_fixture(id, params);

    std::vector<FactOutcome> outcomes;
    bool all_passed = true;
    if (verify) {
        outcomes = verify_fixture(fixture);
        for (const auto& o : outcomes) all_passed = all_passed && o.passed;
    }

    if (!out_path.empty()) write_file(out_path, serialize_instance(fixture.instance));
    if (as_json) {
        json allocs = json::object();
        for (const auto& [name, alloc] : fixture.allocations)
            allocs[name] = bundles_json(alloc);
        json facts = json::array();
        for (std::size_t f = 0; f < fixture.facts.size(); ++f) {
            json fact = {{"description", fixture.facts[f].description}};
            if (verify) {
                fact["passed"] = outcomes[f].passed;
                if (!outcomes[f].detail.empty()) fact["detail"] = outcomes[f].detail;
            }
            facts.push_back(std::move(fact));
        }
        emit(json{{"id", fixture.id},
                  {"instance", instance_json(fixture.instance)},
                  {"allocations", std::move(allocs)},
                  {"facts", std::move(facts)}}
                 .dump(2) +
             "\n");
    } else {
        emit(serialize_instance(fixture.instance));
        if (verify) {
            for (const auto& o : outcomes)
                std::cerr << (o.passed ? "pass: " : "FAIL: ") << o.description
                          << (o.detail.empty() ? "" : "  [" + o.detail + "]") << "\n";
        }
    }
    return all_passed ? kExitOk : kExitPropertyFails;
}

// ---------------------------------------------------------------- search

std::pair<int, int> parse_goods_range(const std::string& text) {
    auto dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            int m = std::stoi(text);
            return {m, m};
        }
        return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
    } catch (const std::exception&) {
        throw ParseError("--goods expects M or A..B, got '" + text + "'");
    }
}

int run_search(const std::string& values_arg, int agents, const std::string& goods_arg,
               std::uint64_t budget, int threads, std::uint64_t cursor, bool as_json) {
    std::vector<Rational> values = parse_rational_list(values_arg, "--values");
    auto [m_lo, m_hi] = parse_goods_range(goods_arg);
    if (m_lo < 0 || m_hi < m_lo) throw ParseError("bad --goods range");

    bool all_completed = true;
    json runs = json::array();
    std::uint64_t remaining = budget;
    for (int m = m_lo; m <= m_hi; ++m) {
        SearchOptions options;
        options.budget = remaining;
        options.threads = threads;
        options.cursor = m == m_lo ? cursor : 0;
        SearchResult result = search_mnw_vs_efx(values, agents, m, options);
        all_completed = all_completed && result.completed;

        if (as_json) {
            json hits = json::array();
            for (const auto& hit : result.hits) {
                hits.push_back({{"code", hit.code},
                                {"instance", instance_json(hit.instance)},
                                {"failing_optimum", bundles_json(hit.failing_optimum)}});
            }
            runs.push_back({{"goods", m},
                            {"hits", std::move(hits)},
                            {"scanned", result.scanned},
                            {"total_codes", result.total_codes},
                            {"completed", result.completed},
                            {"resume_cursor", result.resume_cursor}});
        } else {
            emit("m = " + std::to_string(m) + ": " + std::to_string(result.hits.size()) +
                 " non-EFX0 MNW instance(s), scanned " + std::to_string(result.scanned) + "/" +
                 std::to_string(result.total_codes) +
                 (result.completed ? "" : "  [budget exceeded, resume at " +
                                              std::to_string(result.resume_cursor) + "]") +
                 "\n");
            for (const auto& hit : result.hits) {
                emit("instance (code " + std::to_string(hit.code) + "):\n" +
                     serialize_instance(hit.instance));
                emit("failing optimum:\n" + serialize_allocation(hit.failing_optimum));
            }
        }
        std::uint64_t spent = result.scanned;  // coarse; the library enforces the exact budget
        remaining = remaining > spent ? remaining - spent : 0;
        if (!all_completed) break;
    }
    if (as_json) emit(json{{"runs", std::move(runs)}}.dump(2) + "\n");
    return all_completed ? kExitOk : kExitBudget;
}

// ---------------------------------------------------------------- hardness

int run_hardness_reduce(const std::string& formula_path, const std::string& out_path,
                        bool as_json) {
    Formula2P2N formula = parse_formula(read_file(formula_path));
    ReductionOutput reduction = reduce(formula);
    std::string text = serialize_instance(reduction.instance);
    if (!out_path.empty()) write_file(out_path, text);
    if (as_json) {
        json agent_roles = json::array(), good_roles = json::array();
        for (int i = 0; i < reduction.instance.agent_count(); ++i)
            agent_roles.push_back(reduction.agent_name(i));
        for (int g = 0; g < reduction.instance.good_count(); ++g)
            good_roles.push_back(reduction.good_name(g));
        emit(json{{"a", reduction.a.str()},
                  {"threshold", reduction.threshold.str()},
                  {"vars", reduction.var_count},
                  {"clauses", reduction.clause_count},
                  {"agent_roles", std::move(agent_roles)},
                  {"good_roles", std::move(good_roles)},
                  {"instance", instance_json(reduction.instance)}}
                 .dump(2) +
             "\n");
    } else if (out_path.empty()) {
        emit(text);
    }
    return kExitOk;
}

std::vector<bool> parse_assignment(const std::string& text) {
    std::vector<bool> bits;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token == "1") {
            bits.push_back(true);
        } else if (token == "0") {
            bits.push_back(false);
        } else {
            throw ParseError("--assignment expects comma-separated 0/1 bits");
        }
    }
    return bits;
}

int run_hardness_build(const std::string& formula_path, const std::string& assignment_arg,
                       const std::string& out_path, bool as_json) {
    Formula2P2N formula = parse_formula(read_file(formula_path));
    ReductionOutput reduction = reduce(formula);
    Allocation alloc = allocation_from_assignment(reduction, parse_assignment(assignment_arg));
    std::string text = serialize_allocation(alloc);
    if (!out_path.empty()) write_file(out_path, text);
    if (as_json) {
        emit(json{{"allocation", bundles_json(alloc)},
                  {"nash_welfare", nash_welfare(reduction.instance, alloc).str()},
                  {"threshold", reduction.threshold.str()}}
                 .dump(2) +
             "\n");
    } else if (out_path.empty()) {
        emit(text);
    }
    return kExitOk;
}

// Recover (n, m) from the agent/good counts: agents = 3m + 2n, goods = 2m + 5n.
std::pair<int, int> reduction_shape(const Instance& inst) {
    long long agents = inst.agent_count(), goods = inst.good_count();
    long long m11 = 5 * agents - 2 * goods;  // = 11m
    long long n11 = 3 * goods - 2 * agents;  // = 11n
    if (m11 <= 0 || n11 <= 0 || m11 % 11 != 0 || n11 % 11 != 0)
        throw DomainError("instance shape does not match a 2P2N reduction");
    return {static_cast<int>(n11 / 11), static_cast<int>(m11 / 11)};
}

int run_hardness_verify(const std::string& instance_path, const std::string& allocation_path,
                        bool as_json) {
    Instance inst = load_instance(instance_path);
    auto [n, m] = reduction_shape(inst);
    Rational a(3 * m);
    for (const auto& v : inst.values()) {
        if (!v.is_zero() && v != Rational(1) && v != a)
            throw DomainError("values outside {0, 1, " + a.str() + "}; not a reduction instance");
    }
    BigInt u = 1;
    for (int i = 0; i < n; ++i) u *= 2;
    for (int e = 0; e < 2 * m + n; ++e) u *= a.num();
    Rational threshold{std::move(u)};

    Allocation alloc = load_allocation(allocation_path, inst);
    Rational welfare = nash_welfare(inst, alloc);
    bool meets = welfare >= threshold;

    if (as_json) {
        emit(json{{"vars", n},
                  {"clauses", m},
                  {"a", a.str()},
                  {"nash_welfare", welfare.str()},
                  {"threshold", threshold.str()},
                  {"meets_threshold", meets}}
                 .dump(2) +
             "\n");
    } else {
        emit("nash-welfare: " + welfare.str() + "\n");
        emit("threshold:    " + threshold.str() + "\n");
        emit(std::string("nash-welfare >= threshold: ") + (meets ? "yes" : "no") + "\n");
    }
    return meets ? kExitOk : kExitPropertyFails;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact fair division of indivisible goods: EFX checking, Nash welfare, "
                 "constructive algorithms, and NP-hardness instances"};
    app.require_subcommand(1);

    // check
    std::string notion_arg, instance_path, allocation_path;
    bool check_json = false;
    auto* cmd_check = app.add_subcommand("check", "Check a fairness notion on an allocation");
    cmd_check->add_option("--notion", notion_arg, "ef | ef1 | efx | efx0")->required();
    cmd_check->add_option("instance", instance_path)->required();
    cmd_check->add_option("allocation", allocation_path)->required();
    cmd_check->add_flag("--json", check_json);

    // factor
    std::string factor_kind, factor_instance, factor_allocation;
    std::size_t factor_cap = 22;
    bool factor_json = false;
    auto* cmd_factor = app.add_subcommand("factor", "Exact alpha-EFX or alpha-vEFX factor");
    cmd_factor->add_option("--kind", factor_kind, "efx | vefx")->required();
    cmd_factor->add_option("--cap", factor_cap, "subset-search cap per bundle");
    cmd_factor->add_option("instance", factor_instance)->required();
    cmd_factor->add_option("allocation", factor_allocation)->required();
    cmd_factor->add_flag("--json", factor_json);

    // mnw
    std::string mnw_method = "brute", mnw_instance, mnw_out;
    bool mnw_all = false, mnw_json = false;
    std::uint64_t mnw_budget = 20'000'000;
    int mnw_threads = 1;
    auto* cmd_mnw = app.add_subcommand("mnw", "Maximum Nash welfare (refined objective)");
    cmd_mnw->add_option("--method", mnw_method, "brute | binary");
    cmd_mnw->add_flag("--all-optima", mnw_all);
    cmd_mnw->add_option("--budget", mnw_budget);
    cmd_mnw->add_option("--threads", mnw_threads);
    cmd_mnw->add_option("-o,--out", mnw_out, "write allocation file(s)");
    cmd_mnw->add_option("instance", mnw_instance)->required();
    cmd_mnw->add_flag("--json", mnw_json);

    // solve
    std::string solve_alg, solve_instance, solve_trace;
    bool solve_force = false, solve_json = false;
    auto* cmd_solve = app.add_subcommand("solve", "Constructive EFX/EFX0 algorithms");
    cmd_solve->add_option("--alg", solve_alg, "match-freeze | round-robin")->required();
    cmd_solve->add_option("--trace", solve_trace, "write the match-freeze trace JSON");
    cmd_solve->add_flag("--force", solve_force, "proceed despite a ratio-condition violation");
    cmd_solve->add_option("instance", solve_instance)->required();
    cmd_solve->add_flag("--json", solve_json);

    // perturb
    std::string perturb_instance, perturb_out;
    bool perturb_json = false;
    auto* cmd_perturb = app.add_subcommand("perturb", "Zero-to-epsilon perturbation (EFX0 via EFX)");
    cmd_perturb->add_option("instance", perturb_instance)->required();
    cmd_perturb->add_option("-o,--out", perturb_out);
    cmd_perturb->add_flag("--json", perturb_json);

    // gen
    GeneratorSpec spec;
    std::string gen_kind = "binary", gen_values, gen_out;
    std::string gen_density = "1/2", gen_a = "2", gen_b = "1", gen_pa = "1/2", gen_ratio = "2";
    bool gen_json = false;
    auto* cmd_gen = app.add_subcommand("gen", "Deterministic random instances");
    cmd_gen->add_option("--kind", gen_kind, "binary | two-value | k-value | interval");
    cmd_gen->add_option("--n", spec.n)->required();
    cmd_gen->add_option("--m", spec.m)->required();
    cmd_gen->add_option("--seed", spec.seed);
    cmd_gen->add_option("--density", gen_density, "binary: probability of a 1");
    cmd_gen->add_option("--a", gen_a, "two-value: the high value");
    cmd_gen->add_option("--b", gen_b, "two-value: the low value");
    cmd_gen->add_option("--p-a", gen_pa, "two-value: probability of the high value");
    cmd_gen->add_option("--values", gen_values, "k-value: comma-separated value set");
    cmd_gen->add_option("--x-lo-min", spec.x_lo_min, "interval: smallest x_i");
    cmd_gen->add_option("--x-lo-max", spec.x_lo_max, "interval: largest x_i");
    cmd_gen->add_option("--ratio", gen_ratio, "interval: max/min bound per agent");
    cmd_gen->add_option("--resolution", spec.resolution);
    cmd_gen->add_option("-o,--out", gen_out);
    cmd_gen->add_flag("--json", gen_json);

    // fixture
    std::string fixture_id, fixture_out;
    std::vector<std::string> fixture_params;
    bool fixture_verify = false, fixture_json = false;
    auto* cmd_fixture = app.add_subcommand("fixture", "Worked example instances with expected facts");
    cmd_fixture->add_option("id", fixture_id, "zero-nw | zero-good | three-value | vefx | thm7-efx | thm7-vefx")
        ->required();
    cmd_fixture->add_option("--param", fixture_params, "key=value, e.g. eps=1/10");
    cmd_fixture->add_flag("--verify", fixture_verify, "re-derive and check the expected facts");
    cmd_fixture->add_option("-o,--out", fixture_out);
    cmd_fixture->add_flag("--json", fixture_json);

    // search
    std::string search_values, search_goods;
    int search_agents = 2, search_threads = 1;
    std::uint64_t search_budget = 100'000'000, search_cursor = 0;
    bool search_json = false;
    auto* cmd_search = app.add_subcommand("search", "Hunt MNW optima that fail EFX0");
    cmd_search->add_option("--values", search_values, "comma-separated value set")->required();
    cmd_search->add_option("--agents", search_agents)->required();
    cmd_search->add_option("--goods", search_goods, "M or A..B")->required();
    cmd_search->add_option("--budget", search_budget);
    cmd_search->add_option("--threads", search_threads);
    cmd_search->add_option("--cursor", search_cursor, "resume point");
    cmd_search->add_flag("--json", search_json);

    // hardness
    auto* cmd_hardness = app.add_subcommand("hardness", "2P2N-3SAT reduction tooling");
    cmd_hardness->require_subcommand(1);
    std::string hr_formula, hr_out;
    bool hr_json = false;
    auto* cmd_reduce = cmd_hardness->add_subcommand("reduce", "Formula -> 3-value instance");
    cmd_reduce->add_option("formula", hr_formula, "DIMACS CNF")->required();
    cmd_reduce->add_option("-o,--out", hr_out);
    cmd_reduce->add_flag("--json", hr_json);

    std::string hb_formula, hb_assignment, hb_out;
    bool hb_json = false;
    auto* cmd_build = cmd_hardness->add_subcommand("build-alloc", "Satisfying assignment -> allocation");
    cmd_build->add_option("formula", hb_formula, "DIMACS CNF")->required();
    cmd_build->add_option("--assignment", hb_assignment, "comma-separated 0/1 bits")->required();
    cmd_build->add_option("-o,--out", hb_out);
    cmd_build->add_flag("--json", hb_json);

    std::string hv_instance, hv_allocation;
    bool hv_json = false;
    auto* cmd_verify = cmd_hardness->add_subcommand("verify", "Compare Nash welfare against U");
    cmd_verify->add_option("instance", hv_instance)->required();
    cmd_verify->add_option("allocation", hv_allocation)->required();
    cmd_verify->add_flag("--json", hv_json);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (cmd_check->parsed())
            return run_check(notion_arg, instance_path, allocation_path, check_json);
        if (cmd_factor->parsed())
            return run_factor(factor_kind, factor_instance, factor_allocation, factor_cap,
                              factor_json);
        if (cmd_mnw->parsed())
            return run_mnw(mnw_method, mnw_instance, mnw_all, mnw_budget, mnw_threads, mnw_out,
                           mnw_json);
        if (cmd_solve->parsed())
            return run_solve(solve_alg, solve_instance, solve_trace, solve_force, solve_json);
        if (cmd_perturb->parsed()) return run_perturb(perturb_instance, perturb_out, perturb_json);
        if (cmd_gen->parsed()) {
            if (gen_kind == "binary") {
                spec.kind = GeneratorSpec::Kind::Binary;
                spec.density = parse_rational_arg(gen_density, "--density");
            } else if (gen_kind == "two-value") {
                spec.kind = GeneratorSpec::Kind::TwoValue;
                spec.high = parse_rational_arg(gen_a, "--a");
                spec.low = parse_rational_arg(gen_b, "--b");
                spec.p_high = parse_rational_arg(gen_pa, "--p-a");
            } else if (gen_kind == "k-value") {
                spec.kind = GeneratorSpec::Kind::KValue;
                spec.values = parse_rational_list(gen_values, "--values");
            } else if (gen_kind == "interval") {
                spec.kind = GeneratorSpec::Kind::Interval;
                spec.ratio_bound = parse_rational_arg(gen_ratio, "--ratio");
            } else {
                throw ParseError("unknown generator kind '" + gen_kind + "'");
            }
            return run_gen(spec, gen_out, gen_json);
        }
        if (cmd_fixture->parsed())
            return run_fixture(fixture_id, fixture_params, fixture_verify, fixture_out,
                               fixture_json);
        if (cmd_search->parsed())
            return run_search(search_values, search_agents, search_goods, search_budget,
                              search_threads, search_cursor, search_json);
        if (cmd_reduce->parsed()) return run_hardness_reduce(hr_formula, hr_out, hr_json);
        if (cmd_build->parsed()) return run_hardness_build(hb_formula, hb_assignment, hb_out, hb_json);
        if (cmd_verify->parsed()) return run_hardness_verify(hv_instance, hv_allocation, hv_json);
    } catch (const BudgetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const InternalInvariantError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPropertyFails;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
