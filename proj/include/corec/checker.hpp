#pragma once

// Brute-force verdicts on finite algebras: solution counting, corecursiveness
// and complete iterativity up to a bound on the number of variables, the
// anchor/solution correspondence, and the non-cia witness for signatures with
// a symbol of arity >= 2.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "corec/algebra.hpp"
#include "corec/core.hpp"
#include "corec/error.hpp"
#include "corec/presentation.hpp"
#include "corec/rtree.hpp"
#include "corec/solver.hpp"

namespace corec {

struct SatisfactionReport {
    bool holds = true;
    std::optional<std::size_t> axiom;  // index of a failing axiom
    Valuation assignment;              // of its variables
};

inline SatisfactionReport satisfies_presentation(const FiniteAlgebra& a, const Presentation& p)
{
    auto failure = detail::first_failing_axiom(a, p);
    if (!failure)
        return {};
    return {false, failure->axiom, std::move(failure->assignment)};
}

struct SolutionCount {
    std::size_t count = 0;
    std::vector<Valuation> solutions;
};

namespace detail {

/// Right-hand side compiled against an algebra: either a fixed carrier value
/// or a symbol applied to variable indices / fixed values.
struct CompiledRhs {
    static constexpr std::size_t value_only = std::numeric_limits<std::size_t>::max();

    std::size_t symbol = value_only;  // value_only: rhs is the constant `value`
    std::size_t value = 0;
    std::vector<std::pair<bool, std::size_t>> args;  // (is variable, index or value)
};

inline CompiledRhs compile(const Rhs& r, const EquationSystem& e, const FiniteAlgebra& a, const Valuation& params)
{
    CompiledRhs c;
    if (const auto* p = std::get_if<ParamRef>(&r)) {
        c.value = params.at(p->name);
        return c;
    }
    const auto& t = std::get<FlatTerm>(r);
    c.symbol = *a.signature().index_of(t.head);
    for (const auto& x : t.args)
        c.args.emplace_back(x.is_var(), x.is_var() ? e.variable_index(x.name) : params.at(x.name));
    return c;
}

inline std::size_t eval(const CompiledRhs& r, const FiniteAlgebra& a, std::span<const std::size_t> s,
                        std::vector<std::size_t>& scratch)
{
    if (r.symbol == CompiledRhs::value_only)
        return r.value;
    scratch.clear();
    for (const auto& [is_var, i] : r.args)
        scratch.push_back(is_var ? s[i] : i);
    return a.apply(r.symbol, scratch);
}

/// Counts maps s: X -> A with s(x) = eval(rhs(x)); stops early once `stop_at`
/// solutions are found (0 = never).
inline std::size_t count_compiled(std::span<const CompiledRhs> system, const FiniteAlgebra& a,
                                  std::vector<std::vector<std::size_t>>* out = nullptr, std::size_t stop_at = 0)
{
    if (a.size() == 0)
        return system.empty() ? 1 : 0;
    std::vector<std::size_t> s(system.size(), 0);
    std::vector<std::size_t> scratch;
    std::size_t count = 0;
    do {
        bool ok = true;
        for (std::size_t i = 0; i < system.size() && ok; ++i)
            ok = s[i] == eval(system[i], a, s, scratch);
        if (ok) {
            ++count;
            if (out)
                out->push_back(s);
            if (stop_at && count >= stop_at)
                break;
        }
    } while (next_tuple(s, a.size()));
    return count;
}

} // namespace detail

/// Enumerates all maps X -> carrier and keeps the solutions of e.
inline SolutionCount count_solutions(const FiniteAlgebra& a, const EquationSystem& e, const Valuation& params,
                                     const Budget& budget = {})
{
    detail::require_compatible(e, a);
    detail::checked_parameters(e, a, params);
    budget.require(saturating_pow(a.size(), e.size()), "solution enumeration");
    std::vector<detail::CompiledRhs> sys;
    for (const auto& r : e.rhs())
        sys.push_back(detail::compile(r, e, a, params));
    std::vector<std::vector<std::size_t>> raw;
    SolutionCount out;
    out.count = detail::count_compiled(sys, a, &raw);
    for (const auto& s : raw) {
        Valuation v;
        for (std::size_t i = 0; i < s.size(); ++i)
            v[e.variables()[i]] = s[i];
        out.solutions.push_back(std::move(v));
    }
    return out;
}

/// Parameters are read as the carrier elements of the same name.
inline SolutionCount count_solutions(const FiniteAlgebra& a, const EquationSystem& e, const Budget& budget = {})
{
    return count_solutions(a, e, parameters_by_name(a, e.parameters()), budget);
}

struct CheckVerdict {
    bool holds = true;
    std::optional<EquationSystem> witness;  // a system without exactly one solution
    std::size_t solution_count = 0;
    std::size_t max_vars = 0;
    bool exhaustive = true;
    std::uint64_t systems_checked = 0;
};

namespace detail {

inline std::vector<std::string> variable_names(std::size_t n, const FiniteAlgebra& a)
{
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= n; ++i) {
        std::string name = "x" + std::to_string(i);
        while (a.element(name))
            name += '\'';
        out.push_back(std::move(name));
    }
    return out;
}

/// Every flat system on n variables (with carrier elements as extra
/// right-hand sides when `with_parameters`) must have exactly one solution.
inline CheckVerdict check_unique_solutions(const FiniteAlgebra& a, std::size_t max_vars, bool with_parameters,
                                           const Budget& budget)
{
    CheckVerdict v;
    v.max_vars = max_vars;
    for (const auto& c : a.carrier())
        if (is_reserved_name(c))
            throw error(errc::reserved_parameter, "carrier element '" + c + "' is reserved");
    const auto& sig = a.signature();
    for (std::size_t n = 1; n <= max_vars; ++n) {
        auto names = variable_names(n, a);
        std::vector<Atom> atoms;
        for (const auto& x : names)
            atoms.push_back(Atom::var(x));
        auto terms = enumerate_flat_terms(sig, atoms, budget);
        std::vector<Rhs> choices(terms.begin(), terms.end());
        if (with_parameters)
            for (const auto& c : a.carrier())
                choices.emplace_back(ParamRef{c});
        const auto systems = saturating_pow(choices.size(), n);
        budget.require(saturating_mul(systems, saturating_pow(a.size(), n)), "coalgebra enumeration");

        std::vector<CompiledRhs> compiled;
        for (const auto& r : choices) {
            CompiledRhs c;
            if (const auto* p = std::get_if<ParamRef>(&r)) {
                c.value = *a.element(p->name);
            } else {
                const auto& t = std::get<FlatTerm>(r);
                c.symbol = *sig.index_of(t.head);
                for (const auto& x : t.args)
                    c.args.emplace_back(true, static_cast<std::size_t>(
                                                  std::find(names.begin(), names.end(), x.name) - names.begin()));
            }
            compiled.push_back(std::move(c));
        }
        if (choices.empty())
            continue;

        std::vector<std::size_t> pick(n, 0);
        std::vector<CompiledRhs> sys(n);
        do {
            for (std::size_t i = 0; i < n; ++i)
                sys[i] = compiled[pick[i]];
            ++v.systems_checked;
            auto count = count_compiled(sys, a, nullptr, 2);
            if (count != 1) {
                std::vector<std::pair<std::string, Rhs>> eqs;
                for (std::size_t i = 0; i < n; ++i)
                    eqs.emplace_back(names[i], choices[pick[i]]);
                std::vector<std::string> params;
                if (with_parameters)
                    params = a.carrier();
                v.holds = false;
                v.witness = EquationSystem(sig, std::move(params), std::move(eqs));
                v.solution_count = count_solutions(a, *v.witness, budget).count;
                return v;
            }
        } while (next_tuple(pick, choices.size()));
    }
    return v;
}

} // namespace detail

/// Every parameter-free flat system on 1..max_vars variables has exactly one
/// solution in A.
inline CheckVerdict is_corecursive(const FiniteAlgebra& a, std::size_t max_vars, const Budget& budget = {})
{
    return detail::check_unique_solutions(a, max_vars, false, budget);
}

/// As is_corecursive, but right-hand sides may also be carrier elements.
inline CheckVerdict is_cia(const FiniteAlgebra& a, std::size_t max_vars, const Budget& budget = {})
{
    return detail::check_unique_solutions(a, max_vars, true, budget);
}

/// All algebras for `sig` on the carrier {0, ..., n-1}.
inline std::vector<FiniteAlgebra> enumerate_algebras(const Signature& sig, std::size_t n, const Budget& budget = {})
{
    std::uint64_t rows = 0;
    for (const auto& s : sig.symbols())
        rows = saturating_add(rows, saturating_pow(n, s.arity));
    budget.require(saturating_pow(n, rows), "algebra enumeration");
    std::vector<std::string> carrier;
    for (std::size_t i = 0; i < n; ++i)
        carrier.push_back(std::to_string(i));
    std::vector<FiniteAlgebra> out;
    if (n == 0)
        return out;
    std::vector<std::size_t> flat(rows, 0);
    do {
        std::vector<std::vector<std::size_t>> tables;
        std::size_t at = 0;
        for (const auto& s : sig.symbols()) {
            auto len = saturating_pow(n, s.arity);
            tables.emplace_back(flat.begin() + static_cast<std::ptrdiff_t>(at),
                                flat.begin() + static_cast<std::ptrdiff_t>(at + len));
            at += len;
        }
        out.emplace_back(sig, carrier, std::move(tables));
    } while (next_tuple(flat, n));
    return out;
}

struct AnchorReport {
    std::size_t anchors = 0;
    std::size_t solutions = 0;
    bool anchored_are_solutions = true;  // every solve_anchored output solves e
    bool injective = true;               // distinct anchors give distinct solutions
    bool surjective = true;              // every solution restricts to an anchor that rebuilds it

    [[nodiscard]] bool bijection() const noexcept
    {
        return anchored_are_solutions && injective && surjective && anchors == solutions;
    }
};

inline AnchorReport anchor_correspondence(const FiniteAlgebra& a, const EquationSystem& e, const Valuation& params,
                                          const Budget& budget = {})
{
    AnchorReport r;
    auto anchor_list = anchors(e, a, params, budget);
    auto counted = count_solutions(a, e, params, budget);
    r.anchors = anchor_list.size();
    r.solutions = counted.count;

    std::set<Valuation> solutions(counted.solutions.begin(), counted.solutions.end());
    std::set<Valuation> anchor_set(anchor_list.begin(), anchor_list.end());
    std::set<Valuation> images;
    for (const auto& s : anchor_list) {
        auto sol = solve_anchored(e, a, params, s);
        if (!solutions.contains(sol))
            r.anchored_are_solutions = false;
        images.insert(std::move(sol));
    }
    r.injective = images.size() == anchor_list.size();

    const auto infinite = classify(e).infinite_part;
    for (const auto& sol : counted.solutions) {
        Valuation restricted;
        for (const auto& x : infinite)
            restricted[x] = sol.at(x);
        if (!anchor_set.contains(restricted) || solve_anchored(e, a, params, restricted) != sol)
            r.surjective = false;
    }
    return r;
}

inline AnchorReport anchor_correspondence(const FiniteAlgebra& a, const EquationSystem& e, const Budget& budget = {})
{
    return anchor_correspondence(a, e, parameters_by_name(a, e.parameters()), budget);
}

struct WitnessReport {
    EquationSystem system;
    std::string symbol;
    RationalTree solution;  // of x1
    LeafCount leaves;
    /// levels d in 1..K at which the solution has a leaf labeled y2
    std::vector<std::size_t> levels_with_leaf;
    std::size_t depth = 0;

    [[nodiscard]] bool leaf_at_every_level() const noexcept { return levels_with_leaf.size() == depth; }
};

namespace detail {

inline void leaf_depths(const FiniteTree& t, std::string_view label, std::size_t depth, std::set<std::size_t>& out)
{
    if (t.leaf && t.label == label)
        out.insert(depth);
    for (const auto& c : t.children)
        leaf_depths(c, label, depth + 1, out);
}

} // namespace detail

/// For a symbol alpha of arity n >= 2 builds x1 = alpha(x1, x2, ..., xn),
/// xi = yi, whose solution has a y2 leaf at every positive depth and hence
/// infinitely many parameter leaves.
inline WitnessReport witness_non_cia(const Signature& sig, std::size_t depth,
                                     std::optional<std::string> symbol = std::nullopt, const Budget& budget = {})
{
    validate_signature(sig);
    std::optional<std::size_t> alpha;
    if (symbol) {
        alpha = sig.require(*symbol);
        if (sig[*alpha].arity < 2)
            throw error(errc::no_large_arity_symbol, *symbol + " has arity below 2");
    } else {
        for (std::size_t s = 0; s < sig.size() && !alpha; ++s)
            if (sig[s].arity >= 2)
                alpha = s;
        if (!alpha)
            throw error(errc::no_large_arity_symbol, "every symbol has arity at most 1");
    }
    const auto n = sig[*alpha].arity;

    std::vector<std::string> params;
    std::vector<std::pair<std::string, Rhs>> eqs;
    FlatTerm head{sig[*alpha].name, {Atom::var("x1")}};
    for (std::size_t i = 2; i <= n; ++i)
        head.args.push_back(Atom::var("x" + std::to_string(i)));
    eqs.emplace_back("x1", std::move(head));
    for (std::size_t i = 2; i <= n; ++i) {
        params.push_back("y" + std::to_string(i));
        eqs.emplace_back("x" + std::to_string(i), ParamRef{"y" + std::to_string(i)});
    }

    WitnessReport r;
    r.system = EquationSystem(sig, std::move(params), std::move(eqs));
    r.symbol = sig[*alpha].name;
    r.solution = solve(r.system).at("x1");
    r.leaves = count_param_leaves(r.solution);
    r.depth = depth;
    std::set<std::size_t> found;
    detail::leaf_depths(cut(r.solution, depth + 1, budget), "y2", 0, found);
    for (std::size_t d = 1; d <= depth; ++d)
        if (found.contains(d))
            r.levels_with_leaf.push_back(d);
    return r;
}

/// One axiom rewrite (left-to-right tried before right-to-left) applied to
/// each flat right-hand side that some axiom matches; other equations are
/// kept.  Rules with one-sided variables are skipped.
inline EquationSystem rewrite_once(const Presentation& p, const EquationSystem& e)
{
    const auto rules = detail::oriented_rules(p);
    std::vector<std::pair<std::string, Rhs>> eqs;
    for (auto [x, r] : e.equations()) {
        if (auto* t = std::get_if<FlatTerm>(&r)) {
            for (const auto& rule : rules) {
                if (!rule.fresh.empty() || rule.from.head != t->head || rule.from.args.size() != t->args.size())
                    continue;
                std::map<std::string, Atom> binding;
                bool match = true;
                for (std::size_t i = 0; i < t->args.size() && match; ++i) {
                    auto [it, fresh] = binding.try_emplace(rule.from.args[i].name, t->args[i]);
                    match = fresh || it->second == t->args[i];
                }
                if (!match)
                    continue;
                FlatTerm image{rule.to.head, {}};
                for (const auto& a : rule.to.args)
                    image.args.push_back(binding.at(a.name));
                if (image == *t)
                    continue;
                *t = std::move(image);
                break;
            }
        }
        eqs.emplace_back(std::move(x), std::move(r));
    }
    return {e.signature(), e.parameters(), std::move(eqs)};
}

/// Compares the solutions of two systems over the same variables variable by
/// variable up to cut level k.  Distinct dominates Unknown dominates Equal.
inline Verdict3 compare_solutions(const Presentation& p, const EquationSystem& e, const EquationSystem& f,
                                  std::size_t k, std::uint64_t budget = Budget::default_limit,
                                  std::span<const FiniteAlgebra> models = {})
{
    if (e.variables() != f.variables())
        throw error(errc::invalid_system, "systems must define the same variables");
    auto se = solve(e);
    auto sf = solve(f);
    Verdict3 out;
    out.outcome = Outcome::equal;
    out.level = k;
    for (const auto& x : e.variables()) {
        auto v = rtree_equiv_upto(p, se.at(x), sf.at(x), k, budget, models);
        out.work += v.work;
        if (v.outcome == Outcome::distinct) {
            v.reason = "variable " + x;
            return v;
        }
        if (v.outcome == Outcome::unknown && out.outcome == Outcome::equal) {
            out.outcome = Outcome::unknown;
            out.reason = "variable " + x + ": " + v.reason;
        }
    }
    return out;
}

/// Solves e and, independently, e with one axiom rewrite per equation; the
/// two solutions must agree up to the axioms at every cut level <= k.
inline Verdict3 square_check(const Presentation& p, const EquationSystem& e, std::size_t k,
                             std::uint64_t budget = Budget::default_limit, std::span<const FiniteAlgebra> models = {})
{
    return compare_solutions(p, e, rewrite_once(p, e), k, budget, models);
}

} // namespace corec
