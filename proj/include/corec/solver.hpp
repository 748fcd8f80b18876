#pragma once

// Unique solutions of flat equation systems: as rational trees for any
// signature, and split into a finite-word part and a stream part for unary
// signatures.  Also the anchored solutions in finite algebras.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "corec/algebra.hpp"
#include "corec/core.hpp"
#include "corec/error.hpp"
#include "corec/rtree.hpp"

namespace corec {

using Solution = std::map<std::string, RationalTree>;

/// States are the variables followed by one leaf per parameter; each state's
/// step is read off its right-hand side.
inline std::vector<State> system_states(const EquationSystem& e)
{
    const auto& sig = e.signature();
    const auto nx = e.size();
    std::vector<State> states;
    states.reserve(nx + e.parameters().size());
    for (const auto& r : e.rhs()) {
        if (const auto* p = std::get_if<ParamRef>(&r)) {
            states.push_back(State::param_leaf(p->name));
            continue;
        }
        const auto& t = std::get<FlatTerm>(r);
        State s = State::op(*sig.index_of(t.head));
        for (const auto& a : t.args)
            s.children.push_back(a.is_var() ? e.variable_index(a.name) : nx + e.parameter_index(a.name));
        states.push_back(std::move(s));
    }
    for (const auto& y : e.parameters())
        states.push_back(State::param_leaf(y));
    return states;
}

inline Solution solve(const EquationSystem& e)
{
    auto states = system_states(e);
    auto block = detail::coarsest_bisimulation(states);
    // Quotient the whole system once; every rooted subsystem of a minimal
    // system is minimal.
    std::size_t blocks = 0;
    for (auto b : block)
        blocks = std::max(blocks, b + 1);
    std::vector<State> quotient(blocks);
    std::vector<bool> filled(blocks, false);
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (filled[block[i]])
            continue;
        filled[block[i]] = true;
        State s = states[i];
        for (auto& c : s.children)
            c = block[c];
        quotient[block[i]] = std::move(s);
    }
    Solution out;
    for (std::size_t i = 0; i < e.size(); ++i)
        out.emplace(e.variables()[i], RationalTree{e.signature(), quotient, block[i]});
    return out;
}

/// Layer decomposition of a unary system: layers[n-1] holds the variables
/// whose successor chain reaches a parameter after exactly n-1 steps;
/// infinite_part holds the variables whose chain never does.
struct Classification {
    std::vector<std::vector<std::string>> layers;
    std::vector<std::string> infinite_part;

    /// 1-based layer index, or 0 for the infinite part.
    [[nodiscard]] std::size_t layer_of(std::string_view var) const
    {
        for (std::size_t n = 0; n < layers.size(); ++n)
            if (std::find(layers[n].begin(), layers[n].end(), var) != layers[n].end())
                return n + 1;
        return 0;
    }

    friend bool operator==(const Classification&, const Classification&) = default;
};

namespace detail {

/// Successor variable index of a unary right-hand side, or npos for a parameter.
inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

inline std::vector<std::size_t> unary_successors(const EquationSystem& e)
{
    require_unary(e.signature());
    std::vector<std::size_t> succ;
    succ.reserve(e.size());
    for (const auto& r : e.rhs()) {
        if (std::holds_alternative<ParamRef>(r)) {
            succ.push_back(npos);
            continue;
        }
        const auto& a = std::get<FlatTerm>(r).args.at(0);
        if (!a.is_var())
            throw error(errc::invalid_system,
                        "parameter '" + a.name + "' inside a term; convert with to_unary_form first");
        succ.push_back(e.variable_index(a.name));
    }
    return succ;
}

} // namespace detail

/// Reverse breadth-first search from the parameter-valued variables.
inline Classification classify(const EquationSystem& e)
{
    auto succ = detail::unary_successors(e);
    const auto n = e.size();
    std::vector<std::vector<std::size_t>> preds(n);
    std::vector<std::size_t> frontier;
    std::vector<bool> placed(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (succ[i] == detail::npos) {
            frontier.push_back(i);
            placed[i] = true;
        } else {
            preds[succ[i]].push_back(i);
        }
    }
    Classification out;
    while (!frontier.empty()) {
        std::sort(frontier.begin(), frontier.end());
        auto& layer = out.layers.emplace_back();
        std::vector<std::size_t> next;
        for (auto i : frontier) {
            layer.push_back(e.variables()[i]);
            for (auto p : preds[i])
                if (!placed[p]) {
                    placed[p] = true;
                    next.push_back(p);
                }
        }
        frontier = std::move(next);
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!placed[i])
            out.infinite_part.push_back(e.variables()[i]);
    return out;
}

/// An element w.y of the free-algebra summand: the word of unary symbols read
/// from the root, ending in the parameter leaf.
struct FinitePart {
    std::vector<std::string> word;
    std::string leaf;

    friend auto operator<=>(const FinitePart&, const FinitePart&) = default;
};

/// An element of the terminal-coalgebra summand.
struct InfinitePart {
    Lasso stream;

    friend auto operator<=>(const InfinitePart&, const InfinitePart&) = default;
};

using DecomposedValue = std::variant<FinitePart, InfinitePart>;
using DecomposedSolution = std::map<std::string, DecomposedValue>;

inline DecomposedSolution solve_decomposed(const EquationSystem& e)
{
    auto succ = detail::unary_successors(e);
    const auto n = e.size();
    auto symbol = [&](std::size_t i) { return std::get<FlatTerm>(e.rhs()[i]).head; };
    DecomposedSolution out;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::string> word;
        std::vector<std::size_t> seen_at(n, detail::npos);
        std::size_t x = i;
        while (succ[x] != detail::npos && seen_at[x] == detail::npos) {
            seen_at[x] = word.size();
            word.push_back(symbol(x));
            x = succ[x];
        }
        if (succ[x] == detail::npos) {
            out.emplace(e.variables()[i], FinitePart{std::move(word), std::get<ParamRef>(e.rhs()[x]).name});
        } else {
            auto entry = static_cast<std::ptrdiff_t>(seen_at[x]);
            out.emplace(e.variables()[i],
                        InfinitePart{Lasso({word.begin(), word.begin() + entry}, {word.begin() + entry, word.end()})});
        }
    }
    return out;
}

/// Re-encodes a decomposed value as a rational tree.
inline RationalTree to_tree(const DecomposedValue& v, const Signature& sig)
{
    if (const auto* inf = std::get_if<InfinitePart>(&v))
        return from_lasso(inf->stream, sig);
    const auto& fin = std::get<FinitePart>(v);
    std::vector<State> states;
    for (std::size_t i = 0; i < fin.word.size(); ++i)
        states.push_back(State::op(sig.require(fin.word[i]), {i + 1}));
    states.push_back(State::param_leaf(fin.leaf));
    return minimize(RationalTree{sig, std::move(states), 0});
}

/// A system over a unary signature obtained by folding constants into
/// parameters and by naming parameter arguments with fresh variables.
struct UnaryForm {
    EquationSystem system;
    /// folded parameter name -> constant symbol it stands for
    std::map<std::string, std::string> constants;
    /// fresh variable name -> parameter it is defined as
    std::map<std::string, std::string> argument_variables;
};

inline UnaryForm to_unary_form(const EquationSystem& e)
{
    const auto& sig = e.signature();
    std::set<std::string> taken(e.variables().begin(), e.variables().end());
    taken.insert(e.parameters().begin(), e.parameters().end());
    for (const auto& s : sig.symbols())
        taken.insert(s.name);
    auto fresh = [&](std::string base) {
        while (taken.contains(base))
            base += '\'';
        taken.insert(base);
        return base;
    };

    std::vector<Symbol> unary;
    std::map<std::string, std::string> constant_param;  // constant -> parameter
    UnaryForm out;
    for (const auto& s : sig.symbols()) {
        if (s.arity == 1)
            unary.push_back(s);
        else if (s.arity == 0)
            constant_param[s.name] = s.name;
        else
            throw error(errc::non_unary_signature, "symbol " + s.name + " has arity " + std::to_string(s.arity));
    }
    if (unary.empty())
        throw error(errc::non_unary_signature, "signature has no unary symbols");
    // a constant keeps its name as parameter name unless a variable or
    // parameter already uses it
    for (auto& [c, p] : constant_param) {
        taken.erase(c);
        p = fresh(c);
        out.constants[p] = c;
    }

    std::vector<std::string> new_params = e.parameters();
    for (const auto& [p, c] : out.constants)
        new_params.push_back(p);
    std::map<std::string, std::string> param_var;
    std::vector<std::pair<std::string, Rhs>> eqs;
    for (const auto& [x, r] : e.equations()) {
        if (std::holds_alternative<ParamRef>(r)) {
            eqs.emplace_back(x, r);
            continue;
        }
        const auto& t = std::get<FlatTerm>(r);
        if (t.args.empty()) {
            eqs.emplace_back(x, ParamRef{constant_param.at(t.head)});
            continue;
        }
        FlatTerm u = t;
        if (u.args[0].is_param()) {
            auto [it, fresh_one] = param_var.try_emplace(u.args[0].name);
            if (fresh_one)
                it->second = fresh("$" + u.args[0].name);
            u.args[0] = Atom::var(it->second);
        }
        eqs.emplace_back(x, std::move(u));
    }
    for (const auto& [y, v] : param_var) {
        eqs.emplace_back(v, ParamRef{y});
        out.argument_variables[v] = y;
    }
    out.system = EquationSystem(Signature(std::move(unary)), std::move(new_params), std::move(eqs));
    return out;
}

/// The system on X + Y defined by e on X (parameter atoms become variables)
/// and by f on Y; variables of X whose right-hand side is a parameter y take
/// over f's right-hand side for y.
inline EquationSystem compose_systems(const EquationSystem& e, const EquationSystem& f)
{
    if (!(e.signature() == f.signature()))
        throw error(errc::signature_mismatch, "systems over different signatures");
    std::set<std::string> ep(e.parameters().begin(), e.parameters().end());
    std::set<std::string> fv(f.variables().begin(), f.variables().end());
    if (ep != fv)
        throw error(errc::parameter_mismatch, "parameters of the first system must be the variables of the second");
    for (const auto& z : f.parameters())
        if (e.has_variable(z))
            throw error(errc::parameter_mismatch, "'" + z + "' is a variable of the first system");

    std::vector<std::pair<std::string, Rhs>> eqs;
    for (const auto& [x, r] : e.equations()) {
        if (const auto* p = std::get_if<ParamRef>(&r)) {
            eqs.emplace_back(x, f.rhs(p->name));
            continue;
        }
        FlatTerm t = std::get<FlatTerm>(r);
        for (auto& a : t.args)
            a.kind = Atom::Kind::var;
        eqs.emplace_back(x, std::move(t));
    }
    for (const auto& [y, r] : f.equations())
        eqs.emplace_back(y, r);
    return {e.signature(), f.parameters(), std::move(eqs)};
}

namespace detail {

inline Valuation checked_parameters(const EquationSystem& e, const FiniteAlgebra& a, const Valuation& params)
{
    for (const auto& y : e.parameters()) {
        auto it = params.find(y);
        if (it == params.end())
            throw error(errc::missing_assignment, "parameter '" + y + "' has no value in the algebra");
        if (it->second >= a.size())
            throw error(errc::invalid_system, "parameter '" + y + "' valued outside the carrier");
    }
    return params;
}

inline void require_compatible(const EquationSystem& e, const FiniteAlgebra& a)
{
    for (const auto& s : e.signature().symbols()) {
        auto i = a.signature().index_of(s.name);
        if (!i || a.signature()[*i].arity != s.arity)
            throw error(errc::signature_mismatch, "algebra does not interpret " + s.name);
    }
}

} // namespace detail

/// All coalgebra-to-algebra morphisms from the infinite part of e into A,
/// found by exhaustive enumeration.
inline std::vector<Valuation> anchors(const EquationSystem& e, const FiniteAlgebra& a, const Budget& budget = {})
{
    auto succ = detail::unary_successors(e);
    detail::require_compatible(e, a);
    auto cls = classify(e);
    const auto& inf = cls.infinite_part;
    budget.require(saturating_pow(a.size(), inf.size()), "anchor enumeration");

    std::vector<std::size_t> idx(inf.size());
    std::vector<std::size_t> sym(inf.size());
    std::vector<std::size_t> next(inf.size());
    for (std::size_t i = 0; i < inf.size(); ++i) {
        idx[i] = e.variable_index(inf[i]);
        sym[i] = *a.signature().index_of(std::get<FlatTerm>(e.rhs()[idx[i]]).head);
    }
    for (std::size_t i = 0; i < inf.size(); ++i)
        next[i] = static_cast<std::size_t>(
            std::find(idx.begin(), idx.end(), succ[idx[i]]) - idx.begin());

    std::vector<Valuation> out;
    if (a.size() == 0 && !inf.empty())
        return out;
    std::vector<std::size_t> s(inf.size(), 0);
    do {
        bool ok = true;
        for (std::size_t i = 0; i < inf.size() && ok; ++i)
            ok = s[i] == a.apply(sym[i], s[next[i]]);
        if (ok) {
            Valuation v;
            for (std::size_t i = 0; i < inf.size(); ++i)
                v[inf[i]] = s[i];
            out.push_back(std::move(v));
        }
    } while (next_tuple(s, a.size()));
    return out;
}

/// The solution determined by an anchor: variables of the finite layers fold
/// the operation tables down to their parameter's value; the infinite part
/// takes the anchor's value.
inline Valuation solve_anchored(const EquationSystem& e, const FiniteAlgebra& a, const Valuation& params,
                                const Valuation& anchor)
{
    auto succ = detail::unary_successors(e);
    detail::require_compatible(e, a);
    detail::checked_parameters(e, a, params);
    auto cls = classify(e);

    if (anchor.size() != cls.infinite_part.size())
        throw error(errc::invalid_anchor, "anchor must assign exactly the infinite part");
    for (const auto& x : cls.infinite_part) {
        auto it = anchor.find(x);
        if (it == anchor.end() || it->second >= a.size())
            throw error(errc::invalid_anchor, "anchor does not assign '" + x + "'");
        const auto& t = std::get<FlatTerm>(e.rhs(x));
        if (a.apply(*a.signature().index_of(t.head), anchor.at(t.args[0].name)) != it->second)
            throw error(errc::invalid_anchor, "anchor violates the equation of '" + x + "'");
    }

    Valuation out = anchor;
    for (const auto& layer : cls.layers)
        for (const auto& x : layer) {
            const auto& r = e.rhs(x);
            if (const auto* p = std::get_if<ParamRef>(&r)) {
                out[x] = params.at(p->name);
                continue;
            }
            const auto& t = std::get<FlatTerm>(r);
            out[x] = a.apply(*a.signature().index_of(t.head), out.at(t.args[0].name));
        }
    return out;
}

inline Valuation solve_anchored(const EquationSystem& e, const FiniteAlgebra& a, const Valuation& anchor)
{
    return solve_anchored(e, a, parameters_by_name(a, e.parameters()), anchor);
}

inline std::vector<Valuation> anchors(const EquationSystem& e, const FiniteAlgebra& a, const Valuation& params,
                                      const Budget& budget = {})
{
    detail::checked_parameters(e, a, params);
    return anchors(e, a, budget);
}

} // namespace corec
