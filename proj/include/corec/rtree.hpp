#pragma once

// Rational Sigma-trees over parameters as finite pointed systems, compared up
// to bisimulation.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "corec/core.hpp"
#include "corec/detail/scc.hpp"
#include "corec/error.hpp"

namespace corec {

/// One state of a pointed system: an operation node or a parameter leaf.
struct State {
    bool leaf = false;
    std::size_t symbol = 0;  // index into the signature, when !leaf
    std::string param;       // when leaf
    std::vector<std::size_t> children;

    static State op(std::size_t symbol, std::vector<std::size_t> children = {})
    {
        return {false, symbol, {}, std::move(children)};
    }
    static State param_leaf(std::string name) { return {true, 0, std::move(name), {}}; }

    friend bool operator==(const State&, const State&) = default;
};

/// A rational tree: states reachable from the root, numbered in breadth-first
/// order (the root is state 0).  Unreachable states are dropped on construction.
class RationalTree {
public:
    RationalTree() = default;

    RationalTree(Signature sig, std::vector<State> states, std::size_t root) : sig_(std::move(sig))
    {
        if (root >= states.size())
            throw error(errc::invalid_system, "root state out of range");
        for (const auto& s : states) {
            if (s.leaf)
                continue;
            if (s.symbol >= sig_.size())
                throw error(errc::undeclared_name, "state refers to unknown symbol");
            if (sig_[s.symbol].arity != s.children.size())
                throw error(errc::arity_mismatch, "state for " + sig_[s.symbol].name + " has wrong child count");
            for (auto c : s.children)
                if (c >= states.size())
                    throw error(errc::invalid_system, "child state out of range");
        }
        // breadth-first renumbering from the root
        constexpr auto none = std::numeric_limits<std::size_t>::max();
        std::vector<std::size_t> order;
        std::vector<std::size_t> renum(states.size(), none);
        renum[root] = 0;
        order.push_back(root);
        for (std::size_t i = 0; i < order.size(); ++i)
            for (auto c : states[order[i]].children)
                if (renum[c] == none) {
                    renum[c] = order.size();
                    order.push_back(c);
                }
        states_.reserve(order.size());
        for (auto old : order) {
            State s = std::move(states[old]);
            for (auto& c : s.children)
                c = renum[c];
            states_.push_back(std::move(s));
        }
    }

    [[nodiscard]] const Signature& signature() const noexcept { return sig_; }
    [[nodiscard]] const std::vector<State>& states() const noexcept { return states_; }
    [[nodiscard]] const State& state(std::size_t i) const { return states_[i]; }
    [[nodiscard]] std::size_t size() const noexcept { return states_.size(); }
    [[nodiscard]] static constexpr std::size_t root() noexcept { return 0; }

    /// The subtree unfolding from state i.
    [[nodiscard]] RationalTree rooted_at(std::size_t i) const { return {sig_, states_, i}; }

    [[nodiscard]] std::set<std::string> parameters() const
    {
        std::set<std::string> out;
        for (const auto& s : states_)
            if (s.leaf)
                out.insert(s.param);
        return out;
    }

    /// Label of state i: the symbol name or the parameter name.
    [[nodiscard]] const std::string& label(std::size_t i) const
    {
        const auto& s = states_[i];
        return s.leaf ? s.param : sig_[s.symbol].name;
    }

    /// Structural equality.  Minimized trees are equal iff bisimilar.
    friend bool operator==(const RationalTree& a, const RationalTree& b)
    {
        return a.sig_ == b.sig_ && a.states_ == b.states_;
    }

private:
    Signature sig_;
    std::vector<State> states_;
};

namespace detail {

/// Coarsest bisimulation on a pointed system by iterated signature refinement:
/// start from the partition by label, split by the block vector of children,
/// stop when the number of blocks is stable.  Block ids are assigned in order
/// of first occurrence, so the result is deterministic.
inline std::vector<std::size_t> coarsest_bisimulation(std::span<const State> states)
{
    std::vector<std::size_t> block(states.size());
    std::size_t count = 0;
    {
        std::map<std::pair<std::size_t, std::string>, std::size_t> ids;
        for (std::size_t i = 0; i < states.size(); ++i) {
            const auto& s = states[i];
            auto key = s.leaf ? std::pair{std::numeric_limits<std::size_t>::max(), s.param}
                              : std::pair{s.symbol, std::string{}};
            block[i] = ids.try_emplace(key, ids.size()).first->second;
        }
        count = ids.size();
    }
    for (;;) {
        std::map<std::vector<std::size_t>, std::size_t> ids;
        std::vector<std::size_t> next(states.size());
        std::vector<std::size_t> key;
        for (std::size_t i = 0; i < states.size(); ++i) {
            key.clear();
            key.push_back(block[i]);
            for (auto c : states[i].children)
                key.push_back(block[c]);
            next[i] = ids.try_emplace(key, ids.size()).first->second;
        }
        block = std::move(next);
        if (ids.size() == count)
            return block;
        count = ids.size();
    }
}

inline void require_same_signature(const RationalTree& a, const RationalTree& b)
{
    if (!(a.signature() == b.signature()))
        throw error(errc::signature_mismatch, "trees are over different signatures");
}

/// States of `b` appended after those of `a`; returns the offset of b's states.
inline std::size_t append_states(std::vector<State>& into, const RationalTree& b)
{
    auto offset = into.size();
    for (auto s : b.states()) {
        for (auto& c : s.children)
            c += offset;
        into.push_back(std::move(s));
    }
    return offset;
}

} // namespace detail

/// Quotient by the coarsest bisimulation.
inline RationalTree minimize(const RationalTree& t)
{
    const auto& states = t.states();
    auto block = detail::coarsest_bisimulation(states);
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
    return {t.signature(), std::move(quotient), block[RationalTree::root()]};
}

/// Equality of infinite unfoldings, by refinement on the disjoint union.
inline bool bisim_equal(const RationalTree& t, const RationalTree& u)
{
    detail::require_same_signature(t, u);
    std::vector<State> all(t.states());
    auto offset = detail::append_states(all, u);
    auto block = detail::coarsest_bisimulation(all);
    return block[RationalTree::root()] == block[offset + RationalTree::root()];
}

inline RationalTree leaf(const Signature& sig, std::string y)
{
    if (is_reserved_name(y))
        throw error(errc::reserved_parameter, "'" + y + "' is reserved");
    return {sig, {State::param_leaf(std::move(y))}, 0};
}

/// Tree-tupling: joins the children under a new root labeled `symbol`.
inline RationalTree op_apply(const Signature& sig, std::string_view symbol, std::span<const RationalTree> children)
{
    auto sym = sig.require(symbol);
    if (sig[sym].arity != children.size())
        throw error(errc::arity_mismatch, std::string(symbol) + " expects " + std::to_string(sig[sym].arity) +
                                              " children, got " + std::to_string(children.size()));
    std::vector<State> states{State::op(sym)};
    for (const auto& c : children) {
        if (!(c.signature() == sig))
            throw error(errc::signature_mismatch, "child tree over a different signature");
        auto offset = detail::append_states(states, c);
        states[0].children.push_back(offset);
    }
    return minimize(RationalTree{sig, std::move(states), 0});
}

inline RationalTree op_apply(const Signature& sig, std::string_view symbol,
                             std::initializer_list<RationalTree> children)
{
    return op_apply(sig, symbol, std::span<const RationalTree>(children.begin(), children.size()));
}

/// Embeds a finite tree.
inline RationalTree from_finite(const Signature& sig, const FiniteTree& t)
{
    check_tree(sig, t);
    std::vector<State> states;
    auto add = [&](auto&& self, const FiniteTree& n) -> std::size_t {
        auto id = states.size();
        if (n.leaf) {
            states.push_back(State::param_leaf(n.label));
            return id;
        }
        states.push_back(State::op(sig.require(n.label)));
        std::vector<std::size_t> kids;
        for (const auto& c : n.children)
            kids.push_back(self(self, c));
        states[id].children = std::move(kids);
        return id;
    };
    add(add, t);
    return minimize(RationalTree{sig, std::move(states), 0});
}

namespace detail {

inline void require_no_bottom(const RationalTree& t)
{
    for (const auto& s : t.states())
        if (s.leaf && is_reserved_name(s.param))
            throw error(errc::reserved_parameter, "tree already uses the cutting label");
}

/// Number of nodes of the depth-k cut, saturating.
inline std::uint64_t cut_size(const RationalTree& t, std::size_t k)
{
    // sizes[d][s]: node count of the cut of state s at remaining depth d
    std::vector<std::uint64_t> prev(t.size(), 1);
    for (std::size_t d = 1; d <= k; ++d) {
        std::vector<std::uint64_t> cur(t.size(), 1);
        for (std::size_t s = 0; s < t.size(); ++s)
            for (auto c : t.state(s).children)
                cur[s] = saturating_add(cur[s], prev[c]);
        prev = std::move(cur);
    }
    return prev[RationalTree::root()];
}

inline FiniteTree cut_from(const RationalTree& t, std::size_t s, std::size_t k)
{
    if (k == 0)
        return FiniteTree::param(std::string(bottom));
    const auto& st = t.state(s);
    if (st.leaf)
        return FiniteTree::param(st.param);
    std::vector<FiniteTree> kids;
    kids.reserve(st.children.size());
    for (auto c : st.children)
        kids.push_back(cut_from(t, c, k - 1));
    return FiniteTree::op(t.signature()[st.symbol].name, std::move(kids));
}

} // namespace detail

/// The cut at level k: nodes of depth < k are copied from the unfolding and
/// every node at depth k becomes a `bottom` leaf.
inline FiniteTree cut(const RationalTree& t, std::size_t k, const Budget& budget = {})
{
    detail::require_no_bottom(t);
    budget.require(detail::cut_size(t, k), "cut");
    return detail::cut_from(t, RationalTree::root(), k);
}

struct LeafCount {
    bool infinite = false;
    std::uint64_t count = 0;  // meaningful when !infinite
    bool saturated = false;   // count reached the 64-bit cap; the true count is >= count

    [[nodiscard]] bool finite() const noexcept { return !infinite; }
    friend bool operator==(const LeafCount&, const LeafCount&) = default;
};

/// Number of parameter-leaf occurrences in the unfolding.  Infinite iff a leaf
/// is reachable from a cycle; otherwise counted by paths on the acyclic graph.
inline LeafCount count_param_leaves(const RationalTree& t)
{
    const auto n = t.size();
    std::vector<std::vector<std::size_t>> adj(n);
    std::vector<std::vector<std::size_t>> radj(n);
    for (std::size_t s = 0; s < n; ++s)
        for (auto c : t.state(s).children) {
            adj[s].push_back(c);
            radj[c].push_back(s);
        }
    auto scc = detail::strongly_connected_components(adj);

    std::vector<bool> reaches_leaf(n, false);
    std::vector<std::size_t> work;
    for (std::size_t s = 0; s < n; ++s)
        if (t.state(s).leaf) {
            reaches_leaf[s] = true;
            work.push_back(s);
        }
    while (!work.empty()) {
        auto s = work.back();
        work.pop_back();
        for (auto p : radj[s])
            if (!reaches_leaf[p]) {
                reaches_leaf[p] = true;
                work.push_back(p);
            }
    }
    for (std::size_t s = 0; s < n; ++s)
        if (reaches_leaf[s] && scc.cyclic[scc.component[s]])
            return {true, 0, false};

    // Acyclic from here on: components are singletons numbered in reverse
    // topological order, so children always have smaller component index.
    std::vector<std::size_t> order(n);
    for (std::size_t s = 0; s < n; ++s)
        order[scc.component[s]] = s;
    std::vector<std::uint64_t> count(n, 0);
    bool saturated = false;
    for (auto s : order) {
        if (t.state(s).leaf) {
            count[s] = 1;
            continue;
        }
        for (auto c : t.state(s).children) {
            count[s] = saturating_add(count[s], count[c]);
            if (count[s] == UINT64_MAX)
                saturated = true;
        }
    }
    return {false, count[RationalTree::root()], saturated};
}

/// Membership in the subalgebra of trees with finitely many parameter leaves.
inline bool in_C(const RationalTree& t) { return count_param_leaves(t).finite(); }

/// Second-order substitution: every leaf y is replaced by assignment(y).
inline RationalTree graft(const RationalTree& t, const std::map<std::string, RationalTree>& assignment)
{
    std::vector<State> states(t.states());
    std::map<std::string, std::size_t> roots;
    for (const auto& y : t.parameters()) {
        auto it = assignment.find(y);
        if (it == assignment.end())
            throw error(errc::missing_assignment, "no tree assigned to parameter '" + y + "'");
        detail::require_same_signature(t, it->second);
        roots[y] = detail::append_states(states, it->second);
    }
    auto redirect = [&](std::size_t s) {
        const auto& st = t.state(s);
        return st.leaf ? roots.at(st.param) : s;
    };
    for (std::size_t s = 0; s < t.size(); ++s)
        for (auto& c : states[s].children)
            c = redirect(c);
    return minimize(RationalTree{t.signature(), std::move(states), redirect(RationalTree::root())});
}

/// Eventually periodic stream prefix . period^omega, kept in normal form:
/// primitive period and shortest prefix.
class Lasso {
public:
    Lasso() = default;

    Lasso(std::vector<std::string> prefix, std::vector<std::string> period)
        : prefix_(std::move(prefix)), period_(std::move(period))
    {
        if (period_.empty())
            throw error(errc::invalid_system, "lasso period must be nonempty");
        normalize();
    }

    [[nodiscard]] const std::vector<std::string>& prefix() const noexcept { return prefix_; }
    [[nodiscard]] const std::vector<std::string>& period() const noexcept { return period_; }

    /// The i-th letter of the stream.
    [[nodiscard]] const std::string& at(std::size_t i) const
    {
        return i < prefix_.size() ? prefix_[i] : period_[(i - prefix_.size()) % period_.size()];
    }

    friend auto operator<=>(const Lasso&, const Lasso&) = default;

private:
    void normalize()
    {
        const auto n = period_.size();
        for (std::size_t d = 1; d < n; ++d) {
            if (n % d != 0)
                continue;
            bool ok = true;
            for (std::size_t i = d; i < n && ok; ++i)
                ok = period_[i] == period_[i % d];
            if (ok) {
                period_.resize(d);
                break;
            }
        }
        while (!prefix_.empty() && prefix_.back() == period_.back()) {
            std::rotate(period_.rbegin(), period_.rbegin() + 1, period_.rend());
            prefix_.pop_back();
        }
    }

    std::vector<std::string> prefix_;
    std::vector<std::string> period_;
};

/// "c(ab)^w"; letters are separated by spaces when any name is longer than one
/// character.
inline std::string to_string(const Lasso& w)
{
    bool spaced = false;
    for (const auto* part : {&w.prefix(), &w.period()})
        for (const auto& s : *part)
            spaced = spaced || s.size() != 1;
    auto join = [&](const std::vector<std::string>& v) {
        std::string out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i && spaced)
                out += ' ';
            out += v[i];
        }
        return out;
    };
    std::string out = join(w.prefix());
    if (!out.empty() && spaced)
        out += ' ';
    return out + "(" + join(w.period()) + ")^w";
}

inline void require_unary(const Signature& sig)
{
    if (!sig.is_unary())
        throw error(errc::non_unary_signature, "operation requires every symbol to be unary");
}

inline RationalTree from_lasso(const Lasso& w, const Signature& sig)
{
    require_unary(sig);
    const auto p = w.prefix().size();
    const auto q = w.period().size();
    std::vector<State> states;
    for (std::size_t i = 0; i < p + q; ++i) {
        auto next = i + 1 < p + q ? i + 1 : p;
        states.push_back(State::op(sig.require(w.at(i)), {next}));
    }
    return minimize(RationalTree{sig, std::move(states), 0});
}

inline Lasso to_lasso(const RationalTree& t)
{
    require_unary(t.signature());
    if (!t.parameters().empty())
        throw error(errc::has_parameters, "stream tree must not contain parameter leaves");
    constexpr auto none = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> seen_at(t.size(), none);
    std::vector<std::string> letters;
    std::size_t s = RationalTree::root();
    while (seen_at[s] == none) {
        seen_at[s] = letters.size();
        letters.push_back(t.label(s));
        s = t.state(s).children[0];
    }
    auto entry = static_cast<std::ptrdiff_t>(seen_at[s]);
    return {{letters.begin(), letters.begin() + entry}, {letters.begin() + entry, letters.end()}};
}

} // namespace corec
