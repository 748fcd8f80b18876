#pragma once

// Presentations of finitary set functors: a signature plus equations between
// flat terms.  The presented functor maps a finite set X to the flat terms
// over X modulo the equivalence generated by all substitution instances of
// the equations (the kernel).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "corec/algebra.hpp"
#include "corec/core.hpp"
#include "corec/detail/union_find.hpp"
#include "corec/error.hpp"
#include "corec/rtree.hpp"

namespace corec {

struct Axiom {
    FlatTerm lhs;
    FlatTerm rhs;

    friend auto operator<=>(const Axiom&, const Axiom&) = default;
};

inline std::string to_string(const Axiom& a) { return to_string(a.lhs) + " = " + to_string(a.rhs); }

class Presentation {
public:
    Presentation() = default;

    Presentation(Signature sig, std::vector<Axiom> axioms) : sig_(std::move(sig)), axioms_(std::move(axioms))
    {
        validate_signature(sig_);
        for (auto& a : axioms_)
            for (auto* t : {&a.lhs, &a.rhs}) {
                if (!sig_.index_of(t->head))
                    throw error(errc::undeclared_name, "undeclared symbol '" + t->head + "' in axiom");
                check_flat_term(sig_, *t);
                for (auto& atom : t->args)
                    atom.kind = Atom::Kind::var;
            }
    }

    [[nodiscard]] const Signature& signature() const noexcept { return sig_; }
    [[nodiscard]] const std::vector<Axiom>& axioms() const noexcept { return axioms_; }

    friend bool operator==(const Presentation& a, const Presentation& b)
    {
        return a.sig_ == b.sig_ && a.axioms_ == b.axioms_;
    }

private:
    Signature sig_;
    std::vector<Axiom> axioms_;
};

/// Atoms named v1..vn.
inline std::vector<Atom> probe_atoms(std::size_t n, std::string_view prefix = "v")
{
    std::vector<Atom> out;
    for (std::size_t i = 1; i <= n; ++i)
        out.push_back(Atom::var(std::string(prefix) + std::to_string(i)));
    return out;
}

namespace detail {

/// Variables of an axiom in order of first occurrence, left side first.
inline std::vector<std::string> axiom_variables(const Axiom& a)
{
    std::vector<std::string> out;
    for (const auto* t : {&a.lhs, &a.rhs})
        for (const auto& x : t->args)
            if (std::find(out.begin(), out.end(), x.name) == out.end())
                out.push_back(x.name);
    return out;
}

/// The kernel equivalence on all flat terms over a fixed atom set, computed
/// by union-find over every substitution instance of every axiom.
class Kernel {
public:
    Kernel(const Presentation& p, std::vector<Atom> atoms, const Budget& budget)
        : sig_(p.signature()), atoms_(std::move(atoms))
    {
        for (std::size_t i = 0; i < atoms_.size(); ++i)
            if (!atom_index_.try_emplace(atoms_[i].name, i).second)
                throw error(errc::invalid_system, "atom '" + atoms_[i].name + "' listed twice");
        terms_ = enumerate_flat_terms(sig_, atoms_, budget);
        std::uint64_t work = terms_.size();
        for (const auto& a : p.axioms())
            work = saturating_add(work, saturating_pow(atoms_.size(), axiom_variables(a).size()));
        budget.require(work, "kernel saturation");

        std::size_t offset = 0;
        for (const auto& s : sig_.symbols()) {
            offsets_.push_back(offset);
            if (s.arity == 0 || !atoms_.empty())
                offset += saturating_pow(atoms_.size(), s.arity);
        }
        uf_ = UnionFind(terms_.size());

        for (const auto& a : p.axioms()) {
            auto vars = axiom_variables(a);
            if (!vars.empty() && atoms_.empty())
                continue;
            std::vector<std::size_t> binding(vars.size(), 0);
            auto slot = [&](const FlatTerm& t) {
                std::vector<std::size_t> pos;
                for (const auto& x : t.args)
                    pos.push_back(static_cast<std::size_t>(std::find(vars.begin(), vars.end(), x.name) - vars.begin()));
                return pos;
            };
            auto lpos = slot(a.lhs);
            auto rpos = slot(a.rhs);
            auto lsym = *sig_.index_of(a.lhs.head);
            auto rsym = *sig_.index_of(a.rhs.head);
            do {
                uf_.unite(index_of(lsym, lpos, binding), index_of(rsym, rpos, binding));
            } while (next_tuple(binding, atoms_.size()));
        }
    }

    [[nodiscard]] const std::vector<FlatTerm>& terms() const noexcept { return terms_; }
    [[nodiscard]] const std::vector<Atom>& atoms() const noexcept { return atoms_; }

    [[nodiscard]] std::size_t index(const FlatTerm& t) const
    {
        auto sym = sig_.require(t.head);
        check_flat_term(sig_, t);
        std::size_t row = 0;
        for (const auto& a : t.args) {
            auto it = atom_index_.find(a.name);
            if (it == atom_index_.end())
                throw error(errc::unbound_atom, "atom '" + a.name + "' is not in the atom set");
            row = row * atoms_.size() + it->second;
        }
        return offsets_[sym] + row;
    }

    std::size_t find(std::size_t i) { return uf_.find(i); }
    bool equal(std::size_t i, std::size_t j) { return uf_.find(i) == uf_.find(j); }
    bool equal(const FlatTerm& t, const FlatTerm& u) { return equal(index(t), index(u)); }

    /// Equivalence classes as term indices, ordered by their least member.
    std::vector<std::vector<std::size_t>> classes()
    {
        std::map<std::size_t, std::size_t> slot;
        std::vector<std::vector<std::size_t>> out;
        for (std::size_t i = 0; i < terms_.size(); ++i) {
            auto [it, fresh] = slot.try_emplace(uf_.find(i), out.size());
            if (fresh)
                out.emplace_back();
            out[it->second].push_back(i);
        }
        return out;
    }

private:
    std::size_t index_of(std::size_t sym, const std::vector<std::size_t>& pos,
                         const std::vector<std::size_t>& binding) const
    {
        std::size_t row = 0;
        for (auto p : pos)
            row = row * atoms_.size() + binding[p];
        return offsets_[sym] + row;
    }

    Signature sig_;
    std::vector<Atom> atoms_;
    std::map<std::string, std::size_t> atom_index_;
    std::vector<FlatTerm> terms_;
    std::vector<std::size_t> offsets_;
    UnionFind uf_;
};

/// Renames atoms to x1, x2, ... in order of first occurrence.
inline Axiom canonical_axiom(const FlatTerm& lhs, const FlatTerm& rhs)
{
    std::map<std::string, std::string> names;
    Axiom a{lhs, rhs};
    for (auto* t : {&a.lhs, &a.rhs})
        for (auto& x : t->args) {
            auto [it, fresh] = names.try_emplace(x.name);
            if (fresh)
                it->second = "x" + std::to_string(names.size());
            x = Atom::var(it->second);
        }
    return a;
}

/// A generating set of axioms for the given classes: each class member is
/// equated with the class's first member; duplicates up to renaming dropped.
inline std::vector<Axiom> spanning_axioms(const std::vector<std::vector<FlatTerm>>& classes)
{
    std::vector<Axiom> out;
    std::set<Axiom> seen;
    for (const auto& c : classes)
        for (std::size_t i = 1; i < c.size(); ++i) {
            auto a = canonical_axiom(c.front(), c[i]);
            if (seen.insert(a).second)
                out.push_back(std::move(a));
        }
    return out;
}

inline bool pairwise_distinct(const std::vector<Atom>& args)
{
    std::set<std::string> seen;
    for (const auto& a : args)
        if (!seen.insert(a.name).second)
            return false;
    return true;
}

} // namespace detail

inline bool kernel_equal(const Presentation& p, const FlatTerm& t, const FlatTerm& u, std::span<const Atom> atoms,
                         const Budget& budget = {})
{
    detail::Kernel k(p, {atoms.begin(), atoms.end()}, budget);
    return k.equal(t, u);
}

/// Flat terms over `atoms` grouped into kernel classes, ordered by least member.
inline std::vector<std::vector<FlatTerm>> hx_quotient(const Presentation& p, std::span<const Atom> atoms,
                                                      const Budget& budget = {})
{
    detail::Kernel k(p, {atoms.begin(), atoms.end()}, budget);
    std::vector<std::vector<FlatTerm>> out;
    for (const auto& c : k.classes()) {
        auto& cls = out.emplace_back();
        for (auto i : c)
            cls.push_back(k.terms()[i]);
    }
    return out;
}

struct ReducedCheck {
    bool reduced = true;
    std::optional<Axiom> violation;
    int condition = 0;  // 1: distinct left variables missing on the right; 2: distinct on both sides, heads differ
};

/// Checks both reducedness conditions on every kernel pair over probe_size
/// atoms (default: twice the largest arity).
inline ReducedCheck is_reduced(const Presentation& p, std::optional<std::size_t> probe_size = std::nullopt,
                               const Budget& budget = {})
{
    const auto need = 2 * p.signature().max_arity();
    const auto size = probe_size.value_or(need);
    if (size < need)
        throw error(errc::invalid_system, "probe size must be at least " + std::to_string(need));
    detail::Kernel k(p, probe_atoms(size), budget);
    const auto classes = k.classes();
    // the second condition presupposes the first, so report the first one first
    for (int condition = 1; condition <= 2; ++condition)
        for (const auto& cls : classes)
            for (auto i : cls)
                for (auto j : cls) {
                    const auto& t = k.terms()[i];
                    const auto& u = k.terms()[j];
                    if (i == j || !detail::pairwise_distinct(t.args))
                        continue;
                    if (condition == 1) {
                        for (const auto& x : t.args)
                            if (std::find(u.args.begin(), u.args.end(), x) == u.args.end())
                                return {false, Axiom{t, u}, 1};
                    } else if (detail::pairwise_distinct(u.args) && t.head != u.head) {
                        return {false, Axiom{t, u}, 2};
                    }
                }
    return {};
}

/// old symbol(a_0..a_{n-1}) is presented by target(a_{coords[0]}, ..., a_{coords[m-1]}).
struct SymbolTranslation {
    std::string target;
    std::vector<std::size_t> coords;

    friend bool operator==(const SymbolTranslation&, const SymbolTranslation&) = default;
};

struct Reduction {
    Presentation presentation;
    std::map<std::string, SymbolTranslation> translation;
};

namespace detail {

inline FlatTerm distinct_term(const Symbol& s, const std::vector<Atom>& atoms)
{
    return {s.name, {atoms.begin(), atoms.begin() + static_cast<std::ptrdiff_t>(s.arity)}};
}

} // namespace detail

/// Drops inessential coordinates, then keeps one representative (the least
/// name) of every class of symbols related by an equation with pairwise
/// distinct variables on both sides.
inline Reduction reduce(const Presentation& p, const Budget& budget = {})
{
    const auto& sig = p.signature();
    const auto max_arity = sig.max_arity();
    const auto probe = probe_atoms(2 * max_arity);

    // Inessential coordinates: sigma(x1..xn) = sigma(x1..z..xn), all distinct.
    std::vector<std::vector<std::size_t>> kept(sig.size());
    {
        detail::Kernel k(p, probe_atoms(max_arity + 1), budget);
        const auto& atoms = k.atoms();
        for (std::size_t s = 0; s < sig.size(); ++s) {
            auto t = detail::distinct_term(sig[s], atoms);
            for (std::size_t i = 0; i < sig[s].arity; ++i) {
                auto u = t;
                u.args[i] = atoms[sig[s].arity];
                if (!k.equal(t, u))
                    kept[s].push_back(i);
            }
        }
    }

    std::vector<Symbol> shrunk;
    for (std::size_t s = 0; s < sig.size(); ++s)
        shrunk.push_back({sig[s].name, kept[s].size()});
    Signature sig1(shrunk);

    // Kernel of the shrunk signature: pad dropped coordinates with a fresh atom.
    std::vector<std::vector<FlatTerm>> classes1;
    {
        auto padded_atoms = probe;
        const Atom pad = Atom::var("z*");
        padded_atoms.push_back(pad);
        detail::Kernel k(p, padded_atoms, budget);
        auto terms1 = enumerate_flat_terms(sig1, probe, budget);
        std::map<std::size_t, std::size_t> slot;
        for (const auto& t1 : terms1) {
            auto s = *sig.index_of(t1.head);
            FlatTerm full{t1.head, std::vector<Atom>(sig[s].arity, pad)};
            for (std::size_t i = 0; i < kept[s].size(); ++i)
                full.args[kept[s][i]] = t1.args[i];
            auto [it, fresh] = slot.try_emplace(k.find(k.index(full)), classes1.size());
            if (fresh)
                classes1.emplace_back();
            classes1[it->second].push_back(t1);
        }
    }

    // Symbols related by a pair with pairwise distinct variables on both sides.
    detail::UnionFind related(sig1.size());
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> link;  // (from, to) -> coords
    for (const auto& cls : classes1)
        for (const auto& t : cls)
            for (const auto& u : cls) {
                if (t.head == u.head || !detail::pairwise_distinct(t.args) || !detail::pairwise_distinct(u.args))
                    continue;
                auto from = *sig1.index_of(t.head);
                auto to = *sig1.index_of(u.head);
                if (link.contains({from, to}))
                    continue;
                std::vector<std::size_t> coords;
                for (const auto& z : u.args) {
                    auto it = std::find(t.args.begin(), t.args.end(), z);
                    if (it == t.args.end())
                        throw error(errc::invalid_system, "cannot merge " + t.head + " into " + u.head +
                                                              ": coordinates do not correspond");
                    coords.push_back(static_cast<std::size_t>(it - t.args.begin()));
                }
                link[{from, to}] = std::move(coords);
                related.unite(from, to);
            }

    std::map<std::size_t, std::size_t> rep;  // class root -> representative symbol
    for (std::size_t s = 0; s < sig1.size(); ++s) {
        auto [it, fresh] = rep.try_emplace(related.find(s), s);
        if (!fresh && sig1[s].name < sig1[it->second].name)
            it->second = s;
    }

    Reduction out;
    std::vector<Symbol> final_symbols;
    std::set<std::string> kept_names;
    for (std::size_t s = 0; s < sig1.size(); ++s) {
        auto r = rep.at(related.find(s));
        if (r == s) {
            final_symbols.push_back(sig1[s]);
            kept_names.insert(sig1[s].name);
        }
        std::vector<std::size_t> coords;
        if (r == s) {
            coords = kept[s];
        } else {
            for (auto c : link.at({s, r}))
                coords.push_back(kept[s][c]);
        }
        out.translation[sig[s].name] = {sig1[r].name, std::move(coords)};
    }

    std::vector<std::vector<FlatTerm>> restricted;
    for (const auto& cls : classes1) {
        std::vector<FlatTerm> members;
        for (const auto& t : cls)
            if (kept_names.contains(t.head))
                members.push_back(t);
        if (members.size() > 1)
            restricted.push_back(std::move(members));
    }
    out.presentation = Presentation(Signature(std::move(final_symbols)), detail::spanning_axioms(restricted));
    return out;
}

/// Adds, for every sigma with a kernel pair sigma(x1..xn) = sigma(z1..zn)
/// where the x_i are distinct and disjoint from the z_j, a constant c with
/// sigma(x1..xn) = c, unless such a constant already exists.
inline Presentation make_constants_explicit(const Presentation& p, const Budget& budget = {})
{
    const auto& sig = p.signature();
    const auto max_arity = sig.max_arity();
    detail::Kernel k(p, probe_atoms(2 * max_arity), budget);
    const auto& atoms = k.atoms();

    std::set<std::string> names;
    for (const auto& s : sig.symbols())
        names.insert(s.name);
    auto symbols = sig.symbols();
    auto axioms = p.axioms();
    std::vector<FlatTerm> added;

    for (const auto& s : sig.symbols()) {
        if (s.arity == 0)
            continue;
        auto t = detail::distinct_term(s, atoms);
        bool constant_like = false;
        std::vector<std::size_t> z(s.arity, 0);
        do {
            FlatTerm u{s.name, {}};
            for (auto i : z)
                u.args.push_back(atoms[s.arity + i]);
            constant_like = k.equal(t, u);
        } while (!constant_like && next_tuple(z, s.arity));
        if (!constant_like)
            continue;
        bool has_constant = false;
        for (const auto& c : sig.symbols())
            if (c.arity == 0 && k.equal(t, FlatTerm{c.name, {}}))
                has_constant = true;
        for (const auto& prev : added)
            if (k.equal(t, prev))
                has_constant = true;
        if (has_constant)
            continue;
        added.push_back(t);
        std::string name = "c_" + s.name;
        while (names.contains(name))
            name += '\'';
        names.insert(name);
        symbols.push_back({name, 0});
        axioms.push_back(detail::canonical_axiom(t, FlatTerm{name, {}}));
    }
    return {Signature(std::move(symbols)), std::move(axioms)};
}

// ---------------------------------------------------------------------------
// Bounded congruence of finite and rational trees

enum class Outcome { equal, distinct, unknown };

inline std::string_view to_string(Outcome o)
{
    switch (o) {
    case Outcome::equal: return "equal";
    case Outcome::distinct: return "distinct";
    case Outcome::unknown: return "unknown";
    }
    return "unknown";
}

/// A registered model that satisfies the presentation but evaluates the two
/// trees differently under `assignment` of their leaves.
struct ModelWitness {
    std::size_t model = 0;
    Valuation assignment;
    std::size_t lhs_value = 0;
    std::size_t rhs_value = 0;
};

/// Rewriting saturated without budget exhaustion or instantiation gaps, and
/// the two trees ended in different classes.
struct ClosureWitness {
    std::size_t classes = 0;
};

struct Verdict3 {
    Outcome outcome = Outcome::unknown;
    std::variant<std::monostate, ModelWitness, ClosureWitness> witness;
    /// for comparisons of rational trees: the refuting cut level, or the
    /// number of levels examined
    std::size_t level = 0;
    std::uint64_t work = 0;
    std::string reason;
};

namespace detail {

/// Assignment of a presentation's axioms that fails in the algebra, if any.
struct AxiomFailure {
    std::size_t axiom = 0;
    Valuation assignment;
};

inline std::optional<AxiomFailure> first_failing_axiom(const FiniteAlgebra& a, const Presentation& p)
{
    for (const auto& s : p.signature().symbols()) {
        auto i = a.signature().index_of(s.name);
        if (!i || a.signature()[*i].arity != s.arity)
            throw error(errc::signature_mismatch, "algebra does not interpret " + s.name);
    }
    for (std::size_t ax = 0; ax < p.axioms().size(); ++ax) {
        const auto& axiom = p.axioms()[ax];
        auto vars = axiom_variables(axiom);
        if (!vars.empty() && a.size() == 0)
            continue;
        std::vector<std::size_t> v(vars.size(), 0);
        auto eval = [&](const FlatTerm& t) {
            std::vector<std::size_t> args;
            for (const auto& x : t.args)
                args.push_back(v[static_cast<std::size_t>(std::find(vars.begin(), vars.end(), x.name) - vars.begin())]);
            return a.apply(*a.signature().index_of(t.head), args);
        };
        do {
            if (eval(axiom.lhs) != eval(axiom.rhs)) {
                AxiomFailure f{ax, {}};
                for (std::size_t i = 0; i < vars.size(); ++i)
                    f.assignment[vars[i]] = v[i];
                return f;
            }
        } while (next_tuple(v, a.size()));
    }
    return std::nullopt;
}

inline std::size_t evaluate(const FiniteAlgebra& a, const FiniteTree& t, const Valuation& leaves)
{
    if (t.leaf)
        return leaves.at(t.label);
    std::vector<std::size_t> args;
    args.reserve(t.children.size());
    for (const auto& c : t.children)
        args.push_back(evaluate(a, c, leaves));
    return a.apply(a.signature().require(t.label), args);
}

inline void collect_leaves(const FiniteTree& t, std::set<std::string>& out)
{
    if (t.leaf)
        out.insert(t.label);
    for (const auto& c : t.children)
        collect_leaves(c, out);
}

/// Hash-consed term graph with union-find over node ids.
class EGraph {
public:
    struct Node {
        std::string label;
        bool leaf = false;
        std::vector<std::size_t> kids;
    };

    std::size_t add(const std::string& label, bool leaf, std::vector<std::size_t> kids)
    {
        for (auto& k : kids)
            k = uf_.find(k);
        Key key{leaf, label, kids};
        if (auto it = memo_.find(key); it != memo_.end())
            return uf_.find(it->second);
        auto id = nodes_.size();
        nodes_.push_back({label, leaf, std::move(kids)});
        uf_.add();
        memo_.emplace(std::move(key), id);
        return id;
    }

    std::size_t add(const FiniteTree& t)
    {
        std::vector<std::size_t> kids;
        for (const auto& c : t.children)
            kids.push_back(add(c));
        return add(t.label, t.leaf, std::move(kids));
    }

    std::size_t find(std::size_t x) { return uf_.find(x); }
    bool merge(std::size_t a, std::size_t b) { return uf_.unite(a, b); }
    [[nodiscard]] std::size_t node_count() const noexcept { return nodes_.size(); }
    [[nodiscard]] const Node& node(std::size_t i) const { return nodes_[i]; }

    /// Restores congruence: nodes with equal labels and equal child classes
    /// share a class.
    void rebuild()
    {
        for (;;) {
            memo_.clear();
            bool merged = false;
            for (std::size_t id = 0; id < nodes_.size(); ++id) {
                for (auto& k : nodes_[id].kids)
                    k = uf_.find(k);
                auto [it, fresh] = memo_.try_emplace(Key{nodes_[id].leaf, nodes_[id].label, nodes_[id].kids}, id);
                if (!fresh && uf_.unite(it->second, id))
                    merged = true;
            }
            if (!merged)
                return;
        }
    }

    std::vector<std::size_t> classes()
    {
        std::set<std::size_t> roots;
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            roots.insert(uf_.find(i));
        return {roots.begin(), roots.end()};
    }

private:
    using Key = std::tuple<bool, std::string, std::vector<std::size_t>>;
    std::vector<Node> nodes_;
    std::map<Key, std::size_t> memo_;
    UnionFind uf_;
};

struct Rule {
    FlatTerm from;
    FlatTerm to;
    std::vector<std::string> fresh;  // variables of `to` not bound by `from`
};

inline std::vector<Rule> oriented_rules(const Presentation& p)
{
    std::vector<Rule> rules;
    for (const auto& a : p.axioms())
        for (const auto& [from, to] : {std::pair{a.lhs, a.rhs}, std::pair{a.rhs, a.lhs}}) {
            Rule r{from, to, {}};
            for (const auto& x : to.args)
                if (std::find(from.args.begin(), from.args.end(), x) == from.args.end() &&
                    std::find(r.fresh.begin(), r.fresh.end(), x.name) == r.fresh.end())
                    r.fresh.push_back(x.name);
            rules.push_back(std::move(r));
        }
    return rules;
}

} // namespace detail

/// Decides t ~ u (congruence generated by the axioms) within a budget of rule
/// applications.  Equal comes from saturation reaching a common class; Distinct
/// from a separating model or from complete saturation; otherwise Unknown.
inline Verdict3 tree_equiv_bounded(const Presentation& p, const FiniteTree& t, const FiniteTree& u,
                                   std::uint64_t budget, std::span<const FiniteAlgebra> models = {})
{
    Verdict3 v;
    detail::EGraph g;
    const auto rt = g.add(t);
    const auto ru = g.add(u);
    const auto rules = detail::oriented_rules(p);
    const bool gaps = std::any_of(rules.begin(), rules.end(), [](const auto& r) { return !r.fresh.empty(); });

    bool exhausted = false;
    bool changed = true;
    while (changed && !exhausted) {
        changed = false;
        g.rebuild();
        if (g.find(rt) == g.find(ru))
            break;
        const auto n = g.node_count();
        const auto classes = gaps ? g.classes() : std::vector<std::size_t>{};
        for (std::size_t id = 0; id < n && !exhausted; ++id) {
            const auto node = g.node(id);
            if (node.leaf)
                continue;
            for (const auto& rule : rules) {
                if (rule.from.head != node.label || rule.from.args.size() != node.kids.size())
                    continue;
                std::map<std::string, std::size_t> binding;
                bool match = true;
                for (std::size_t i = 0; i < node.kids.size() && match; ++i) {
                    auto c = g.find(node.kids[i]);
                    auto [it, fresh] = binding.try_emplace(rule.from.args[i].name, c);
                    match = fresh || it->second == c;
                }
                if (!match || (!rule.fresh.empty() && classes.empty()))
                    continue;
                std::vector<std::size_t> pick(rule.fresh.size(), 0);
                do {
                    if (++v.work > budget) {
                        exhausted = true;
                        break;
                    }
                    for (std::size_t i = 0; i < rule.fresh.size(); ++i)
                        binding[rule.fresh[i]] = classes[pick[i]];
                    std::vector<std::size_t> kids;
                    for (const auto& x : rule.to.args)
                        kids.push_back(binding.at(x.name));
                    auto c = g.add(rule.to.head, false, std::move(kids));
                    if (g.merge(id, c))
                        changed = true;
                } while (next_tuple(pick, classes.size()));
                if (exhausted)
                    break;
            }
        }
    }
    g.rebuild();
    if (g.find(rt) == g.find(ru)) {
        v.outcome = Outcome::equal;
        return v;
    }

    std::set<std::string> leaf_names;
    detail::collect_leaves(t, leaf_names);
    detail::collect_leaves(u, leaf_names);
    const std::vector<std::string> leaves(leaf_names.begin(), leaf_names.end());
    for (std::size_t m = 0; m < models.size(); ++m) {
        const auto& a = models[m];
        if (detail::first_failing_axiom(a, p) || (a.size() == 0 && !leaves.empty()))
            continue;
        std::vector<std::size_t> pick(leaves.size(), 0);
        do {
            Valuation val;
            for (std::size_t i = 0; i < leaves.size(); ++i)
                val[leaves[i]] = pick[i];
            auto x = detail::evaluate(a, t, val);
            auto y = detail::evaluate(a, u, val);
            if (x != y) {
                v.outcome = Outcome::distinct;
                v.witness = ModelWitness{m, std::move(val), x, y};
                return v;
            }
        } while (next_tuple(pick, a.size()));
    }

    if (!exhausted && !gaps) {
        v.outcome = Outcome::distinct;
        v.witness = ClosureWitness{g.classes().size()};
        return v;
    }
    v.outcome = Outcome::unknown;
    v.reason = exhausted ? "rewrite budget exhausted"
                         : "axioms with one-sided variables were instantiated only by existing subtrees";
    return v;
}

/// Compares the cuts of t and u at levels 1..k; stops at the first level
/// refuted.
inline Verdict3 rtree_equiv_upto(const Presentation& p, const RationalTree& t, const RationalTree& u, std::size_t k,
                                 std::uint64_t budget, std::span<const FiniteAlgebra> models = {},
                                 const Budget& cut_budget = {})
{
    detail::require_same_signature(t, u);
    Verdict3 result;
    result.outcome = Outcome::equal;
    for (std::size_t j = 1; j <= k; ++j) {
        auto v = tree_equiv_bounded(p, cut(t, j, cut_budget), cut(u, j, cut_budget), budget, models);
        v.level = j;
        if (v.outcome == Outcome::distinct)
            return v;
        result.work += v.work;
        if (v.outcome == Outcome::unknown && result.outcome == Outcome::equal) {
            result.outcome = Outcome::unknown;
            result.reason = "level " + std::to_string(j) + ": " + v.reason;
        }
    }
    result.level = k;
    return result;
}

} // namespace corec
