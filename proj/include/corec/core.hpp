#pragma once

// Signatures, flat terms, finite trees and flat equation systems.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "corec/error.hpp"

namespace corec {

/// ASCII spelling of the cutting label.  Users may not declare it (nor "⊥")
/// as a parameter.
inline constexpr std::string_view bottom = "_bot";

inline bool is_reserved_name(std::string_view name) noexcept
{
    return name == bottom || name == "⊥";
}

struct Symbol {
    std::string name;
    std::size_t arity = 0;

    friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

/// Finite list of operation symbols.  Construction does not validate; call
/// validate_signature() (EquationSystem and the parsers do so).
class Signature {
public:
    Signature() = default;

    explicit Signature(std::vector<Symbol> symbols) : symbols_(std::move(symbols))
    {
        for (std::size_t i = 0; i < symbols_.size(); ++i)
            index_.try_emplace(symbols_[i].name, i);
    }

    Signature(std::initializer_list<Symbol> symbols)
        : Signature(std::vector<Symbol>(symbols))
    {}

    [[nodiscard]] const std::vector<Symbol>& symbols() const noexcept { return symbols_; }
    [[nodiscard]] std::size_t size() const noexcept { return symbols_.size(); }
    [[nodiscard]] const Symbol& operator[](std::size_t i) const { return symbols_[i]; }

    [[nodiscard]] std::optional<std::size_t> index_of(std::string_view name) const
    {
        auto it = index_.find(std::string(name));
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

    [[nodiscard]] std::size_t require(std::string_view name) const
    {
        auto i = index_of(name);
        if (!i)
            throw error(errc::undeclared_name, "unknown symbol '" + std::string(name) + "'");
        return *i;
    }

    [[nodiscard]] std::size_t arity(std::string_view name) const { return symbols_[require(name)].arity; }

    [[nodiscard]] std::size_t max_arity() const noexcept
    {
        std::size_t m = 0;
        for (const auto& s : symbols_)
            m = std::max(m, s.arity);
        return m;
    }

    /// True iff every symbol is unary (constants excluded).
    [[nodiscard]] bool is_unary() const noexcept
    {
        return !symbols_.empty() &&
               std::all_of(symbols_.begin(), symbols_.end(), [](const Symbol& s) { return s.arity == 1; });
    }

    friend bool operator==(const Signature& a, const Signature& b) { return a.symbols_ == b.symbols_; }

private:
    std::vector<Symbol> symbols_;
    std::unordered_map<std::string, std::size_t> index_;
};

inline void validate_signature(const Signature& s)
{
    if (s.size() == 0)
        throw error(errc::empty_signature, "signature has no symbols");
    std::set<std::string_view> seen;
    for (const auto& sym : s.symbols()) {
        if (sym.name.empty())
            throw error(errc::parse_error, "empty symbol name");
        if (!seen.insert(sym.name).second)
            throw error(errc::duplicate_symbol, "symbol '" + sym.name + "' declared twice");
    }
}

struct Atom {
    enum class Kind : std::uint8_t { var, param };

    Kind kind = Kind::var;
    std::string name;

    static Atom var(std::string n) { return {Kind::var, std::move(n)}; }
    static Atom param(std::string n) { return {Kind::param, std::move(n)}; }

    [[nodiscard]] bool is_var() const noexcept { return kind == Kind::var; }
    [[nodiscard]] bool is_param() const noexcept { return kind == Kind::param; }

    friend auto operator<=>(const Atom&, const Atom&) = default;
};

/// sigma(a1, ..., an): a depth-one term over atoms.
struct FlatTerm {
    std::string head;
    std::vector<Atom> args;

    friend auto operator<=>(const FlatTerm&, const FlatTerm&) = default;
};

inline std::string to_string(const FlatTerm& t)
{
    std::string out = t.head + "(";
    for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i)
            out += ", ";
        out += t.args[i].name;
    }
    return out + ")";
}

inline void check_flat_term(const Signature& s, const FlatTerm& t)
{
    auto arity = s.arity(t.head);
    if (arity != t.args.size())
        throw error(errc::arity_mismatch, t.head + " expects " + std::to_string(arity) + " arguments, got " +
                                              std::to_string(t.args.size()));
}

/// Advances idx as an odometer over [0, base)^n, last position fastest.
/// Returns false once every tuple has been visited.
inline bool next_tuple(std::vector<std::size_t>& idx, std::size_t base) noexcept
{
    for (std::size_t pos = idx.size(); pos > 0; --pos) {
        if (++idx[pos - 1] < base)
            return true;
        idx[pos - 1] = 0;
    }
    return false;
}

/// All flat terms sigma(a1..an) with sigma in s and ai drawn from atoms, in
/// lexicographic order of (symbol index, atom indices).
inline std::vector<FlatTerm> enumerate_flat_terms(const Signature& s, std::span<const Atom> atoms,
                                                  const Budget& budget = {})
{
    std::uint64_t total = 0;
    for (const auto& sym : s.symbols())
        total = saturating_add(total, saturating_pow(atoms.size(), sym.arity));
    budget.require(total, "flat term enumeration");

    std::vector<FlatTerm> out;
    out.reserve(total);
    for (const auto& sym : s.symbols()) {
        std::vector<std::size_t> idx(sym.arity, 0);
        if (sym.arity > 0 && atoms.empty())
            continue;
        for (;;) {
            FlatTerm t{sym.name, {}};
            t.args.reserve(sym.arity);
            for (auto i : idx)
                t.args.push_back(atoms[i]);
            out.push_back(std::move(t));
            if (!next_tuple(idx, atoms.size()))
                break;
        }
    }
    return out;
}

inline FlatTerm substitute_flat(const FlatTerm& t, const std::map<Atom, Atom>& v)
{
    FlatTerm out{t.head, {}};
    out.args.reserve(t.args.size());
    for (const auto& a : t.args) {
        auto it = v.find(a);
        if (it == v.end())
            throw error(errc::unbound_atom, "no image for atom '" + a.name + "'");
        out.args.push_back(it->second);
    }
    return out;
}

/// Finite Sigma-tree over parameters.  Leaves carry a parameter name (the
/// cutting label appears as `bottom`); constants are Op nodes with no children.
struct FiniteTree {
    std::string label;
    bool leaf = false;
    std::vector<FiniteTree> children;

    static FiniteTree param(std::string name) { return {std::move(name), true, {}}; }
    static FiniteTree op(std::string symbol, std::vector<FiniteTree> kids = {})
    {
        return {std::move(symbol), false, std::move(kids)};
    }

    [[nodiscard]] std::size_t size() const noexcept
    {
        std::size_t n = 1;
        for (const auto& c : children)
            n += c.size();
        return n;
    }

    friend bool operator==(const FiniteTree&, const FiniteTree&) = default;
};

inline void to_string(const FiniteTree& t, std::string& out)
{
    out += t.label;
    if (t.leaf)
        return;
    out += '(';
    for (std::size_t i = 0; i < t.children.size(); ++i) {
        if (i)
            out += ',';
        to_string(t.children[i], out);
    }
    out += ')';
}

inline std::string to_string(const FiniteTree& t)
{
    std::string out;
    to_string(t, out);
    return out;
}

inline void check_tree(const Signature& s, const FiniteTree& t)
{
    if (t.leaf)
        return;
    if (s.arity(t.label) != t.children.size())
        throw error(errc::arity_mismatch, "node " + t.label + " has wrong number of children");
    for (const auto& c : t.children)
        check_tree(s, c);
}

struct ParamRef {
    std::string name;

    friend auto operator<=>(const ParamRef&, const ParamRef&) = default;
};

/// Right-hand side of one flat equation: a flat term over variables and
/// parameters, or a bare parameter.
using Rhs = std::variant<FlatTerm, ParamRef>;

inline std::string to_string(const Rhs& r)
{
    if (const auto* p = std::get_if<ParamRef>(&r))
        return p->name;
    return to_string(std::get<FlatTerm>(r));
}

/// Flat equation morphism X -> H_Sigma(X + Y) + Y with X, Y finite.
class EquationSystem {
public:
    EquationSystem() = default;

    EquationSystem(Signature sig, std::vector<std::string> parameters,
                   std::vector<std::pair<std::string, Rhs>> equations)
        : sig_(std::move(sig)), parameters_(std::move(parameters))
    {
        validate_signature(sig_);
        for (std::size_t i = 0; i < parameters_.size(); ++i) {
            if (is_reserved_name(parameters_[i]))
                throw error(errc::reserved_parameter, "parameter name '" + parameters_[i] + "' is reserved");
            if (!param_index_.try_emplace(parameters_[i], i).second)
                throw error(errc::invalid_system, "parameter '" + parameters_[i] + "' declared twice");
        }
        for (auto& [name, rhs] : equations) {
            if (param_index_.contains(name))
                throw error(errc::invalid_system, "'" + name + "' is both a variable and a parameter");
            if (!var_index_.try_emplace(name, variables_.size()).second)
                throw error(errc::invalid_system, "variable '" + name + "' defined twice");
            variables_.push_back(name);
            rhs_.push_back(std::move(rhs));
        }
        for (const auto& r : rhs_)
            check_rhs(r);
    }

    [[nodiscard]] const Signature& signature() const noexcept { return sig_; }
    [[nodiscard]] const std::vector<std::string>& variables() const noexcept { return variables_; }
    [[nodiscard]] const std::vector<std::string>& parameters() const noexcept { return parameters_; }
    [[nodiscard]] const std::vector<Rhs>& rhs() const noexcept { return rhs_; }
    [[nodiscard]] std::size_t size() const noexcept { return variables_.size(); }

    [[nodiscard]] const Rhs& rhs(std::string_view var) const { return rhs_[variable_index(var)]; }

    [[nodiscard]] bool has_variable(std::string_view n) const { return var_index_.contains(std::string(n)); }
    [[nodiscard]] bool has_parameter(std::string_view n) const { return param_index_.contains(std::string(n)); }

    [[nodiscard]] std::size_t variable_index(std::string_view n) const
    {
        auto it = var_index_.find(std::string(n));
        if (it == var_index_.end())
            throw error(errc::undeclared_name, "unknown variable '" + std::string(n) + "'");
        return it->second;
    }

    [[nodiscard]] std::size_t parameter_index(std::string_view n) const
    {
        auto it = param_index_.find(std::string(n));
        if (it == param_index_.end())
            throw error(errc::undeclared_name, "unknown parameter '" + std::string(n) + "'");
        return it->second;
    }

    std::vector<std::pair<std::string, Rhs>> equations() const
    {
        std::vector<std::pair<std::string, Rhs>> out;
        for (std::size_t i = 0; i < variables_.size(); ++i)
            out.emplace_back(variables_[i], rhs_[i]);
        return out;
    }

private:
    void check_rhs(const Rhs& r) const
    {
        if (const auto* p = std::get_if<ParamRef>(&r)) {
            if (!has_parameter(p->name))
                throw error(errc::undeclared_name, "undeclared parameter '" + p->name + "'");
            return;
        }
        const auto& t = std::get<FlatTerm>(r);
        if (!sig_.index_of(t.head))
            throw error(errc::undeclared_name, "undeclared symbol '" + t.head + "'");
        check_flat_term(sig_, t);
        for (const auto& a : t.args) {
            bool ok = a.is_var() ? has_variable(a.name) : has_parameter(a.name);
            if (!ok)
                throw error(errc::undeclared_name, "undeclared " + std::string(a.is_var() ? "variable" : "parameter") +
                                                       " '" + a.name + "'");
        }
    }

    Signature sig_;
    std::vector<std::string> variables_;
    std::vector<std::string> parameters_;
    std::vector<Rhs> rhs_;
    std::unordered_map<std::string, std::size_t> var_index_;
    std::unordered_map<std::string, std::size_t> param_index_;
};

} // namespace corec
