#pragma once

// Text formats:
//   .ceq   equation systems   signature f:2 a:1 / params y / eq x = f(x, y) / root x
//   .pres  presentations      signature u:2 s:1 / axiom u(p, q) = u(q, p)
//   .falg  finite algebras    signature a:1 / carrier 0 1 / table a: 0 -> 1
// and emitters for mu-terms, DOT and JSON.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "corec/algebra.hpp"
#include "corec/checker.hpp"
#include "corec/core.hpp"
#include "corec/error.hpp"
#include "corec/presentation.hpp"
#include "corec/rtree.hpp"
#include "corec/solver.hpp"

namespace corec::io {

namespace detail {

struct Token {
    enum class Kind { ident, lparen, rparen, comma, equals, colon, arrow, end };
    Kind kind = Kind::end;
    std::string text;
    std::size_t column = 0;  // 1-based
};

inline bool ident_char(char c)
{
    auto u = static_cast<unsigned char>(c);
    return u >= 0x80 || std::isalnum(u) || c == '_' || c == '\'' || c == '.' || c == '*' || c == '$' || c == '@' ||
           c == '+' || c == '!' || c == '?' || c == '~' || c == '^' || c == '/' || c == '|' || c == '&' || c == '<' ||
           c == '>' || (c == '-');
}

class Line {
public:
    Line(std::string_view text, std::size_t number) : number_(number)
    {
        std::size_t i = 0;
        while (i < text.size()) {
            char c = text[i];
            if (c == '#')
                break;
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++i;
                continue;
            }
            Token t;
            t.column = i + 1;
            if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
                t.kind = Token::Kind::arrow;
                t.text = "->";
                i += 2;
            } else if (c == '(' || c == ')' || c == ',' || c == '=' || c == ':') {
                t.kind = c == '(' ? Token::Kind::lparen
                       : c == ')' ? Token::Kind::rparen
                       : c == ',' ? Token::Kind::comma
                       : c == '=' ? Token::Kind::equals
                                  : Token::Kind::colon;
                t.text = std::string(1, c);
                ++i;
            } else if (ident_char(c)) {
                t.kind = Token::Kind::ident;
                while (i < text.size() && ident_char(text[i]) &&
                       !(text[i] == '-' && i + 1 < text.size() && text[i + 1] == '>'))
                    t.text += text[i++];
            } else {
                fail(i + 1, std::string("unexpected character '") + c + "'");
            }
            tokens_.push_back(std::move(t));
        }
        end_column_ = text.size() + 1;
    }

    [[nodiscard]] bool empty() const noexcept { return tokens_.empty(); }
    [[nodiscard]] bool done() const noexcept { return pos_ >= tokens_.size(); }
    [[nodiscard]] std::size_t number() const noexcept { return number_; }

    [[nodiscard]] const Token& peek() const
    {
        static const Token end_token{};
        return done() ? end_token : tokens_[pos_];
    }

    [[nodiscard]] std::size_t column() const { return done() ? end_column_ : tokens_[pos_].column; }

    Token expect(Token::Kind kind, std::string_view what)
    {
        if (peek().kind != kind)
            fail(column(), "expected " + std::string(what));
        return tokens_[pos_++];
    }

    bool accept(Token::Kind kind)
    {
        if (peek().kind != kind)
            return false;
        ++pos_;
        return true;
    }

    void expect_end()
    {
        if (!done())
            fail(column(), "unexpected '" + peek().text + "'");
    }

    [[noreturn]] void fail(std::size_t col, const std::string& msg, errc code = errc::parse_error) const
    {
        throw error(code, "line " + std::to_string(number_) + ", column " + std::to_string(col) + ": " + msg);
    }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::size_t number_;
    std::size_t end_column_ = 1;
};

inline std::vector<Line> lex(std::string_view text)
{
    std::vector<Line> out;
    std::size_t number = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        ++number;
        auto line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        Line l(line, number);
        if (!l.empty())
            out.push_back(std::move(l));
        start = end + 1;
    }
    return out;
}

inline void parse_signature_items(Line& line, std::vector<Symbol>& into)
{
    while (!line.done()) {
        auto col = line.column();
        auto name = line.expect(Token::Kind::ident, "symbol name").text;
        line.expect(Token::Kind::colon, "':' after symbol name");
        auto arity_col = line.column();
        auto arity = line.expect(Token::Kind::ident, "arity").text;
        if (arity.empty() || !std::all_of(arity.begin(), arity.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            line.fail(arity_col, "arity must be a natural number");
        for (const auto& s : into)
            if (s.name == name)
                line.fail(col, "symbol '" + name + "' declared twice", errc::duplicate_symbol);
        into.push_back({name, std::stoul(arity)});
    }
}

struct RawTerm {
    std::string head;
    std::size_t head_column = 0;
    bool applied = false;  // written with parentheses
    std::vector<std::pair<std::string, std::size_t>> args;  // name, column
};

inline RawTerm parse_raw_term(Line& line)
{
    RawTerm t;
    t.head_column = line.column();
    t.head = line.expect(Token::Kind::ident, "a term").text;
    if (!line.accept(Token::Kind::lparen))
        return t;
    t.applied = true;
    if (line.accept(Token::Kind::rparen))
        return t;
    do {
        auto col = line.column();
        t.args.emplace_back(line.expect(Token::Kind::ident, "an argument name").text, col);
    } while (line.accept(Token::Kind::comma));
    line.expect(Token::Kind::rparen, "')'");
    return t;
}

inline void check_arity(const Line& line, const Signature& sig, const RawTerm& t)
{
    auto s = sig.index_of(t.head);
    if (!s)
        line.fail(t.head_column, "undeclared symbol '" + t.head + "'", errc::undeclared_name);
    if (sig[*s].arity != t.args.size())
        line.fail(t.head_column,
                  t.head + " expects " + std::to_string(sig[*s].arity) + " arguments, got " +
                      std::to_string(t.args.size()),
                  errc::arity_mismatch);
}

inline Signature finish_signature(std::vector<Symbol> symbols)
{
    Signature sig(std::move(symbols));
    validate_signature(sig);
    return sig;
}

} // namespace detail

struct CeqFile {
    EquationSystem system;
    std::string root;  // the `root` line, else the first variable
};

inline CeqFile parse_ceq(std::string_view text)
{
    using detail::Token;
    auto lines = detail::lex(text);
    std::vector<Symbol> symbols;
    std::vector<std::pair<std::string, std::size_t>> params;
    struct RawEq {
        std::size_t line;
        std::string var;
        std::size_t var_column;
        detail::RawTerm rhs;
    };
    std::vector<RawEq> raw;
    std::optional<std::pair<std::string, std::size_t>> root;
    std::size_t root_line = 0;

    for (std::size_t li = 0; li < lines.size(); ++li) {
        auto& line = lines[li];
        auto kw_col = line.column();
        auto kw = line.expect(Token::Kind::ident, "a keyword").text;
        if (kw == "signature") {
            detail::parse_signature_items(line, symbols);
        } else if (kw == "params") {
            while (!line.done()) {
                auto col = line.column();
                auto name = line.expect(Token::Kind::ident, "parameter name").text;
                if (is_reserved_name(name))
                    line.fail(col, "parameter name '" + name + "' is reserved", errc::reserved_parameter);
                params.emplace_back(name, col);
            }
        } else if (kw == "eq") {
            RawEq eq{li, {}, line.column(), {}};
            eq.var = line.expect(Token::Kind::ident, "variable name").text;
            if (is_reserved_name(eq.var))
                line.fail(eq.var_column, "name '" + eq.var + "' is reserved", errc::reserved_parameter);
            line.expect(Token::Kind::equals, "'='");
            eq.rhs = detail::parse_raw_term(line);
            line.expect_end();
            raw.push_back(std::move(eq));
        } else if (kw == "root") {
            auto col = line.column();
            root = {line.expect(Token::Kind::ident, "variable name").text, col};
            root_line = li;
            line.expect_end();
        } else {
            line.fail(kw_col, "unknown keyword '" + kw + "'");
        }
    }
    if (raw.empty())
        throw error(errc::parse_error, "line 1, column 1: no equations");
    if (symbols.empty())
        throw error(errc::empty_signature, "no signature declared");
    auto sig = detail::finish_signature(std::move(symbols));

    std::set<std::string> vars;
    for (const auto& eq : raw)
        vars.insert(eq.var);
    std::set<std::string> param_names;
    for (const auto& [p, col] : params)
        param_names.insert(p);

    std::vector<std::pair<std::string, Rhs>> eqs;
    for (const auto& eq : raw) {
        auto& line = lines[eq.line];
        const auto& t = eq.rhs;
        if (!t.applied) {
            if (param_names.contains(t.head)) {
                eqs.emplace_back(eq.var, ParamRef{t.head});
                continue;
            }
            if (is_reserved_name(t.head))
                line.fail(t.head_column, "'" + t.head + "' is reserved", errc::reserved_parameter);
            if (vars.contains(t.head))
                line.fail(t.head_column, "right-hand side must be a flat term or a parameter, not a variable");
            if (sig.index_of(t.head))
                line.fail(t.head_column, "write the constant as " + t.head + "()", errc::parse_error);
            line.fail(t.head_column, "undeclared parameter '" + t.head + "'", errc::undeclared_name);
        }
        detail::check_arity(line, sig, t);
        FlatTerm ft{t.head, {}};
        for (const auto& [name, col] : t.args) {
            if (vars.contains(name))
                ft.args.push_back(Atom::var(name));
            else if (param_names.contains(name))
                ft.args.push_back(Atom::param(name));
            else if (is_reserved_name(name))
                line.fail(col, "'" + name + "' is reserved", errc::reserved_parameter);
            else
                line.fail(col, "undeclared name '" + name + "'", errc::undeclared_name);
        }
        eqs.emplace_back(eq.var, std::move(ft));
    }

    std::vector<std::string> plist;
    for (const auto& [p, col] : params)
        plist.push_back(p);
    CeqFile out{EquationSystem(sig, std::move(plist), std::move(eqs)), raw.front().var};
    if (root) {
        if (!vars.contains(root->first))
            lines[root_line].fail(root->second, "root '" + root->first + "' is not a variable", errc::undeclared_name);
        out.root = root->first;
    }
    return out;
}

inline Presentation parse_pres(std::string_view text)
{
    using detail::Token;
    auto lines = detail::lex(text);
    std::vector<Symbol> symbols;
    std::vector<std::pair<std::size_t, std::pair<detail::RawTerm, detail::RawTerm>>> raw;
    for (std::size_t li = 0; li < lines.size(); ++li) {
        auto& line = lines[li];
        auto kw_col = line.column();
        auto kw = line.expect(Token::Kind::ident, "a keyword").text;
        if (kw == "signature") {
            detail::parse_signature_items(line, symbols);
        } else if (kw == "axiom") {
            auto lhs = detail::parse_raw_term(line);
            line.expect(Token::Kind::equals, "'='");
            auto rhs = detail::parse_raw_term(line);
            line.expect_end();
            raw.push_back({li, {std::move(lhs), std::move(rhs)}});
        } else {
            line.fail(kw_col, "unknown keyword '" + kw + "'");
        }
    }
    if (symbols.empty())
        throw error(errc::empty_signature, "no signature declared");
    auto sig = detail::finish_signature(std::move(symbols));
    std::vector<Axiom> axioms;
    for (const auto& [li, sides] : raw) {
        Axiom a;
        for (auto [raw_term, out] : {std::pair{&sides.first, &a.lhs}, std::pair{&sides.second, &a.rhs}}) {
            if (!raw_term->applied && !sig.index_of(raw_term->head))
                lines[li].fail(raw_term->head_column, "axiom sides must be flat terms");
            detail::check_arity(lines[li], sig, *raw_term);
            out->head = raw_term->head;
            for (const auto& [name, col] : raw_term->args)
                out->args.push_back(Atom::var(name));
        }
        axioms.push_back(std::move(a));
    }
    return {std::move(sig), std::move(axioms)};
}

inline FiniteAlgebra parse_falg(std::string_view text)
{
    using detail::Token;
    auto lines = detail::lex(text);
    std::vector<Symbol> symbols;
    std::optional<std::vector<std::string>> carrier;
    struct Row {
        std::size_t line;
        std::string symbol;
        std::size_t symbol_column;
        std::vector<std::pair<std::string, std::size_t>> args;
        std::pair<std::string, std::size_t> value;
    };
    std::vector<Row> rows;
    for (std::size_t li = 0; li < lines.size(); ++li) {
        auto& line = lines[li];
        auto kw_col = line.column();
        auto kw = line.expect(Token::Kind::ident, "a keyword").text;
        if (kw == "signature") {
            detail::parse_signature_items(line, symbols);
        } else if (kw == "carrier") {
            if (carrier)
                line.fail(kw_col, "carrier declared twice");
            carrier.emplace();
            while (!line.done()) {
                auto col = line.column();
                auto name = line.expect(Token::Kind::ident, "carrier element").text;
                if (is_reserved_name(name))
                    line.fail(col, "'" + name + "' is reserved", errc::reserved_parameter);
                if (std::find(carrier->begin(), carrier->end(), name) != carrier->end())
                    line.fail(col, "element '" + name + "' listed twice");
                carrier->push_back(name);
            }
        } else if (kw == "table") {
            Row r{li, {}, line.column(), {}, {}};
            r.symbol = line.expect(Token::Kind::ident, "symbol name").text;
            line.expect(Token::Kind::colon, "':'");
            while (line.peek().kind == Token::Kind::ident) {
                auto col = line.column();
                r.args.emplace_back(line.expect(Token::Kind::ident, "element").text, col);
            }
            line.expect(Token::Kind::arrow, "'->'");
            auto col = line.column();
            r.value = {line.expect(Token::Kind::ident, "result element").text, col};
            line.expect_end();
            rows.push_back(std::move(r));
        } else {
            line.fail(kw_col, "unknown keyword '" + kw + "'");
        }
    }
    if (symbols.empty())
        throw error(errc::empty_signature, "no signature declared");
    if (!carrier)
        throw error(errc::parse_error, "no carrier declared");
    auto sig = detail::finish_signature(std::move(symbols));
    const auto n = carrier->size();
    auto element = [&](const detail::Line& line, const std::pair<std::string, std::size_t>& e) {
        auto it = std::find(carrier->begin(), carrier->end(), e.first);
        if (it == carrier->end())
            line.fail(e.second, "'" + e.first + "' is not a carrier element", errc::undeclared_name);
        return static_cast<std::size_t>(it - carrier->begin());
    };

    std::vector<std::vector<std::optional<std::size_t>>> tables(sig.size());
    for (std::size_t s = 0; s < sig.size(); ++s)
        tables[s].resize(saturating_pow(n, sig[s].arity));
    for (const auto& r : rows) {
        const auto& line = lines[r.line];
        auto s = sig.index_of(r.symbol);
        if (!s)
            line.fail(r.symbol_column, "undeclared symbol '" + r.symbol + "'", errc::undeclared_name);
        if (r.args.size() != sig[*s].arity)
            line.fail(r.symbol_column, r.symbol + " expects " + std::to_string(sig[*s].arity) + " arguments",
                      errc::arity_mismatch);
        std::size_t row = 0;
        for (const auto& a : r.args)
            row = row * n + element(line, a);
        auto v = element(line, r.value);
        if (tables[*s][row] && *tables[*s][row] != v)
            line.fail(r.symbol_column, "conflicting rows for " + r.symbol);
        tables[*s][row] = v;
    }
    std::vector<std::vector<std::size_t>> complete(sig.size());
    for (std::size_t s = 0; s < sig.size(); ++s)
        for (std::size_t row = 0; row < tables[s].size(); ++row) {
            if (!tables[s][row]) {
                std::string args;
                std::size_t rest = row;
                std::vector<std::string> parts(sig[s].arity);
                for (std::size_t i = sig[s].arity; i > 0; --i) {
                    parts[i - 1] = (*carrier)[rest % n];
                    rest /= n;
                }
                for (const auto& p : parts)
                    args += " " + p;
                throw error(errc::incomplete_table, "no row 'table " + sig[s].name + ":" + args + " -> ...'");
            }
            complete[s].push_back(*tables[s][row]);
        }
    return {std::move(sig), std::move(*carrier), std::move(complete)};
}

/// "alpha:3 a:1"
inline Signature parse_signature(std::string_view text)
{
    detail::Line line(text, 1);
    std::vector<Symbol> symbols;
    detail::parse_signature_items(line, symbols);
    return detail::finish_signature(std::move(symbols));
}

// ---------------------------------------------------------------------------
// Emitters

/// Closed mu-term; a binder `mu sN.` is introduced exactly where state N is
/// revisited below itself.
inline std::string to_mu_term(const RationalTree& t)
{
    std::vector<std::size_t> stack;
    std::vector<bool> referenced(t.size(), false);
    auto render = [&](auto&& self, std::size_t s) -> std::string {
        const auto& st = t.state(s);
        if (st.leaf)
            return st.param;
        if (std::find(stack.begin(), stack.end(), s) != stack.end()) {
            referenced[s] = true;
            return "s" + std::to_string(s);
        }
        stack.push_back(s);
        std::string body = t.label(s);
        if (!st.children.empty()) {
            body += '(';
            for (std::size_t i = 0; i < st.children.size(); ++i) {
                if (i)
                    body += ", ";
                body += self(self, st.children[i]);
            }
            body += ')';
        }
        stack.pop_back();
        if (referenced[s]) {
            referenced[s] = false;
            return "mu s" + std::to_string(s) + ". " + body;
        }
        return body;
    };
    return render(render, RationalTree::root());
}

inline std::string emit_solution_text(const EquationSystem& e, const Solution& sol)
{
    std::string out;
    for (const auto& x : e.variables())
        out += x + " = " + to_mu_term(sol.at(x)) + "\n";
    return out;
}

inline std::string to_string(const DecomposedValue& v)
{
    if (const auto* inf = std::get_if<InfinitePart>(&v))
        return "stream " + to_string(inf->stream);
    const auto& fin = std::get<FinitePart>(v);
    std::string word;
    for (std::size_t i = 0; i < fin.word.size(); ++i)
        word += (i ? " " : "") + fin.word[i];
    return "finite word \"" + word + "\" leaf " + fin.leaf;
}

inline std::string emit_decomposition_text(const EquationSystem& e, const DecomposedSolution& d)
{
    std::string out;
    for (const auto& x : e.variables())
        if (auto it = d.find(x); it != d.end())
            out += x + " : " + to_string(it->second) + "\n";
    return out;
}

inline std::string emit_classification_text(const Classification& c)
{
    std::string out;
    auto join = [](const std::vector<std::string>& v) {
        std::string s;
        for (const auto& x : v)
            s += " " + x;
        return s;
    };
    for (std::size_t n = 0; n < c.layers.size(); ++n)
        out += "layer " + std::to_string(n + 1) + ":" + join(c.layers[n]) + "\n";
    out += "infinite:" + join(c.infinite_part) + "\n";
    return out;
}

inline std::string dot_escape(std::string_view s)
{
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out;
}

/// State graph of every tree as one cluster per name.
inline std::string emit_dot(const std::vector<std::pair<std::string, RationalTree>>& trees)
{
    std::ostringstream out;
    out << "digraph corec {\n  node [fontname=\"monospace\"];\n";
    for (std::size_t k = 0; k < trees.size(); ++k) {
        const auto& [name, t] = trees[k];
        out << "  subgraph cluster_" << k << " {\n    label=\"" << dot_escape(name) << "\";\n";
        for (std::size_t s = 0; s < t.size(); ++s) {
            const auto& st = t.state(s);
            out << "    t" << k << "_s" << s << " [label=\"" << dot_escape(t.label(s)) << "\""
                << (st.leaf ? ", shape=box" : ", shape=ellipse") << (s == 0 ? ", penwidth=2" : "") << "];\n";
        }
        for (std::size_t s = 0; s < t.size(); ++s) {
            const auto& ch = t.state(s).children;
            for (std::size_t i = 0; i < ch.size(); ++i) {
                out << "    t" << k << "_s" << s << " -> t" << k << "_s" << ch[i];
                if (ch.size() > 1)
                    out << " [label=\"" << i + 1 << "\"]";
                out << ";\n";
            }
        }
        out << "  }\n";
    }
    out << "}\n";
    return out.str();
}

inline nlohmann::json signature_json(const Signature& sig)
{
    auto arr = nlohmann::json::array();
    for (const auto& s : sig.symbols())
        arr.push_back({{"name", s.name}, {"arity", s.arity}});
    return arr;
}

inline nlohmann::json tree_json(const RationalTree& t)
{
    auto states = nlohmann::json::array();
    for (std::size_t s = 0; s < t.size(); ++s) {
        const auto& st = t.state(s);
        if (st.leaf)
            states.push_back({{"param", st.param}});
        else
            states.push_back({{"symbol", t.label(s)}, {"children", st.children}});
    }
    return states;
}

inline nlohmann::json solution_json(const EquationSystem& e, const Solution& sol)
{
    auto vars = nlohmann::json::array();
    for (const auto& x : e.variables())
        vars.push_back({{"name", x}, {"kind", "tree"}, {"root", 0}, {"states", tree_json(sol.at(x))}});
    return {{"signature", signature_json(e.signature())}, {"variables", vars}};
}

inline nlohmann::json decomposition_json(const EquationSystem& e, const DecomposedSolution& d)
{
    auto vars = nlohmann::json::array();
    for (const auto& x : e.variables()) {
        auto it = d.find(x);
        if (it == d.end())
            continue;
        if (const auto* fin = std::get_if<FinitePart>(&it->second))
            vars.push_back({{"name", x}, {"kind", "finite"}, {"word", fin->word}, {"leaf", fin->leaf}});
        else {
            const auto& w = std::get<InfinitePart>(it->second).stream;
            vars.push_back({{"name", x},
                            {"kind", "stream"},
                            {"lasso", {{"prefix", w.prefix()}, {"period", w.period()}}}});
        }
    }
    return {{"signature", signature_json(e.signature())}, {"variables", vars}};
}

inline Signature signature_from_json(const nlohmann::json& j)
{
    std::vector<Symbol> symbols;
    for (const auto& s : j)
        symbols.push_back({s.at("name").get<std::string>(), s.at("arity").get<std::size_t>()});
    return detail::finish_signature(std::move(symbols));
}

/// Reads back the output of solution_json or decomposition_json.
inline Solution parse_solution_json(std::string_view text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& ex) {
        throw error(errc::parse_error, ex.what());
    }
    try {
        auto sig = signature_from_json(j.at("signature"));
        Solution out;
        for (const auto& v : j.at("variables")) {
            auto name = v.at("name").get<std::string>();
            auto kind = v.at("kind").get<std::string>();
            if (kind == "tree") {
                std::vector<State> states;
                for (const auto& s : v.at("states")) {
                    if (s.contains("param"))
                        states.push_back(State::param_leaf(s.at("param").get<std::string>()));
                    else
                        states.push_back(State::op(sig.require(s.at("symbol").get<std::string>()),
                                                   s.at("children").get<std::vector<std::size_t>>()));
                }
                out.emplace(name, RationalTree{sig, std::move(states), v.value("root", std::size_t{0})});
            } else if (kind == "finite") {
                out.emplace(name, to_tree(FinitePart{v.at("word").get<std::vector<std::string>>(),
                                                     v.at("leaf").get<std::string>()},
                                          sig));
            } else if (kind == "stream") {
                const auto& l = v.at("lasso");
                out.emplace(name, to_tree(InfinitePart{Lasso(l.at("prefix").get<std::vector<std::string>>(),
                                                             l.at("period").get<std::vector<std::string>>())},
                                          sig));
            } else {
                throw error(errc::parse_error, "unknown variable kind '" + kind + "'");
            }
        }
        return out;
    } catch (const nlohmann::json::exception& ex) {
        throw error(errc::parse_error, ex.what());
    }
}

/// A rational tree written back as an equation system, one variable per state.
inline std::string emit_ceq(const RationalTree& t)
{
    std::string out = "signature";
    for (const auto& s : t.signature().symbols())
        out += " " + s.name + ":" + std::to_string(s.arity);
    out += "\n";
    auto params = t.parameters();
    if (!params.empty()) {
        out += "params";
        for (const auto& p : params)
            out += " " + p;
        out += "\n";
    }
    for (std::size_t s = 0; s < t.size(); ++s) {
        const auto& st = t.state(s);
        out += "eq s" + std::to_string(s) + " = ";
        if (st.leaf) {
            out += st.param + "\n";
            continue;
        }
        out += t.label(s) + "(";
        for (std::size_t i = 0; i < st.children.size(); ++i) {
            if (i)
                out += ", ";
            const auto& c = t.state(st.children[i]);
            // leaves are referenced by parameter name; their own equation is unused
            out += c.leaf ? c.param : "s" + std::to_string(st.children[i]);
        }
        out += ")\n";
    }
    return out + "root s0\n";
}

inline std::string emit_pres(const Presentation& p)
{
    std::string out = "signature";
    for (const auto& s : p.signature().symbols())
        out += " " + s.name + ":" + std::to_string(s.arity);
    out += "\n";
    for (const auto& a : p.axioms())
        out += "axiom " + to_string(a) + "\n";
    return out;
}

inline std::string to_string(const Verdict3& v)
{
    std::string out(corec::to_string(v.outcome));
    if (const auto* m = std::get_if<ModelWitness>(&v.witness)) {
        out += " (model " + std::to_string(m->model) + " separates:";
        for (const auto& [leaf, value] : m->assignment)
            out += " " + leaf + "=" + std::to_string(value);
        out += ")";
    } else if (const auto* c = std::get_if<ClosureWitness>(&v.witness)) {
        out += " (saturated, " + std::to_string(c->classes) + " classes)";
    }
    if (v.level)
        out += " at level " + std::to_string(v.level);
    if (!v.reason.empty())
        out += ": " + v.reason;
    return out;
}

inline nlohmann::json verdict_json(const Verdict3& v)
{
    nlohmann::json j{{"verdict", std::string(corec::to_string(v.outcome))}, {"level", v.level}, {"work", v.work}};
    if (!v.reason.empty())
        j["reason"] = v.reason;
    if (const auto* m = std::get_if<ModelWitness>(&v.witness))
        j["model_witness"] = {{"model", m->model}, {"assignment", m->assignment}, {"values", {m->lhs_value, m->rhs_value}}};
    else if (const auto* c = std::get_if<ClosureWitness>(&v.witness))
        j["closure_witness"] = {{"classes", c->classes}};
    return j;
}

inline std::string emit_system(const EquationSystem& e)
{
    std::string out;
    for (const auto& [x, r] : e.equations())
        out += "eq " + x + " = " + corec::to_string(r) + "\n";
    return out;
}

inline nlohmann::json check_json(const CheckVerdict& v)
{
    nlohmann::json j{{"verdict", v.holds ? "holds" : "fails"},
                     {"max_vars", v.max_vars},
                     {"exhaustive", v.exhaustive},
                     {"systems_checked", v.systems_checked}};
    if (v.witness) {
        j["witness"] = emit_system(*v.witness);
        j["solution_count"] = v.solution_count;
    }
    return j;
}

} // namespace corec::io
