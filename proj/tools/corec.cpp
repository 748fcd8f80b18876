#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "corec/corec.hpp"

namespace {

enum exit_code : int { ok = 0, verdict_failed = 1, input_error = 2, budget_exceeded = 3 };

enum class Format { text, dot, json };

struct RunConfig {
    std::size_t depth = 16;
    std::uint64_t budget = corec::Budget::default_limit;
    Format format = Format::text;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw corec::error(corec::errc::parse_error, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string located(const std::string& path, const corec::error& e) { return path + ": " + e.detail(); }

template <class F>
auto with_path(const std::string& path, F&& f)
{
    try {
        return f(read_file(path));
    } catch (const corec::error& e) {
        throw corec::error(e.code(), located(path, e));
    }
}

void print(const nlohmann::json& j) { std::cout << j.dump(2) << "\n"; }

int run_solve(const RunConfig& cfg, const std::string& path)
{
    auto file = with_path(path, corec::io::parse_ceq);
    const auto& e = file.system;
    auto sol = corec::solve(e);
    switch (cfg.format) {
    case Format::text:
        std::cout << corec::io::emit_solution_text(e, sol);
        break;
    case Format::dot: {
        std::vector<std::pair<std::string, corec::RationalTree>> trees;
        for (const auto& x : e.variables())
            trees.emplace_back(x, sol.at(x));
        std::cout << corec::io::emit_dot(trees);
        break;
    }
    case Format::json:
        print(corec::io::solution_json(e, sol));
        break;
    }
    return ok;
}

int run_classify(const RunConfig& cfg, const std::string& path)
{
    auto file = with_path(path, corec::io::parse_ceq);
    auto c = corec::classify(file.system);
    if (cfg.format == Format::json)
        print({{"layers", c.layers}, {"infinite", c.infinite_part}});
    else
        std::cout << corec::io::emit_classification_text(c);
    return ok;
}

int run_decompose(const RunConfig& cfg, const std::string& path)
{
    auto file = with_path(path, corec::io::parse_ceq);
    const auto& e = file.system;
    auto form = corec::to_unary_form(e);
    auto d = corec::solve_decomposed(form.system);
    std::erase_if(d, [&](const auto& kv) { return !e.has_variable(kv.first); });
    switch (cfg.format) {
    case Format::text:
        std::cout << corec::io::emit_decomposition_text(e, d);
        break;
    case Format::json:
        print(corec::io::decomposition_json(e, d));
        break;
    case Format::dot: {
        std::vector<std::pair<std::string, corec::RationalTree>> trees;
        for (const auto& x : e.variables())
            trees.emplace_back(x, corec::to_tree(d.at(x), form.system.signature()));
        std::cout << corec::io::emit_dot(trees);
        break;
    }
    }
    return ok;
}

int run_check(const RunConfig& cfg, bool cia, const std::string& alg_path, std::size_t max_vars)
{
    auto a = with_path(alg_path, corec::io::parse_falg);
    corec::Budget budget{cfg.budget};
    auto v = cia ? corec::is_cia(a, max_vars, budget) : corec::is_corecursive(a, max_vars, budget);
    if (cfg.format == Format::json) {
        auto j = corec::io::check_json(v);
        j["property"] = cia ? "cia" : "corecursive";
        print(j);
    } else {
        std::cout << (cia ? "cia" : "corecursive") << ": " << (v.holds ? "holds" : "fails") << " (systems with up to "
                  << v.max_vars << " variables, " << v.systems_checked << " checked)\n";
        if (v.witness)
            std::cout << "witness with " << v.solution_count << " solutions:\n" << corec::io::emit_system(*v.witness);
    }
    return v.holds ? ok : verdict_failed;
}

int run_reduce(const RunConfig& cfg, const std::string& path)
{
    auto p = with_path(path, corec::io::parse_pres);
    auto r = corec::reduce(p, corec::Budget{cfg.budget});
    if (cfg.format == Format::json) {
        nlohmann::json tr = nlohmann::json::object();
        for (const auto& [name, t] : r.translation)
            tr[name] = {{"target", t.target}, {"coordinates", t.coords}};
        nlohmann::json axioms = nlohmann::json::array();
        for (const auto& a : r.presentation.axioms())
            axioms.push_back(corec::to_string(a));
        print({{"signature", corec::io::signature_json(r.presentation.signature())},
               {"axioms", axioms},
               {"translation", tr}});
    } else {
        std::cout << corec::io::emit_pres(r.presentation);
        for (const auto& [name, t] : r.translation) {
            std::cout << "# " << name << " -> " << t.target << " keeping";
            for (auto c : t.coords)
                std::cout << " " << c + 1;
            std::cout << "\n";
        }
    }
    return ok;
}

int run_witness(const RunConfig& cfg, const std::string& sig_text)
{
    corec::Signature sig = corec::io::parse_signature(sig_text);
    auto r = corec::witness_non_cia(sig, cfg.depth, std::nullopt, corec::Budget{cfg.budget});
    const bool infinite = r.leaves.infinite;
    if (cfg.format == Format::json) {
        print({{"symbol", r.symbol},
               {"system", corec::io::emit_system(r.system)},
               {"solution", corec::io::tree_json(r.solution)},
               {"infinite_leaves", infinite},
               {"depth", r.depth},
               {"levels_with_leaf", r.levels_with_leaf},
               {"leaf_at_every_level", r.leaf_at_every_level()}});
    } else if (cfg.format == Format::dot) {
        std::cout << corec::io::emit_dot({{"x1", r.solution}});
    } else {
        std::cout << corec::io::emit_system(r.system) << "x1 = " << corec::io::to_mu_term(r.solution) << "\n"
                  << "parameter leaves: " << (infinite ? "infinite" : std::to_string(r.leaves.count)) << "\n"
                  << "y2 leaf at every level 1.." << r.depth << ": " << (r.leaf_at_every_level() ? "yes" : "no")
                  << "\n";
    }
    return infinite && r.leaf_at_every_level() ? ok : verdict_failed;
}

corec::RationalTree root_tree(const std::string& path)
{
    auto file = with_path(path, corec::io::parse_ceq);
    return corec::solve(file.system).at(file.root);
}

int run_equal(const RunConfig& cfg, const std::string& f1, const std::string& f2, const std::string& pres)
{
    auto t = root_tree(f1);
    auto u = root_tree(f2);
    corec::Verdict3 v;
    if (pres.empty()) {
        v.outcome = corec::bisim_equal(t, u) ? corec::Outcome::equal : corec::Outcome::distinct;
    } else {
        auto p = with_path(pres, corec::io::parse_pres);
        v = corec::rtree_equiv_upto(p, t, u, cfg.depth, cfg.budget, {}, corec::Budget{cfg.budget});
    }
    if (cfg.format == Format::json)
        print(corec::io::verdict_json(v));
    else
        std::cout << corec::io::to_string(v) << "\n";
    switch (v.outcome) {
    case corec::Outcome::equal:
        return ok;
    case corec::Outcome::distinct:
        return verdict_failed;
    default:
        return budget_exceeded;
    }
}

int run_quotient(const RunConfig& cfg, const std::string& path, std::size_t atoms)
{
    auto p = with_path(path, corec::io::parse_pres);
    auto classes = corec::hx_quotient(p, corec::probe_atoms(atoms), corec::Budget{cfg.budget});
    if (cfg.format == Format::json) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& c : classes) {
            nlohmann::json members = nlohmann::json::array();
            for (const auto& t : c)
                members.push_back(corec::to_string(t));
            j.push_back(members);
        }
        print({{"atoms", atoms}, {"class_count", classes.size()}, {"classes", j}});
    } else {
        std::cout << classes.size() << " classes\n";
        for (const auto& c : classes) {
            for (std::size_t i = 0; i < c.size(); ++i)
                std::cout << (i ? " = " : "") << corec::to_string(c[i]);
            std::cout << "\n";
        }
    }
    return ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"corec: rational trees, flat equation systems and completely iterative algebras"};
    app.require_subcommand(1);

    RunConfig cfg;
    if (const char* env = std::getenv("COREC_BUDGET")) {
        try {
            cfg.budget = std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "error: COREC_BUDGET must be a positive integer\n";
            return input_error;
        }
    }
    std::string format = "text";
    std::string file, file2, pres, alg;
    std::size_t max_vars = 0, atoms = 0;
    bool corecursive = false, cia = false;

    auto* solve = app.add_subcommand("solve", "Solve a flat system; print each variable's rational tree");
    solve->add_option("FILE", file, ".ceq file")->required();
    auto* classify = app.add_subcommand("classify", "Split the variables of a unary system into layers");
    classify->add_option("FILE", file, ".ceq file")->required();
    auto* decompose = app.add_subcommand("decompose", "Solve a unary system as finite words and streams");
    decompose->add_option("FILE", file, ".ceq file")->required();
    auto* check = app.add_subcommand("check", "Brute-force corecursiveness or complete iterativity");
    auto* flag = check->add_flag("--corecursive", corecursive, "Systems without parameters");
    check->add_flag("--cia", cia, "Systems with parameters")->excludes(flag);
    check->add_option("ALG", alg, ".falg file")->required();
    check->add_option("SIGBOUNDS", max_vars, "Largest number of variables")->required();
    auto* reduce = app.add_subcommand("reduce", "Compute a reduced presentation");
    reduce->add_option("PRES", file, ".pres file")->required();
    auto* witness = app.add_subcommand("witness", "Build a system with infinitely many parameter leaves");
    witness->add_option("SIG", file, "signature, e.g. \"alpha:2 a:1\"")->required();
    auto* equal = app.add_subcommand("equal", "Compare the root solutions of two systems");
    equal->add_option("FILE1", file, ".ceq file")->required();
    equal->add_option("FILE2", file2, ".ceq file")->required();
    equal->add_option("--pres", pres, "Compare up to the axioms of a presentation");
    auto* quotient = app.add_subcommand("quotient", "List the kernel classes of flat terms");
    quotient->add_option("PRES", file, ".pres file")->required();
    quotient->add_option("--atoms", atoms, "Number of atoms")->required();

    for (auto* sub : {solve, classify, decompose, check, reduce, witness, equal, quotient}) {
        sub->add_option("-k,--depth", cfg.depth, "Cut depth")->check(CLI::PositiveNumber)->capture_default_str();
        sub->add_option("--budget", cfg.budget, "Work budget (env COREC_BUDGET)")->check(CLI::PositiveNumber)->capture_default_str();
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "dot", "json"}))->capture_default_str();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? ok : input_error;
    }
    cfg.format = format == "dot" ? Format::dot : format == "json" ? Format::json : Format::text;
    if (check->parsed() && !corecursive && !cia) {
        std::cerr << "error: check needs --corecursive or --cia\n";
        return input_error;
    }

    try {
        if (solve->parsed())
            return run_solve(cfg, file);
        if (classify->parsed())
            return run_classify(cfg, file);
        if (decompose->parsed())
            return run_decompose(cfg, file);
        if (check->parsed())
            return run_check(cfg, cia, alg, max_vars);
        if (reduce->parsed())
            return run_reduce(cfg, file);
        if (witness->parsed())
            return run_witness(cfg, file);
        if (equal->parsed())
            return run_equal(cfg, file, file2, pres);
        if (quotient->parsed())
            return run_quotient(cfg, file, atoms);
    } catch (const corec::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == corec::errc::size_limit_exceeded ? budget_exceeded : input_error;
    }
    return input_error;
}
