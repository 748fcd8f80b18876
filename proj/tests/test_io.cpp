#include <gtest/gtest.h>

#include "support/oracles.hpp"

using namespace corec;

namespace {

const char* example = R"(# x1 = sigma(x1, x2), x2 = y
signature sigma:2
params y
eq x1 = sigma(x1, x2)
eq x2 = y
root x1
)";

const char* semilattice_falg = R"(signature u:2 s:1
carrier 0 1
table u: 0 0 -> 0
table u: 0 1 -> 1
table u: 1 0 -> 1
table u: 1 1 -> 1
table s: 0 -> 0
table s: 1 -> 1
)";

const char* semilattice_pres = R"(signature u:2 s:1
axiom u(p, q) = u(q, p)
axiom u(p, p) = s(p)
)";

error error_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const error& e) {
        return e;
    }
    ADD_FAILURE() << "no error thrown";
    return error(errc::parse_error, "none");
}

} // namespace

TEST(ParseCeq, Example)
{
    auto f = io::parse_ceq(example);
    EXPECT_EQ(f.root, "x1");
    EXPECT_EQ(f.system.variables(), (std::vector<std::string>{"x1", "x2"}));
    EXPECT_EQ(f.system.parameters(), (std::vector<std::string>{"y"}));
    EXPECT_EQ(io::emit_system(f.system), "eq x1 = sigma(x1, x2)\neq x2 = y\n");
}

TEST(ParseCeq, ParametersAndConstantsInsideTerms)
{
    auto f = io::parse_ceq("signature f:2 c:0\nparams y\neq x = f(y, z)\neq z = c()\n");
    EXPECT_EQ(f.root, "x");
    const auto& t = std::get<FlatTerm>(f.system.rhs()[0]);
    EXPECT_TRUE(t.args[0].is_param());
    EXPECT_TRUE(t.args[1].is_var());
    EXPECT_EQ(std::get<FlatTerm>(f.system.rhs()[1]), (FlatTerm{"c", {}}));
}

TEST(ParseCeq, Errors)
{
    auto undeclared = error_of([] { (void)io::parse_ceq("signature sigma:2\neq x = f(x)\n"); });
    EXPECT_EQ(undeclared.code(), errc::undeclared_name);
    EXPECT_NE(std::string(undeclared.what()).find("line 2"), std::string::npos);

    EXPECT_EQ(error_of([] { (void)io::parse_ceq(""); }).code(), errc::parse_error);
    EXPECT_EQ(error_of([] { (void)io::parse_ceq("signature f:1\nparams _bot\neq x = f(x)\n"); }).code(),
              errc::reserved_parameter);
    EXPECT_EQ(error_of([] { (void)io::parse_ceq("signature f:1\nparams \xE2\x8A\xA5\neq x = f(x)\n"); }).code(),
              errc::reserved_parameter);
    EXPECT_EQ(error_of([] { (void)io::parse_ceq("signature f:2\neq x = f(x)\n"); }).code(), errc::arity_mismatch);
    EXPECT_EQ(error_of([] { (void)io::parse_ceq("signature f:1 f:2\neq x = f(x)\n"); }).code(),
              errc::duplicate_symbol);
    EXPECT_EQ(error_of([] { (void)io::parse_ceq("eq x = f(x)\n"); }).code(), errc::empty_signature);

    auto column = error_of([] { (void)io::parse_ceq("signature f:1\neq x = f(x\n"); });
    EXPECT_EQ(column.code(), errc::parse_error);
    EXPECT_NE(std::string(column.what()).find("line 2, column"), std::string::npos) << column.what();
}

TEST(ParsePres, Example)
{
    auto p = io::parse_pres(semilattice_pres);
    EXPECT_EQ(p.signature(), (Signature{{"u", 2}, {"s", 1}}));
    ASSERT_EQ(p.axioms().size(), 2u);
    EXPECT_EQ(io::parse_pres(io::emit_pres(p)), p);

    auto one = io::parse_pres("signature u:2\naxiom u(p, q) = u(q, p)\n");
    EXPECT_EQ(one.axioms().size(), 1u);
    EXPECT_EQ(error_of([] { (void)io::parse_pres("signature u:2\naxiom u(p) = u(p, p)\n"); }).code(),
              errc::arity_mismatch);
}

TEST(ParseFalg, Example)
{
    auto a = io::parse_falg(semilattice_falg);
    EXPECT_EQ(a.size(), 2u);
    EXPECT_EQ(a.apply(0, std::vector<std::size_t>{0, 1}), 1u);
    EXPECT_TRUE(satisfies_presentation(a, io::parse_pres(semilattice_pres)).holds);

    std::string missing = semilattice_falg;
    missing.erase(missing.find("table u: 1 1 -> 1\n"), 18);
    auto e = error_of([&] { (void)io::parse_falg(missing); });
    EXPECT_EQ(e.code(), errc::incomplete_table);
    EXPECT_NE(std::string(e.what()).find("u: 1 1"), std::string::npos) << e.what();

    EXPECT_EQ(error_of([] { (void)io::parse_falg("signature a:1\ncarrier 0\ntable a: 0 -> 1\n"); }).code(),
              errc::undeclared_name);
}

TEST(ParseSignature, Inline)
{
    EXPECT_EQ(io::parse_signature("alpha:3 a:1"), (Signature{{"alpha", 3}, {"a", 1}}));
    EXPECT_EQ(error_of([] { (void)io::parse_signature("alpha"); }).code(), errc::parse_error);
}

TEST(Emit, SolutionText)
{
    auto f = io::parse_ceq(example);
    EXPECT_EQ(io::emit_solution_text(f.system, solve(f.system)), "x1 = mu s0. sigma(s0, y)\nx2 = y\n");

    auto c = io::parse_ceq("signature f:2 c:0\neq x = f(z, z)\neq z = c()\n");
    EXPECT_EQ(io::emit_solution_text(c.system, solve(c.system)), "x = f(c, c)\nz = c\n");
}

TEST(Emit, Decomposition)
{
    auto f = io::parse_ceq("signature a:1 b:1\nparams y\neq x = a(x)\neq w = b(v)\neq v = a(u)\neq u = y\n");
    auto text = io::emit_decomposition_text(f.system, solve_decomposed(f.system));
    EXPECT_NE(text.find("x : stream (a)^w\n"), std::string::npos) << text;
    EXPECT_NE(text.find("w : finite word \"b a\" leaf y\n"), std::string::npos) << text;

    auto c = io::emit_classification_text(classify(f.system));
    EXPECT_NE(c.find("layer 1: u\n"), std::string::npos) << c;
    EXPECT_NE(c.find("infinite: x\n"), std::string::npos) << c;
}

TEST(Emit, Dot)
{
    auto f = io::parse_ceq(example);
    auto dot = io::emit_dot({{"x1", solve(f.system).at("x1")}});
    EXPECT_EQ(dot.rfind("digraph corec {", 0), 0u);
    EXPECT_NE(dot.find("t0_s0 -> t0_s0 [label=\"1\"]"), std::string::npos) << dot;
}

TEST(RoundTrip, SolutionJson)
{
    oracle::Rng rng(53);
    const Signature sig{{"u", 2}, {"s", 1}, {"e", 0}};
    for (int round = 0; round < 200; ++round) {
        auto e = oracle::random_system(rng, sig, oracle::pick(rng, 5) + 1, {"y1", "y2"}, 0.2, 0.2);
        auto sol = solve(e);
        auto back = io::parse_solution_json(io::solution_json(e, sol).dump());
        ASSERT_EQ(back.size(), sol.size());
        for (const auto& x : e.variables())
            ASSERT_TRUE(bisim_equal(back.at(x), sol.at(x))) << io::emit_system(e);
    }
}

TEST(RoundTrip, DecompositionJson)
{
    oracle::Rng rng(59);
    for (int round = 0; round < 200; ++round) {
        auto sig = oracle::unary_signature(oracle::pick(rng, 3) + 1);
        auto e = oracle::random_system(rng, sig, oracle::pick(rng, 6) + 1, {"y"}, 0.25);
        auto sol = solve(e);
        auto back = io::parse_solution_json(io::decomposition_json(e, solve_decomposed(e)).dump());
        for (const auto& x : e.variables())
            ASSERT_TRUE(bisim_equal(back.at(x), sol.at(x))) << io::emit_system(e);
    }
}

TEST(RoundTrip, CeqText)
{
    oracle::Rng rng(61);
    const Signature sig{{"u", 2}, {"s", 1}, {"e", 0}};
    for (int round = 0; round < 200; ++round) {
        auto t = oracle::random_tree(rng, sig, oracle::pick(rng, 8) + 1, {"y1", "y2"});
        auto f = io::parse_ceq(io::emit_ceq(t));
        ASSERT_TRUE(bisim_equal(solve(f.system).at(f.root), t)) << io::emit_ceq(t);
    }
}

TEST(RoundTrip, JsonErrorsAreParseErrors)
{
    EXPECT_EQ(error_of([] { (void)io::parse_solution_json("{"); }).code(), errc::parse_error);
    EXPECT_EQ(error_of([] { (void)io::parse_solution_json(R"({"signature": [{"name": "a", "arity": 1}]})"); }).code(),
              errc::parse_error);
    EXPECT_EQ(error_of([] { (void)io::parse_solution_json(R"({"signature": []})"); }).code(), errc::empty_signature);
}

TEST(Emit, Verdicts)
{
    Verdict3 v;
    v.outcome = Outcome::equal;
    v.level = 8;
    EXPECT_EQ(io::to_string(v), "equal at level 8");
    EXPECT_EQ(io::verdict_json(v).at("verdict"), "equal");
}
