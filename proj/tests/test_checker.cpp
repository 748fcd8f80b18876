#include <gtest/gtest.h>

#include "support/oracles.hpp"

using namespace corec;

namespace {

FlatTerm F(std::string head, std::initializer_list<const char*> vars)
{
    FlatTerm t{std::move(head), {}};
    for (const auto* v : vars)
        t.args.push_back(Atom::var(v));
    return t;
}

const Signature us{{"u", 2}, {"s", 1}};
const Signature a1{{"a", 1}};

Presentation commutative() { return {us, {{F("u", {"p", "q"}), F("u", {"q", "p"})}}}; }

Presentation semilattice()
{
    return {us, {{F("u", {"p", "q"}), F("u", {"q", "p"})}, {F("u", {"p", "p"}), F("s", {"p"})}}};
}

FiniteAlgebra unary(std::vector<std::size_t> table)
{
    std::vector<std::string> carrier;
    for (std::size_t i = 0; i < table.size(); ++i)
        carrier.push_back(std::to_string(i));
    return {a1, std::move(carrier), {std::move(table)}};
}

FiniteAlgebra identity() { return unary({0, 1}); }
FiniteAlgebra negation() { return unary({1, 0}); }

/// carrier {a, b}, each letter acts as the constant map onto itself
FiniteAlgebra chain()
{
    return {Signature{{"a", 1}, {"b", 1}}, {"a", "b"}, {{0, 0}, {1, 1}}};
}

FiniteAlgebra random_algebra(oracle::Rng& rng, const Signature& sig, std::size_t n)
{
    std::vector<std::string> carrier;
    for (std::size_t i = 0; i < n; ++i)
        carrier.push_back("c" + std::to_string(i));
    return FiniteAlgebra::from_function(sig, carrier,
                                        [&](std::size_t, std::span<const std::size_t>) { return oracle::pick(rng, n); });
}

errc code_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return errc::parse_error;
}

} // namespace

TEST(Satisfaction, Examples)
{
    auto join = FiniteAlgebra::from_function(us, {"0", "1"}, [](std::size_t sym, std::span<const std::size_t> x) {
        return sym == 1 ? x[0] : std::max(x[0], x[1]);
    });
    EXPECT_TRUE(satisfies_presentation(join, semilattice()).holds);

    auto left = FiniteAlgebra::from_function(us, {"0", "1"},
                                             [](std::size_t, std::span<const std::size_t> x) { return x[0]; });
    auto r = satisfies_presentation(left, commutative());
    EXPECT_FALSE(r.holds);
    ASSERT_EQ(r.axiom, 0u);
    EXPECT_NE(r.assignment.at("p"), r.assignment.at("q"));

    EXPECT_TRUE(satisfies_presentation(left, Presentation(us, {})).holds);
}

TEST(CountSolutions, Examples)
{
    EquationSystem loop(a1, {}, {{"x", F("a", {"x"})}});
    auto id = count_solutions(identity(), loop);
    EXPECT_EQ(id.count, 2u);
    EXPECT_EQ(id.solutions.size(), 2u);
    EXPECT_EQ(count_solutions(negation(), loop).count, 0u);

    EquationSystem constant(a1, {"p"}, {{"x", ParamRef{"p"}}});
    auto one = count_solutions(identity(), constant, Valuation{{"p", 0}});
    ASSERT_EQ(one.count, 1u);
    EXPECT_EQ(one.solutions[0].at("x"), 0u);
    EXPECT_EQ(code_of([&] { (void)count_solutions(identity(), constant, Valuation{}); }), errc::missing_assignment);
}

TEST(CountSolutions, AgreesWithEnumerationOracle)
{
    oracle::Rng rng(41);
    const Signature sig{{"u", 2}, {"s", 1}, {"e", 0}};
    for (int round = 0; round < 300; ++round) {
        auto n = oracle::pick(rng, 3) + 1;
        auto a = random_algebra(rng, sig, n);
        auto e = oracle::random_system(rng, sig, oracle::pick(rng, 4) + 1, {"y1", "y2"}, 0.2, 0.2);
        Valuation params{{"y1", oracle::pick(rng, n)}, {"y2", oracle::pick(rng, n)}};
        auto got = count_solutions(a, e, params);
        auto expected = oracle::brute_solutions(a, e, params);
        ASSERT_EQ(got.count, expected.size());
        EXPECT_EQ(std::set<Valuation>(got.solutions.begin(), got.solutions.end()), expected);
    }
}

TEST(CountSolutions, BudgetIsEnforced)
{
    oracle::Rng rng(1);
    auto e = oracle::random_system(rng, a1, 12, {});
    auto big = unary({0, 1, 2, 3, 0, 1, 2, 3});
    EXPECT_EQ(code_of([&] { (void)count_solutions(big, e, Budget{1000}); }), errc::size_limit_exceeded);
}

TEST(Corecursive, Examples)
{
    auto trivial = FiniteAlgebra::from_function(us, {"*"}, [](std::size_t, std::span<const std::size_t>) {
        return std::size_t{0};
    });
    EXPECT_TRUE(is_corecursive(trivial, 3).holds);
    EXPECT_TRUE(is_cia(trivial, 3).holds);

    auto id = is_corecursive(identity(), 3);
    EXPECT_FALSE(id.holds);
    ASSERT_TRUE(id.witness);
    EXPECT_EQ(id.solution_count, 2u);
    EXPECT_EQ(id.witness->size(), 1u);
    EXPECT_EQ(count_solutions(identity(), *id.witness).count, 2u);
    EXPECT_FALSE(is_cia(identity(), 3).holds);

    auto c = is_corecursive(chain(), 3);
    EXPECT_TRUE(c.holds);
    EXPECT_EQ(c.max_vars, 3u);
    EXPECT_TRUE(c.exhaustive);
    EXPECT_GT(c.systems_checked, 0u);
    EXPECT_TRUE(is_cia(chain(), 3).holds);
}

TEST(Corecursive, WitnessesReplayAndVerdictsAreMonotone)
{
    for (std::size_t n = 1; n <= 2; ++n)
        for (const auto& a : enumerate_algebras(oracle::unary_signature(2), n)) {
            for (bool cia : {false, true}) {
                auto check = [&](std::size_t b) { return cia ? is_cia(a, b) : is_corecursive(a, b); };
                bool failed = false;
                for (std::size_t b = 1; b <= 3; ++b) {
                    auto v = check(b);
                    if (failed) {
                        EXPECT_FALSE(v.holds);
                    }
                    if (!v.holds) {
                        failed = true;
                        ASSERT_TRUE(v.witness);
                        auto replay = count_solutions(a, *v.witness).count;
                        EXPECT_NE(replay, 1u);
                        EXPECT_EQ(replay, v.solution_count);
                    }
                }
            }
        }
}

TEST(Corecursive, UnaryCorecursiveAlgebrasAreCompletelyIterative)
{
    for (std::size_t w = 1; w <= 2; ++w)
        for (std::size_t n = 1; n <= 2; ++n)
            for (const auto& a : enumerate_algebras(oracle::unary_signature(w), n))
                if (is_corecursive(a, 2).holds) {
                    EXPECT_TRUE(is_cia(a, 2).holds);
                }
}

TEST(Corecursive, EnumerationCoversEveryTable)
{
    auto all = enumerate_algebras(us, 2);
    EXPECT_EQ(all.size(), 64u);  // 2^(4 + 2) tables
    EXPECT_TRUE(enumerate_algebras(us, 0).empty());
    EXPECT_EQ(code_of([] { (void)enumerate_algebras(us, 3, Budget{100}); }), errc::size_limit_exceeded);
}

TEST(Anchors, CorrespondenceExamples)
{
    EquationSystem loop(a1, {}, {{"x", F("a", {"x"})}});
    auto id = anchor_correspondence(identity(), loop);
    EXPECT_EQ(id.anchors, 2u);
    EXPECT_EQ(id.solutions, 2u);
    EXPECT_TRUE(id.bijection());

    auto neg = anchor_correspondence(negation(), loop);
    EXPECT_EQ(neg.anchors, 0u);
    EXPECT_EQ(neg.solutions, 0u);
    EXPECT_TRUE(neg.bijection());

    EquationSystem grounded(a1, {"p"}, {{"x", F("a", {"z"})}, {"z", ParamRef{"p"}}});
    auto g = anchor_correspondence(identity(), grounded, Valuation{{"p", 1}});
    EXPECT_EQ(g.anchors, 1u);
    EXPECT_EQ(g.solutions, 1u);
    EXPECT_TRUE(g.bijection());
}

TEST(Anchors, CorrespondenceOnRandomUnaryInstances)
{
    oracle::Rng rng(43);
    for (int round = 0; round < 300; ++round) {
        auto sig = oracle::unary_signature(oracle::pick(rng, 3) + 1);
        auto n = oracle::pick(rng, 3) + 1;
        auto a = random_algebra(rng, sig, n);
        auto e = oracle::random_system(rng, sig, oracle::pick(rng, 5) + 1, {"y"}, 0.25);
        auto r = anchor_correspondence(a, e, Valuation{{"y", oracle::pick(rng, n)}});
        ASSERT_TRUE(r.bijection()) << r.anchors << " anchors, " << r.solutions << " solutions";
    }
}

TEST(Witness, BinarySymbolGivesTheSpine)
{
    auto w = witness_non_cia(Signature{{"sigma", 2}}, 20);
    EXPECT_EQ(w.symbol, "sigma");
    Signature sig{{"sigma", 2}};
    RationalTree spine(sig, {State::op(0, {0, 1}), State::param_leaf("y2")}, 0);
    EXPECT_TRUE(bisim_equal(w.solution, spine));
    EXPECT_TRUE(w.leaves.infinite);
    EXPECT_FALSE(in_C(w.solution));
    EXPECT_TRUE(w.leaf_at_every_level());
}

TEST(Witness, TernarySymbol)
{
    auto w = witness_non_cia(Signature{{"a", 1}, {"alpha", 3}}, 20);
    EXPECT_EQ(w.symbol, "alpha");
    EXPECT_EQ(w.system.size(), 3u);
    EXPECT_EQ(w.system.parameters(), (std::vector<std::string>{"y2", "y3"}));
    EXPECT_TRUE(w.leaves.infinite);
    EXPECT_EQ(w.levels_with_leaf.size(), 20u);
    EXPECT_EQ(w.levels_with_leaf.front(), 1u);
    EXPECT_EQ(w.levels_with_leaf.back(), 20u);
}

TEST(Witness, Errors)
{
    EXPECT_EQ(code_of([] { (void)witness_non_cia(Signature{{"a", 1}, {"b", 1}}, 5); }), errc::no_large_arity_symbol);
    EXPECT_EQ(code_of([] { (void)witness_non_cia(Signature{{"a", 1}, {"u", 2}}, 5, "a"); }),
              errc::no_large_arity_symbol);
    EXPECT_EQ(code_of([] { (void)witness_non_cia(Signature{{"u", 2}}, 5, "v"); }), errc::undeclared_name);
}

TEST(Square, Examples)
{
    EquationSystem e(us, {"y1"}, {{"x", FlatTerm{"u", {Atom::var("x"), Atom::param("y1")}}}});
    EXPECT_EQ(square_check(Presentation(us, {}), e, 8).outcome, Outcome::equal);

    auto rewritten = rewrite_once(commutative(), e);
    EXPECT_EQ(std::get<FlatTerm>(rewritten.rhs()[0]), (FlatTerm{"u", {Atom::param("y1"), Atom::var("x")}}));
    EXPECT_EQ(square_check(commutative(), e, 8).outcome, Outcome::equal);

    auto d = compare_solutions(Presentation(us, {}), e, rewritten, 8);
    EXPECT_EQ(d.outcome, Outcome::distinct);
    EXPECT_EQ(code_of([&] {
                  (void)compare_solutions(commutative(), e, EquationSystem(us, {"y1"}, {{"z", ParamRef{"y1"}}}), 3);
              }),
              errc::invalid_system);
}

TEST(Square, CommutativityOnRandomSystems)
{
    oracle::Rng rng(47);
    for (int round = 0; round < 40; ++round) {
        auto e = oracle::random_system(rng, us, oracle::pick(rng, 3) + 1, {"y1", "y2"}, 0.2, 0.3);
        EXPECT_EQ(square_check(commutative(), e, 6).outcome, Outcome::equal) << io::emit_system(e);
    }
}
