#include <gtest/gtest.h>

#include "support/oracles.hpp"

using namespace corec;

namespace {

const Signature sigma_sig{{"sigma", 2}};
const Signature ab{{"a", 1}, {"b", 1}};

FlatTerm F(std::string head, std::initializer_list<const char*> vars)
{
    FlatTerm t{std::move(head), {}};
    for (const auto* v : vars)
        t.args.push_back(Atom::var(v));
    return t;
}

EquationSystem spine()
{
    return {sigma_sig, {"y"}, {{"x1", F("sigma", {"x1", "x2"})}, {"x2", ParamRef{"y"}}}};
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

FiniteAlgebra unary_algebra(std::vector<std::size_t> a_table)
{
    std::vector<std::string> carrier;
    for (std::size_t i = 0; i < a_table.size(); ++i)
        carrier.push_back(std::to_string(i));
    return {Signature{{"a", 1}}, carrier, {std::move(a_table)}};
}

/// Checks that every variable's tree has the root step prescribed by its
/// right-hand side, with the sibling solutions as children.
bool satisfies_fixpoint(const EquationSystem& e, const Solution& sol)
{
    for (const auto& [x, r] : e.equations()) {
        const auto& t = sol.at(x);
        if (const auto* p = std::get_if<ParamRef>(&r)) {
            if (!bisim_equal(t, leaf(e.signature(), p->name)))
                return false;
            continue;
        }
        const auto& ft = std::get<FlatTerm>(r);
        std::vector<RationalTree> kids;
        for (const auto& a : ft.args)
            kids.push_back(a.is_var() ? sol.at(a.name) : leaf(e.signature(), a.name));
        if (!bisim_equal(t, op_apply(e.signature(), ft.head, kids)))
            return false;
    }
    return true;
}

} // namespace

TEST(Solve, SigmaSpine)
{
    auto sol = solve(spine());
    RationalTree expected(sigma_sig, {State::op(0, {0, 1}), State::param_leaf("y")}, 0);
    EXPECT_EQ(sol.at("x1"), expected);
    EXPECT_TRUE(bisim_equal(sol.at("x1"), expected));
    EXPECT_EQ(sol.at("x2"), leaf(sigma_sig, "y"));
    EXPECT_FALSE(in_C(sol.at("x1")));
}

TEST(Solve, ParameterEquation)
{
    EquationSystem e(sigma_sig, {"y"}, {{"x", ParamRef{"y"}}});
    EXPECT_EQ(solve(e).at("x"), leaf(sigma_sig, "y"));
}

TEST(Solve, AlternatingStream)
{
    EquationSystem e(ab, {}, {{"x1", F("a", {"x2"})}, {"x2", F("b", {"x1"})}});
    auto t = solve(e).at("x1");
    EXPECT_EQ(oracle::unary_path(t, 8), (std::vector<std::string>{"a", "b", "a", "b", "a", "b", "a", "b"}));
    EXPECT_EQ(to_lasso(t), Lasso({}, {"a", "b"}));
}

TEST(Solve, FixpointAndUniqueness)
{
    oracle::Rng rng(31);
    Signature sig{{"f", 2}, {"g", 1}, {"c", 0}};
    for (int round = 0; round < 200; ++round) {
        auto e = oracle::random_system(rng, sig, 1 + oracle::pick(rng, 6), {"y", "z"}, 0.25, 0.2);
        auto sol = solve(e);
        ASSERT_TRUE(satisfies_fixpoint(e, sol));
        // replacing one variable's value by a different tree breaks the fixpoint
        auto x = e.variables()[oracle::pick(rng, e.size())];
        auto other = oracle::random_tree(rng, sig, 1 + oracle::pick(rng, 4), {"y", "z"});
        if (bisim_equal(other, sol.at(x)))
            continue;
        auto perturbed = sol;
        perturbed[x] = other;
        EXPECT_FALSE(satisfies_fixpoint(e, perturbed));
    }
}

TEST(Classify, Examples)
{
    EquationSystem chain(ab, {"y"}, {{"x1", F("a", {"x2"})}, {"x2", ParamRef{"y"}}});
    auto c = classify(chain);
    EXPECT_EQ(c.layers, (std::vector<std::vector<std::string>>{{"x2"}, {"x1"}}));
    EXPECT_TRUE(c.infinite_part.empty());
    EXPECT_EQ(c.layer_of("x1"), 2u);

    EquationSystem loop(ab, {}, {{"x", F("a", {"x"})}});
    EXPECT_EQ(classify(loop).infinite_part, std::vector<std::string>{"x"});
    EXPECT_EQ(classify(loop).layer_of("x"), 0u);

    EquationSystem absorbed(ab, {}, {{"x1", F("a", {"x2"})}, {"x2", F("b", {"x2"})}});
    c = classify(absorbed);
    EXPECT_TRUE(c.layers.empty());
    EXPECT_EQ(c.infinite_part, (std::vector<std::string>{"x1", "x2"}));
}

TEST(Classify, RejectsNonUnaryInput)
{
    EXPECT_EQ(code_of([] { classify(spine()); }), errc::non_unary_signature);
    EquationSystem atom(ab, {"y"}, {{"x", FlatTerm{"a", {Atom::param("y")}}}});
    EXPECT_EQ(code_of([&] { classify(atom); }), errc::invalid_system);
}

TEST(Classify, LayersFollowTheSuccessorChain)
{
    oracle::Rng rng(32);
    auto sig = oracle::unary_signature(3);
    for (int round = 0; round < 300; ++round) {
        auto e = oracle::random_system(rng, sig, 1 + oracle::pick(rng, 8), {"y", "z"}, 0.2);
        auto c = classify(e);
        std::size_t total = c.infinite_part.size();
        for (const auto& l : c.layers) {
            EXPECT_FALSE(l.empty());
            total += l.size();
        }
        EXPECT_EQ(total, e.size());
        // oracle: walk the chain for at most |X| steps
        for (const auto& x : e.variables()) {
            std::string v = x;
            std::size_t steps = 0;
            while (steps <= e.size() && std::holds_alternative<FlatTerm>(e.rhs(v))) {
                v = std::get<FlatTerm>(e.rhs(v)).args[0].name;
                ++steps;
            }
            EXPECT_EQ(c.layer_of(x), steps > e.size() ? 0 : steps + 1);
        }
    }
}

TEST(Decompose, Examples)
{
    EquationSystem chain(ab, {"y"}, {{"x1", F("a", {"x2"})}, {"x2", ParamRef{"y"}}});
    auto d = solve_decomposed(chain);
    const auto& x1 = std::get<FinitePart>(d.at("x1"));
    EXPECT_EQ(x1.word, std::vector<std::string>{"a"});
    EXPECT_EQ(x1.leaf, "y");
    EXPECT_TRUE(std::get<FinitePart>(d.at("x2")).word.empty());
    auto sol = solve(chain);
    for (const auto& x : {"x1", "x2"})
        EXPECT_TRUE(oracle::cut_equal(to_tree(d.at(x), ab), sol.at(x), 4));

    EquationSystem loop(ab, {}, {{"x", F("a", {"x"})}});
    EXPECT_EQ(std::get<InfinitePart>(solve_decomposed(loop).at("x")).stream, Lasso({}, {"a"}));
}

TEST(Decompose, IdentityFunctorEncoding)
{
    Signature star{{"*", 1}};
    EquationSystem e(star, {"y"}, {{"x1", F("*", {"x2"})}, {"x2", ParamRef{"y"}}});
    const auto& v = std::get<FinitePart>(solve_decomposed(e).at("x1"));
    EXPECT_EQ(v.word.size(), 1u);
    EXPECT_EQ(v.leaf, "y");
}

TEST(Decompose, CoherentWithSolve)
{
    oracle::Rng rng(33);
    for (int round = 0; round < 300; ++round) {
        auto sig = oracle::unary_signature(1 + oracle::pick(rng, 3));
        auto e = oracle::random_system(rng, sig, 1 + oracle::pick(rng, 8), {"y", "z"}, 0.2);
        auto d = solve_decomposed(e);
        auto sol = solve(e);
        auto cls = classify(e);
        for (const auto& x : e.variables()) {
            const auto& t = sol.at(x);
            ASSERT_TRUE(bisim_equal(to_tree(d.at(x), sig), t));
            auto leaves = count_param_leaves(t);
            if (const auto* fin = std::get_if<FinitePart>(&d.at(x))) {
                EXPECT_EQ(fin->word.size() + 1, cls.layer_of(x));
                EXPECT_EQ(leaves, (LeafCount{false, 1, false}));
            } else {
                EXPECT_EQ(cls.layer_of(x), 0u);
                EXPECT_TRUE(t.parameters().empty());
            }
        }
    }
}

TEST(UnaryForm, FoldsConstantsAndParameterAtoms)
{
    Signature sig{{"a", 1}, {"c", 0}};
    EquationSystem e(sig, {"y"}, {{"x1", F("a", {"x2"})}, {"x2", F("c", {})}, {"x3", FlatTerm{"a", {Atom::param("y")}}}});
    auto u = to_unary_form(e);
    EXPECT_TRUE(u.system.signature().is_unary());
    EXPECT_EQ(u.constants.at("c"), "c");
    auto d = solve_decomposed(u.system);
    const auto& x1 = std::get<FinitePart>(d.at("x1"));
    EXPECT_EQ(x1.word, std::vector<std::string>{"a"});
    EXPECT_EQ(x1.leaf, "c");
    const auto& x3 = std::get<FinitePart>(d.at("x3"));
    EXPECT_EQ(x3.leaf, "y");
    EXPECT_EQ(code_of([] { to_unary_form(spine()); }), errc::non_unary_signature);
}

TEST(Compose, UnitChain)
{
    Signature sig{{"a", 1}};
    EquationSystem e(sig, {"y"}, {{"x", ParamRef{"y"}}});
    EquationSystem f(sig, {"z"}, {{"y", ParamRef{"z"}}});
    auto c = compose_systems(e, f);
    auto sol = solve(c);
    EXPECT_EQ(sol.at("x"), leaf(sig, "z"));
    auto grafted = graft(solve(e).at("x"), solve(f));
    EXPECT_TRUE(bisim_equal(sol.at("x"), grafted));
}

TEST(Compose, SpineWithSelfSimilarParameter)
{
    EquationSystem f(sigma_sig, {}, {{"y", F("sigma", {"y", "y"})}});
    auto c = compose_systems(spine(), f);
    EXPECT_TRUE(c.parameters().empty());
    auto sol = solve(c);
    EXPECT_EQ(count_param_leaves(sol.at("x1")).count, 0u);
    auto grafted = graft(solve(spine()).at("x1"), solve(f));
    EXPECT_TRUE(oracle::cut_equal(sol.at("x1"), grafted, 6));
    EXPECT_EQ(cut(sol.at("x1"), 6), cut(grafted, 6));
}

TEST(Compose, Errors)
{
    EquationSystem f(ab, {}, {{"y", F("a", {"y"})}});
    EXPECT_EQ(code_of([&] { compose_systems(spine(), f); }), errc::signature_mismatch);
    EquationSystem g(sigma_sig, {}, {{"w", F("sigma", {"w", "w"})}});
    EXPECT_EQ(code_of([&] { compose_systems(spine(), g); }), errc::parameter_mismatch);
}

TEST(ElgotAxioms, Compositionality)
{
    oracle::Rng rng(34);
    Signature sig{{"f", 2}, {"g", 1}, {"c", 0}};
    for (int round = 0; round < 100; ++round) {
        auto e = oracle::random_system(rng, sig, 1 + oracle::pick(rng, 4), {"y1", "y2"}, 0.3, 0.3);
        // f's variables are e's parameters
        auto f = oracle::random_second_system(rng, sig, {"y1", "y2"});
        auto composed = solve(compose_systems(e, f));
        auto sf = solve(f);
        auto se = solve(e);
        for (const auto& x : e.variables()) {
            std::map<std::string, RationalTree> assignment;
            for (const auto& p : se.at(x).parameters())
                assignment.emplace(p, sf.at(p));
            EXPECT_TRUE(bisim_equal(composed.at(x), graft(se.at(x), assignment)));
        }
    }
}

TEST(ElgotAxioms, Functoriality)
{
    oracle::Rng rng(35);
    Signature sig{{"f", 2}, {"g", 1}};
    for (int round = 0; round < 200; ++round) {
        auto target = oracle::random_system(rng, sig, 1 + oracle::pick(rng, 4), {"y"}, 0.3, 0.2);
        auto [source, h] = oracle::random_refinement(rng, target);
        auto ss = solve(source);
        auto st = solve(target);
        for (const auto& v : source.variables())
            EXPECT_TRUE(bisim_equal(ss.at(v), st.at(h.at(v))));
    }
}

TEST(Anchors, Examples)
{
    EquationSystem loop(Signature{{"a", 1}}, {}, {{"x", F("a", {"x"})}});
    auto identity = unary_algebra({0, 1});
    auto negation = unary_algebra({1, 0});
    auto as = anchors(loop, identity);
    ASSERT_EQ(as.size(), 2u);
    EXPECT_EQ(as[0].at("x"), 0u);
    EXPECT_EQ(as[1].at("x"), 1u);
    EXPECT_TRUE(anchors(loop, negation).empty());
    EXPECT_EQ(solve_anchored(loop, identity, Valuation{{"x", 0}}).at("x"), 0u);
    EXPECT_EQ(code_of([&] { solve_anchored(loop, negation, Valuation{{"x", 0}}); }), errc::invalid_anchor);

    EquationSystem chain(Signature{{"a", 1}}, {"p"}, {{"x1", F("a", {"x2"})}, {"x2", ParamRef{"p"}}});
    auto none = anchors(chain, identity, Valuation{{"p", 1}});
    ASSERT_EQ(none.size(), 1u);
    EXPECT_TRUE(none[0].empty());
    auto three = unary_algebra({2, 0, 1});
    auto s = solve_anchored(chain, three, Valuation{{"p", 1}}, Valuation{});
    EXPECT_EQ(s.at("x2"), 1u);
    EXPECT_EQ(s.at("x1"), 0u);  // a(1) = 0
}

TEST(Anchors, AnchoredSolutionsSolveTheSystem)
{
    oracle::Rng rng(36);
    for (int round = 0; round < 300; ++round) {
        auto sig = oracle::unary_signature(1 + oracle::pick(rng, 2));
        auto e = oracle::random_system(rng, sig, 1 + oracle::pick(rng, 4), {"p"}, 0.3);
        auto n = 1 + oracle::pick(rng, 3);
        auto algebras = enumerate_algebras(sig, n);
        const auto& a = algebras[oracle::pick(rng, algebras.size())];
        Valuation params{{"p", oracle::pick(rng, n)}};
        auto brute = oracle::brute_solutions(a, e, params);
        std::set<Valuation> rebuilt;
        for (const auto& s : anchors(e, a, params)) {
            auto sol = solve_anchored(e, a, params, s);
            EXPECT_TRUE(brute.contains(sol));
            rebuilt.insert(sol);
        }
        EXPECT_EQ(rebuilt, brute);
    }
}
