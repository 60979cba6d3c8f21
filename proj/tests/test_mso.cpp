#include <algorithm>

#include "divcw/engine.hpp"
#include "divcw/errors.hpp"
#include "divcw/graph.hpp"
#include "divcw/mso/eval_tree.hpp"
#include "divcw/mso/formula.hpp"
#include "divcw/mso/mso_core.hpp"
#include "divcw/oracle.hpp"
#include "divcw/problems.hpp"
#include "doctest.h"
#include "support/corpus.hpp"

using namespace divcw;

namespace {

const std::string kDsFormula =
    "exists set S forall vertex x exists vertex y : (x in S) | (adj(x,y) & y in S)";
const std::string kVcFormula =
    "exists set S forall vertex x forall vertex y : !adj(x,y) | (x in S) | (y in S)";

std::set<VertexSet> brute_set(const ProblemSpec& spec, const ColoredGraph& g) {
    std::vector<VertexSet> list = brute_solutions(spec, g);
    return {list.begin(), list.end()};
}

}  // namespace

TEST_CASE("formula parsing") {
    mso::Formula f = mso::parse_formula(kDsFormula);
    REQUIRE(f.prefix.size() == 3);
    CHECK(f.prefix[0].kind == mso::QuantKind::Exists);
    CHECK(f.prefix[0].sort == mso::VarSort::Set);
    CHECK(f.prefix[1].kind == mso::QuantKind::Forall);
    CHECK(f.prefix[1].sort == mso::VarSort::Vertex);
    CHECK(f.prefix[2].kind == mso::QuantKind::Exists);
    CHECK(f.num_vertex_vars() == 2);
    CHECK(f.num_set_vars() == 1);
    CHECK(f.sort_index(0) == 0);
    CHECK(f.sort_index(1) == 0);
    CHECK(f.sort_index(2) == 1);
    REQUIRE(f.matrix != nullptr);
    CHECK(f.matrix->op == mso::Expr::Op::Or);

    mso::Formula vc = mso::parse_formula(kVcFormula);
    CHECK(vc.matrix->op == mso::Expr::Op::Or);  // '|' chains associate into Or at the top
    CHECK(vc.depth() == 3);

    mso::Formula imp = mso::parse_formula("exists vertex x : x = x -> x = x -> x = x");
    CHECK(imp.matrix->op == mso::Expr::Op::Implies);
    CHECK(imp.matrix->right->op == mso::Expr::Op::Implies);  // right-associative
}

TEST_CASE("formula parse errors") {
    CHECK_THROWS_AS(mso::parse_formula("exists vertex x : adj(x,y)"), parse_error);  // unbound
    CHECK_THROWS_AS(mso::parse_formula("exists vertex x exists vertex x : x = x"), parse_error);
    CHECK_THROWS_AS(mso::parse_formula("exists set S exists vertex x : adj(x,S)"), parse_error);
    CHECK_THROWS_AS(mso::parse_formula("exists set S exists vertex x : S in x"), parse_error);
    CHECK_THROWS_AS(mso::parse_formula("exists vertex x x = x"), parse_error);  // missing ':'
    CHECK_THROWS_AS(mso::parse_formula(": x = x"), parse_error);                // empty prefix
    CHECK_THROWS_AS(mso::parse_formula("exists vertex x : x = x )"), parse_error);
    CHECK_THROWS_AS(mso::parse_formula("exists vertex x :"), parse_error);
    CHECK_THROWS_AS(mso::parse_formula("exists set S : exists vertex x in S"), parse_error);
}

TEST_CASE("structural digests are insertion-order independent") {
    mso::Formula f = mso::parse_formula(kDsFormula);
    mso::TreeEngine first(f, 3);
    mso::TreeEngine second(f, 3);

    auto a1 = first.leaf_tree(1);
    auto a2 = first.leaf_tree(2);
    auto b2 = second.leaf_tree(2);  // opposite order
    auto b1 = second.leaf_tree(1);
    CHECK(first.arena().digest(a1) == second.arena().digest(b1));
    CHECK(first.arena().digest(a2) == second.arena().digest(b2));
    CHECK(first.arena().digest(a1) != first.arena().digest(a2));

    // Interning the same structure twice yields the same node.
    CHECK(first.leaf_tree(1) == a1);

    // Disjoint union is symmetric, and the reduced trees coincide exactly.
    auto p12 = first.product(a1, a2);
    auto p21 = first.product(a2, a1);
    CHECK(p12 == p21);
    auto q = second.product(b1, b2);
    CHECK(first.arena().digest(p12) == second.arena().digest(q));
}

TEST_CASE("rewrites behave like the decomposition operations") {
    mso::Formula f = mso::parse_formula(kDsFormula);
    mso::TreeEngine eng(f, 3);
    auto leaf1 = eng.leaf_tree(1);
    auto leaf2 = eng.leaf_tree(2);
    CHECK(eng.recolor(leaf1, 1, 2) == leaf2);
    CHECK(eng.recolor(leaf1, 1, 1) == leaf1);   // identity
    CHECK(eng.recolor(leaf1, 3, 1) == leaf1);   // no vertex wears color 3
    CHECK_THROWS_AS(eng.add_edges(leaf1, 2, 2), input_error);

    // Two isolated vertices vs an edge: adding edges changes the tree, and
    // doing it twice changes nothing more.
    auto both = eng.product(leaf1, leaf2);
    auto wired = eng.add_edges(both, 1, 2);
    CHECK(wired != both);
    CHECK(eng.add_edges(wired, 1, 2) == wired);
    CHECK(eng.add_edges(wired, 2, 1) == wired);
}

TEST_CASE("engine guards") {
    mso::Formula deep = mso::parse_formula(
        "exists vertex a exists vertex b exists vertex c exists vertex d exists vertex e "
        "exists vertex f exists vertex g : a = a");
    CHECK(deep.depth() == 7);
    CHECK_THROWS_AS(mso::TreeEngine(deep, 2), input_error);

    mso::Formula ok = mso::parse_formula(kDsFormula);
    CHECK_THROWS_AS(mso::TreeEngine(ok, 0), input_error);
    CHECK_THROWS_AS(mso::TreeEngine(ok, 256), input_error);
}

TEST_CASE("model checking matches the naive evaluator over the corpus") {
    const std::vector<std::string> formulas = {
        kDsFormula,
        kVcFormula,
        "forall vertex x exists vertex y : adj(x,y)",
        "exists vertex x forall vertex y : adj(x,y) | x = y",
        "exists vertex x exists vertex y : adj(x,y)",
        "exists vertex x exists vertex y exists vertex z : adj(x,y) & adj(y,z) & adj(x,z)",
        "exists set S exists vertex x exists vertex y : x in S & y in S & !(x = y) & !adj(x,y)",
        "forall vertex x forall vertex y : adj(x,y) | x = y",
        "exists set S forall vertex x : x in S",
        "exists set S forall vertex x exists vertex y : x in S -> adj(x,y) & !(y in S)",
    };
    for (const std::string& text : formulas) {
        CAPTURE(text);
        mso::Formula f = mso::parse_formula(text);
        for (const auto* inst : test::corpus_up_to(5)) {
            CAPTURE(inst->name);
            ColoredGraph g = evaluate(inst->decomp);
            CHECK(mso::model_check(f, inst->decomp) == naive_mso_eval(f, g));
        }
    }
}

TEST_CASE("compiled cores define the same solution families as the formulas") {
    auto ds_f = std::make_shared<mso::Formula>(mso::parse_formula(kDsFormula));
    auto vc_f = std::make_shared<mso::Formula>(mso::parse_formula(kVcFormula));
    for (const auto* inst : test::corpus_up_to(4)) {
        CAPTURE(inst->name);
        ColoredGraph g = evaluate(inst->decomp);
        auto ds_compiled = mso::mso_core(*ds_f, inst->decomp, "mso-ds");
        CHECK(test::witness_solutions(*ds_compiled, inst->decomp) ==
              brute_set({ProblemSpec::Kind::MsoFormula, 0, ds_f}, g));
        auto vc_compiled = mso::mso_core(*vc_f, inst->decomp, "mso-vc");
        CHECK(test::witness_solutions(*vc_compiled, inst->decomp) ==
              brute_set({ProblemSpec::Kind::MsoFormula, 0, vc_f}, g));
    }
}

TEST_CASE("compiled cores plug into the diverse solver") {
    const CwDecomposition d = gen_path(4);
    ColoredGraph g = evaluate(d);
    mso::Formula ds_f = mso::parse_formula(kDsFormula);
    auto core1 = mso::mso_core(ds_f, d, "mso-ds");
    auto core2 = mso::mso_core(ds_f, d, "mso-ds");
    auto mine = diverse_solve({core1.get(), core2.get()}, divsum_as_venn(2), d);
    REQUIRE(mine.has_value());

    auto brute = brute_solutions(
        {ProblemSpec::Kind::MsoFormula, 0, std::make_shared<mso::Formula>(mso::parse_formula(kDsFormula))}, g);
    auto oracle = brute_best_diversity({brute, brute}, divsum_as_venn(2), g.names);
    REQUIRE(oracle.has_value());
    CHECK(mine->best == oracle->value);
    CHECK(venn_div(divsum_as_venn(2), mine->solutions, g.names) == mine->best);
}

TEST_CASE("core compilation guards") {
    const CwDecomposition d = gen_path(3);
    mso::Formula no_set = mso::parse_formula("forall vertex x exists vertex y : adj(x,y)");
    CHECK_THROWS_AS(mso::mso_core(no_set, d), input_error);
    mso::Formula forall_set = mso::parse_formula("forall set S exists vertex x : x in S");
    CHECK_THROWS_AS(mso::mso_core(forall_set, d), input_error);

    mso::Formula ok = mso::parse_formula(kDsFormula);
    CHECK_THROWS_AS(mso::model_check(ok, d, 5), budget_error);
}

TEST_CASE("compiled-core entries expose leaf bits only at leaves") {
    const CwDecomposition d = gen_path(4);
    mso::Formula ds_f = mso::parse_formula(kDsFormula);
    auto core = mso::mso_core(ds_f, d, "mso-ds");
    auto w = solve_single(*core, d);
    REQUIRE(w.has_value());
    CHECK_THROWS_AS(core->solution_bit(w->entry[d.root]), std::logic_error);
    VertexSet s = extract_solution(*core, d, *w);
    CHECK(is_dominating_set(evaluate(d), s));
}
