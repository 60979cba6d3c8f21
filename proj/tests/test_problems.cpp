#include <algorithm>
#include <cmath>

#include "divcw/engine.hpp"
#include "divcw/errors.hpp"
#include "divcw/graph.hpp"
#include "divcw/oracle.hpp"
#include "divcw/problems.hpp"
#include "doctest.h"
#include "support/corpus.hpp"

using namespace divcw;

namespace {

std::set<VertexSet> brute_set(ProblemSpec::Kind kind, int k, const ColoredGraph& g) {
    std::vector<VertexSet> list = brute_solutions({kind, k, nullptr}, g);
    return {list.begin(), list.end()};
}

}  // namespace

TEST_CASE("witness families are exactly the solution families") {
    // Soundness and completeness in one stroke: the set of solutions
    // extractable from ANY witness equals the brute-force enumeration.
    for (const auto* inst : test::corpus_up_to(6)) {
        CAPTURE(inst->name);
        ColoredGraph g = evaluate(inst->decomp);
        for (int k = 0; k <= 3; ++k) {
            CAPTURE(k);
            auto cover = vc_core(k, inst->decomp);
            CHECK(test::witness_solutions(*cover, inst->decomp) ==
                  brute_set(ProblemSpec::Kind::VertexCover, k, g));
            auto dom = ds_core(k, inst->decomp);
            CHECK(test::witness_solutions(*dom, inst->decomp) ==
                  brute_set(ProblemSpec::Kind::DominatingSet, k, g));
        }
    }
}

TEST_CASE("process lists are sorted, duplicate-free and well-shaped") {
    for (const auto* inst : test::corpus_up_to(8)) {
        CAPTURE(inst->name);
        for (int variant = 0; variant < 2; ++variant) {
            auto core = variant == 0 ? vc_core(2, inst->decomp) : ds_core(2, inst->decomp);
            for (int t = 0; t < inst->decomp.num_nodes(); ++t) {
                const auto& tuples = core->process(t);
                CHECK(std::is_sorted(tuples.begin(), tuples.end()));
                CHECK(std::adjacent_find(tuples.begin(), tuples.end()) == tuples.end());
                for (const ProcessTuple& tuple : tuples)
                    CHECK(static_cast<int>(tuple.children.size()) == inst->decomp.nodes[t].arity());
            }
        }
    }
}

TEST_CASE("table sizes respect the structural bounds") {
    for (const auto* inst : test::corpus_up_to(8)) {
        CAPTURE(inst->name);
        int width = inst->decomp.width;
        for (int k = 0; k <= 2; ++k) {
            auto cover = vc_core(k, inst->decomp);
            auto cover_reach = reachable_entries(*cover, inst->decomp);
            std::size_t cover_bound = static_cast<std::size_t>(std::pow(k + 1, width));
            for (const auto& entries : cover_reach) CHECK(entries.size() <= cover_bound);

            auto dom = ds_core(k, inst->decomp);
            auto dom_reach = reachable_entries(*dom, inst->decomp);
            std::size_t dom_bound = static_cast<std::size_t>(k + 1) * (std::size_t{1} << (2 * width));
            for (const auto& entries : dom_reach) CHECK(entries.size() <= dom_bound);
        }
    }
}

TEST_CASE("labels and parameter validation") {
    const CwDecomposition d = gen_path(3);
    CHECK(vc_core(2, d)->label() == "vc:2");
    CHECK(ds_core(0, d)->label() == "ds:0");
    CHECK_THROWS_AS(vc_core(-1, d), input_error);
    CHECK_THROWS_AS(ds_core(-1, d), input_error);
    CHECK_THROWS_AS(ds_core(0x10000, d), input_error);

    CwDecomposition bad = gen_path(3);
    bad.nodes[bad.root].a = 99;  // root of a path decomposition is a recolor
    CHECK_THROWS_AS(vc_core(1, bad), input_error);
}

TEST_CASE("solution bits are only defined on leaf entries") {
    const CwDecomposition d = gen_path(5);
    auto cover = vc_core(2, d);
    auto w = solve_single(*cover, d);
    REQUIRE(w.has_value());
    // The root entry records two cover vertices; reading it as a leaf bit is a bug.
    CHECK_THROWS_AS(cover->solution_bit(w->entry[d.root]), std::logic_error);
}

TEST_CASE("acceptance matches the definition on root entries") {
    const CwDecomposition d = gen_path(5);
    auto dom = ds_core(2, d);
    auto reach = reachable_entries(*dom, d);
    int accepted = 0;
    for (const Entry& e : reach[d.root]) accepted += dom->accepts(e);
    CHECK(accepted > 0);  // the five-path has dominating sets of size <= 2
    auto tight = ds_core(1, d);
    auto tight_reach = reachable_entries(*tight, d);
    for (const Entry& e : tight_reach[d.root]) CHECK_FALSE(tight->accepts(e));
}

TEST_CASE("smallest covers via the ascending loop") {
    const CwDecomposition p5 = gen_path(5);
    CHECK(min_vc(p5, 5) == VertexSet{"v2", "v4"});
    CHECK(min_vc(p5, 2) == VertexSet{"v2", "v4"});
    CHECK(min_vc(p5, 1) == std::nullopt);
    CHECK(min_vc(gen_path(1), 0) == VertexSet{});

    for (const auto* inst : test::corpus_up_to(6)) {
        CAPTURE(inst->name);
        ColoredGraph g = evaluate(inst->decomp);
        int n = g.num_vertices();
        std::vector<VertexSet> all = brute_solutions({ProblemSpec::Kind::VertexCover, n, nullptr}, g);
        std::size_t optimum = all.empty() ? 0 : all.front().size();
        for (const VertexSet& s : all) optimum = std::min(optimum, s.size());
        auto got = min_vc(inst->decomp, n);
        REQUIRE(got.has_value());
        CHECK(got->size() == optimum);
        CHECK(is_vertex_cover(g, *got));
        if (optimum > 0) CHECK(min_vc(inst->decomp, static_cast<int>(optimum) - 1) == std::nullopt);
    }
}

TEST_CASE("cores are deterministic across construction") {
    const CwDecomposition d = gen_complete_bipartite(2, 3);
    auto a = ds_core(2, d);
    auto b = ds_core(2, d);
    for (int t = 0; t < d.num_nodes(); ++t) CHECK(a->process(t) == b->process(t));
}
