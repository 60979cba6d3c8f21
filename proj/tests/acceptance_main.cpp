// Acceptance suite: one line per criterion, PASS or FAIL, plus a summary.
// Each criterion cross-checks the solver library against hand-verified
// values or the brute-force oracle, and enforces its runtime budget.
#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "divcw/engine.hpp"
#include "divcw/errors.hpp"
#include "divcw/graph.hpp"
#include "divcw/measures.hpp"
#include "divcw/mso/formula.hpp"
#include "divcw/mso/mso_core.hpp"
#include "divcw/oracle.hpp"
#include "divcw/problems.hpp"
#include "support/corpus.hpp"
#include "support/run_cli.hpp"

using namespace divcw;

namespace {

int failures = 0;

struct Check {
    bool ok = true;
    std::string detail;

    void expect(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

void criterion(int number, const std::string& title, double budget_seconds,
               const std::function<void(Check&)>& body) {
    Check check;
    auto start = std::chrono::steady_clock::now();
    try {
        body(check);
    } catch (const std::exception& e) {
        check.expect(false, std::string("exception: ") + e.what());
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (budget_seconds > 0 && seconds > budget_seconds) {
        check.expect(false, "runtime " + std::to_string(seconds) + "s exceeds the " +
                                std::to_string(budget_seconds) + "s budget");
    }
    std::ostringstream line;
    line << (check.ok ? "PASS" : "FAIL") << " criterion " << number << ": " << title;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << " (" << seconds << "s)";
    if (!check.ok) line << " -- " << check.detail;
    std::cout << line.str() << '\n';
    if (!check.ok) ++failures;
}

const VertexSet kA = {"v1", "v3", "v5"};
const VertexSet kB = {"v2", "v4"};
const VertexSet kC = {"v2", "v5"};
const VertexSet kD = {"v1", "v4"};

const std::string kDsFormulaText =
    "exists set S forall vertex x exists vertex y : (x in S) | (adj(x,y) & y in S)";
const std::string kVcFormulaText =
    "exists set S forall vertex x forall vertex y : !adj(x,y) | (x in S) | (y in S)";

std::vector<VertexSet> sorted_copy(std::vector<VertexSet> sets) {
    std::sort(sets.begin(), sets.end());
    return sets;
}

// The optimum of the Venn diversity over tuples of brute-force solution
// lists, as (feasible, value); nullopt value when some list is empty.
std::optional<BestTuple> oracle_best(const std::vector<std::vector<VertexSet>>& lists, const VennMeasure& f,
                                     const ColoredGraph& g) {
    std::vector<std::string> universe = g.names;
    std::sort(universe.begin(), universe.end());
    return brute_best_diversity(lists, f, universe);
}

// --- criterion 1: exact optima over the minimal dominating sets of the five-path

void check_figure_four(Check& check) {
    ColoredGraph p5 = evaluate(gen_path(5));
    std::vector<VertexSet> minimal =
        brute_solutions({ProblemSpec::Kind::MinimalDominatingSet, 0, nullptr}, p5);
    check.expect(sorted_copy(minimal) == sorted_copy({kA, kB, kC, kD}),
                 "minimal dominating sets of the five-path are not {A,B,C,D}");

    std::vector<std::vector<VertexSet>> lists(4, minimal);
    auto sum_best = oracle_best(lists, divsum_as_venn(4), p5);
    check.expect(sum_best.has_value() && sum_best->value == 20, "pairwise-sum optimum is not 20");
    if (sum_best)
        check.expect(sorted_copy(sum_best->tuple) == sorted_copy({kA, kA, kB, kB}),
                     "pairwise-sum optimum is not attained by {A,A,B,B}");

    // The published comparison: the pairwise-sum maximizer {A,A,B,B} scores
    // 60 under the spread measure, less than the 63 of the all-distinct
    // family {A,B,C,D}.
    std::vector<std::string> universe = {"v1", "v2", "v3", "v4", "v5"};
    check.expect(venn_div(divstar(4), {kA, kB, kC, kD}, universe) == 63,
                 "spread of {A,B,C,D} is not 63");
    check.expect(venn_div(divstar(4), {kA, kA, kB, kB}, universe) == 60,
                 "spread of {A,A,B,B} is not 60");

    // With repetition allowed, the unconstrained spread optimum is higher
    // still: {C,C,D,D} leaves v3 uncovered and scores 64.
    auto star_best = oracle_best(lists, divstar(4), p5);
    check.expect(star_best.has_value() && star_best->value == 64, "spread optimum is not 64");
    if (star_best)
        check.expect(sorted_copy(star_best->tuple) == sorted_copy({kC, kC, kD, kD}),
                     "spread optimum is not attained by {C,C,D,D}");
}

// --- criterion 2: the two hand-built six-tuple families

void check_figure_two(Check& check) {
    auto block = [](int i) {
        VertexSet s;
        for (int j = 1; j <= 6; ++j) s.insert("a" + std::to_string(i) + "_" + std::to_string(j));
        return s;
    };
    auto with_b = [](VertexSet s, int j) {
        s.insert("b" + std::to_string(j));
        return s;
    };
    std::vector<VertexSet> first, second;
    for (int j = 1; j <= 6; ++j) first.push_back(with_b(block(1), j));
    for (int i = 1; i <= 5; ++i) second.push_back(with_b(block(i), i));
    second.push_back(with_b(block(1), 6));

    check.expect(div_min(first) == 2, "first family min distance is not 2");
    check.expect(div_sum(first) == 30, "first family pairwise sum is not 30");
    check.expect(div_min(second) == 2, "second family min distance is not 2");
    check.expect(div_sum(second) == 198, "second family pairwise sum is not 198");
}

// --- criterion 3: Venn evaluation of the pairwise-sum table vs the direct sum

void check_venn_equivalence(Check& check) {
    std::mt19937_64 rng(0x5eed0003);
    for (int trial = 0; trial < 1000; ++trial) {
        int n = 1 + static_cast<int>(rng() % 12);
        int r = 1 + static_cast<int>(rng() % 5);
        std::vector<std::string> universe;
        for (int i = 0; i < n; ++i) universe.push_back("u" + std::to_string(i));
        std::vector<VertexSet> sets;
        for (int i = 0; i < r; ++i) sets.push_back(test::random_subset(universe, rng));
        if (venn_div(divsum_as_venn(r), sets, universe) != div_sum(sets)) {
            check.expect(false, "mismatch at trial " + std::to_string(trial));
            return;
        }
    }
}

// --- criterion 4: additivity over disjoint splits, with empty-cell padding

void check_additivity(Check& check) {
    std::mt19937_64 rng(0x5eed0004);
    for (int trial = 0; trial < 1000; ++trial) {
        int n = 1 + static_cast<int>(rng() % 12);
        int r = 1 + static_cast<int>(rng() % 4);
        std::vector<std::string> universe;
        for (int i = 0; i < n; ++i) universe.push_back("u" + std::to_string(i));
        std::vector<VertexSet> sets;
        for (int i = 0; i < r; ++i) sets.push_back(test::random_subset(universe, rng));
        std::vector<std::string> left, right;
        for (const std::string& v : universe) (rng() & 1 ? left : right).push_back(v);

        std::vector<VennMeasure> measures = {divsum_as_venn(r), divstar(r), test::random_measure(r, rng()),
                                             test::random_measure(r, rng()), test::random_measure(r, rng())};
        auto restricted = [&](const std::vector<std::string>& part) {
            VertexSet lookup(part.begin(), part.end());
            std::vector<VertexSet> out;
            for (const VertexSet& s : sets) {
                VertexSet t;
                for (const std::string& v : s)
                    if (lookup.count(v)) t.insert(v);
                out.push_back(t);
            }
            return out;
        };
        for (const VennMeasure& f : measures) {
            // Each part's diversity padded to the full universe: vertices
            // outside the part occupy the empty Venn cell.
            std::uint64_t f0 = f.at_empty();
            std::uint64_t whole = checked_add(venn_div(f, sets, universe), checked_mul(n, f0));
            std::uint64_t left_div =
                checked_add(venn_div(f, restricted(left), left), checked_mul(n - left.size(), f0));
            std::uint64_t right_div =
                checked_add(venn_div(f, restricted(right), right), checked_mul(n - right.size(), f0));
            // Div(S u P) = Div(S) + Div(P) - |V| * f(empty), rearranged to
            // stay in unsigned arithmetic.
            if (checked_add(left_div, right_div) != whole) {
                check.expect(false, "mismatch at trial " + std::to_string(trial) + " measure " + f.name);
                return;
            }
        }
    }
}

// --- criteria 5 and 6: oracle equivalence of the two product programs

struct TupleKind {
    std::string name;
    std::vector<std::string> selectors;  // "vc" or "ds", one per slot
};

std::vector<TupleKind> tuple_kinds(int r) {
    TupleKind vc_hom{"vc-homogeneous", {}}, ds_hom{"ds-homogeneous", {}}, mixed{"mixed", {}};
    for (int i = 0; i < r; ++i) {
        vc_hom.selectors.push_back("vc");
        ds_hom.selectors.push_back("ds");
        mixed.selectors.push_back(i % 2 ? "ds" : "vc");
    }
    return {vc_hom, ds_hom, mixed};
}

void check_diverse_oracle(Check& check) {
    const int k = 2;
    int combos = 0;
    for (const auto& inst : test::corpus()) {
        ColoredGraph g = evaluate(inst.decomp);
        std::vector<VertexSet> vc_list = brute_solutions({ProblemSpec::Kind::VertexCover, k, nullptr}, g);
        std::vector<VertexSet> ds_list = brute_solutions({ProblemSpec::Kind::DominatingSet, k, nullptr}, g);
        auto cover = vc_core(k, inst.decomp);
        auto dom = ds_core(k, inst.decomp);
        for (int r = 2; r <= 3; ++r) {
            int measure_seed = 0;
            for (const TupleKind& kind : tuple_kinds(r)) {
                std::vector<const DpCore*> cores;
                std::vector<std::vector<VertexSet>> lists;
                for (const std::string& sel : kind.selectors) {
                    cores.push_back(sel == "vc" ? cover.get() : dom.get());
                    lists.push_back(sel == "vc" ? vc_list : ds_list);
                }
                std::vector<VennMeasure> measures = {divsum_as_venn(r), divstar(r),
                                                     test::random_measure(r, 900 + 7 * r + ++measure_seed)};
                for (const VennMeasure& f : measures) {
                    ++combos;
                    auto mine = diverse_solve(cores, f, inst.decomp);
                    auto oracle = oracle_best(lists, f, g);
                    if (mine.has_value() != oracle.has_value()) {
                        check.expect(false, "feasibility mismatch on " + inst.name + " " + kind.name + " r=" +
                                                std::to_string(r) + " " + f.name);
                        return;
                    }
                    if (!mine) continue;
                    std::vector<std::string> universe = g.names;
                    std::sort(universe.begin(), universe.end());
                    if (mine->best != oracle->value ||
                        venn_div(f, mine->solutions, universe) != mine->best) {
                        check.expect(false, "optimum mismatch on " + inst.name + " " + kind.name + " r=" +
                                                std::to_string(r) + " " + f.name);
                        return;
                    }
                }
            }
        }
    }
    check.expect(combos >= 30 * 2 * 3 * 3, "combination count unexpectedly low");
}

void check_min_diverse_oracle(Check& check) {
    const int k = 2;
    for (const auto& inst : test::corpus()) {
        ColoredGraph g = evaluate(inst.decomp);
        std::vector<VertexSet> vc_list = brute_solutions({ProblemSpec::Kind::VertexCover, k, nullptr}, g);
        std::vector<VertexSet> ds_list = brute_solutions({ProblemSpec::Kind::DominatingSet, k, nullptr}, g);
        auto cover = vc_core(k, inst.decomp);
        auto dom = ds_core(k, inst.decomp);
        std::vector<std::string> universe = g.names;
        std::sort(universe.begin(), universe.end());
        for (int r = 2; r <= 3; ++r) {
            for (const TupleKind& kind : tuple_kinds(r)) {
                std::vector<const DpCore*> cores;
                std::vector<std::vector<VertexSet>> lists;
                bool any_empty = false;
                for (const std::string& sel : kind.selectors) {
                    cores.push_back(sel == "vc" ? cover.get() : dom.get());
                    lists.push_back(sel == "vc" ? vc_list : ds_list);
                    any_empty = any_empty || lists.back().empty();
                }
                std::optional<BestTuple> oracle;
                if (!any_empty) oracle = brute_best_min_distance(lists, universe);
                for (std::uint64_t d_target = 0; d_target <= 4; ++d_target) {
                    bool oracle_feasible =
                        d_target == 0 ? !any_empty : (oracle.has_value() && oracle->value >= d_target);
                    auto mine = min_diverse_solve(cores, d_target, inst.decomp);
                    if (mine.has_value() != oracle_feasible) {
                        check.expect(false, "feasibility mismatch on " + inst.name + " " + kind.name + " r=" +
                                                std::to_string(r) + " d=" + std::to_string(d_target));
                        return;
                    }
                    if (mine && d_target > 0 && div_min(*mine) < d_target) {
                        check.expect(false, "returned tuple violates the target on " + inst.name);
                        return;
                    }
                }
            }
        }
    }
}

// --- criterion 7: witness families equal brute-force families

void check_monotonicity(Check& check) {
    for (const auto* inst : test::corpus_up_to(6)) {
        ColoredGraph g = evaluate(inst->decomp);
        for (int k = 0; k <= 3; ++k) {
            auto core = vc_core(k, inst->decomp);
            std::set<VertexSet> mine = test::witness_solutions(*core, inst->decomp);
            std::vector<VertexSet> brute = brute_solutions({ProblemSpec::Kind::VertexCover, k, nullptr}, g);
            std::set<VertexSet> want(brute.begin(), brute.end());
            if (mine != want) {
                check.expect(false, "witness family differs on " + inst->name + " k=" + std::to_string(k));
                return;
            }
        }
    }
}

// --- criterion 8: model checking vs the naive evaluator

std::vector<std::string> formula_zoo() {
    return {
        kDsFormulaText,
        kVcFormulaText,
        "exists vertex x : x = x",
        "forall vertex x : x = x",
        "forall vertex x forall vertex y : x = y",
        "exists vertex x exists vertex y : !(x = y)",
        "exists vertex x exists vertex y : adj(x,y)",
        "forall vertex x exists vertex y : adj(x,y)",
        "exists vertex x forall vertex y : adj(x,y) | x = y",
        "forall vertex x forall vertex y : !adj(x,y)",
        "exists vertex x exists vertex y : !adj(x,y) & !(x = y)",
        "exists vertex x exists vertex y exists vertex z : adj(x,y) & adj(y,z) & adj(x,z)",
        "exists vertex x exists vertex y exists vertex z : adj(x,y) & adj(y,z) & !adj(x,z) & !(x = z)",
        "forall vertex x forall vertex y forall vertex z : adj(x,y) & adj(y,z) -> adj(x,z) | x = z",
        "exists set S forall vertex x : x in S",
        "exists set S forall vertex x : !(x in S)",
        "forall set S exists vertex x : x in S",
        "forall vertex x exists set S : x in S",
        "exists set S exists vertex x exists vertex y : x in S & y in S & !(x = y) & !adj(x,y)",
        "exists set S exists vertex x exists vertex y : (x in S) & !(y in S) & adj(x,y)",
        "exists set S exists set T forall vertex x : (x in S) | (x in T)",
        "exists set S exists vertex x forall vertex y : x in S & (adj(x,y) -> y in S)",
        "forall set S exists vertex x forall vertex y : (x in S) | !adj(x,y)",
        "exists set S forall vertex x exists vertex y : x in S -> adj(x,y) & !(y in S)",
        "exists set S forall vertex x exists vertex y forall vertex z : (x in S) | adj(x,y) | z = z",
    };
}

void check_model_checking(Check& check) {
    std::vector<std::string> texts = formula_zoo();
    check.expect(texts.size() >= 20, "fewer than 20 formulas");
    for (const std::string& text : texts) {
        mso::Formula f = mso::parse_formula(text);
        if (f.depth() > 4) {
            check.expect(false, "formula exceeds depth 4: " + text);
            return;
        }
        for (const auto* inst : test::corpus_up_to(5)) {
            bool fast = mso::model_check(f, inst->decomp);
            bool naive = naive_mso_eval(f, evaluate(inst->decomp));
            if (fast != naive) {
                check.expect(false, "disagreement on '" + text + "' over " + inst->name);
                return;
            }
        }
    }
}

// --- criterion 9: compiled dominating-set cores in the diverse product

void check_diverse_mso(Check& check) {
    mso::Formula ds_f = mso::parse_formula(kDsFormulaText);
    auto spec_formula = std::make_shared<mso::Formula>(mso::parse_formula(kDsFormulaText));
    std::vector<CwDecomposition> instances;
    for (int n = 1; n <= 5; ++n) instances.push_back(gen_path(n));
    for (int n = 2; n <= 5; ++n) instances.push_back(gen_clique(n));
    for (const CwDecomposition& d : instances) {
        ColoredGraph g = evaluate(d);
        auto core1 = mso::mso_core(ds_f, d, "mso-ds");
        auto core2 = mso::mso_core(ds_f, d, "mso-ds");
        auto mine = diverse_solve({core1.get(), core2.get()}, divsum_as_venn(2), d);
        std::vector<VertexSet> all = brute_solutions({ProblemSpec::Kind::MsoFormula, 0, spec_formula}, g);
        auto oracle = oracle_best({all, all}, divsum_as_venn(2), g);
        if (mine.has_value() != oracle.has_value()) {
            check.expect(false, "feasibility mismatch on an instance with " + std::to_string(g.num_vertices()) +
                                    " vertices");
            return;
        }
        if (mine && mine->best != oracle->value) {
            check.expect(false, "optimum mismatch on an instance with " + std::to_string(g.num_vertices()) +
                                    " vertices: " + std::to_string(mine->best) + " vs " +
                                    std::to_string(oracle->value));
            return;
        }
    }
}

// --- criterion 10: byte-identical reruns of every command

void check_determinism(Check& check) {
    std::string p5 = "/tmp/divcw_accept_p5.cw";
    std::string formula = "/tmp/divcw_accept_ds.mso";
    std::string table = "/tmp/divcw_accept_table.measure";
    test::write_file(p5, format_decomposition(gen_path(5)));
    test::write_file(formula, kDsFormulaText + "\n");
    test::write_file(table, "r 2\n00 0\n10 2\n01 1\n11 5\n");

    std::vector<std::string> commands = {
        "check " + p5,
        "gen path 6",
        "gen clique 4",
        "--no-timing solve --decomp " + p5 + " --problem ds:2",
        "--no-timing solve --decomp " + p5 + " --problem vc:1",
        "--no-timing solve --decomp " + p5 + " --problem minvc:5",
        "--no-timing solve --decomp " + p5 + " --problem mso:" + formula,
        "--no-timing diverse --decomp " + p5 + " --problems ds:2,ds:2 --measure sum --d 4",
        "--no-timing diverse --decomp " + p5 + " --problems vc:2,ds:2 --measure star",
        "--no-timing diverse --decomp " + p5 + " --problems ds:2,ds:2 --measure table:" + table,
        "--no-timing --format json diverse --decomp " + p5 + " --problems ds:2,ds:2,ds:2 --measure sum",
        "--no-timing diverse-min --decomp " + p5 + " --problems ds:2,ds:2 --d 4",
        "--no-timing diverse-min --decomp " + p5 + " --problems ds:2,ds:2,ds:2 --d 2",
        "--no-timing oracle --decomp " + p5 + " --problems ds:2,ds:2 --measure sum",
        "--no-timing oracle --decomp " + p5 + " --problems ds:2,ds:2 --measure min",
        "--no-timing --threads 2 oracle --decomp " + p5 + " --problems ds:2,ds:2,ds:2 --measure star",
        "--no-timing mso-check --decomp " + p5 + " --formula " + formula,
        "--no-timing diverse --decomp " + p5 + " --problems mso:" + formula + ",mso:" + formula +
            " --measure sum",
    };
    for (const std::string& cmd : commands) {
        test::CliResult first = test::run_cli(cmd, true);
        test::CliResult second = test::run_cli(cmd, true);
        if (first.out != second.out || first.exit_code != second.exit_code) {
            check.expect(false, "non-identical reruns of: " + cmd);
            return;
        }
    }

    // Thread count must not influence the scan output.
    std::string base = "--no-timing oracle --decomp " + p5 + " --problems ds:2,ds:2,ds:2 --measure star";
    test::CliResult one = test::run_cli("--threads 1 " + base, true);
    test::CliResult four = test::run_cli("--threads 4 " + base, true);
    check.expect(one.out == four.out && one.exit_code == four.exit_code,
                 "scan output depends on the thread count");
}

}  // namespace

int main() {
    criterion(1, "exact optima and spread comparison over the minimal dominating sets of the five-path", 1.0,
              check_figure_four);
    criterion(2, "hand-built six-tuple families hit (min,sum) = (2,30) and (2,198)", 1.0, check_figure_two);
    criterion(3, "venn evaluation equals the direct pairwise sum on 1000 random families", 0, check_venn_equivalence);
    criterion(4, "diversity is additive over 1000 random disjoint splits", 0, check_additivity);
    criterion(5, "diverse optima match brute force across the corpus", 60.0, check_diverse_oracle);
    criterion(6, "min-distance feasibility matches brute force across the corpus", 0, check_min_diverse_oracle);
    criterion(7, "witness families equal brute-force families on graphs up to 6 vertices", 0, check_monotonicity);
    criterion(8, "model checking agrees with the naive evaluator on 25 formulas", 120.0, check_model_checking);
    criterion(9, "compiled dominating-set cores reach the oracle optimum", 300.0, check_diverse_mso);
    criterion(10, "every command is byte-identical across reruns and thread counts", 0, check_determinism);

    if (failures == 0) {
        std::cout << "all criteria passed\n";
        return 0;
    }
    std::cout << failures << " criteria failed\n";
    return 1;
}
