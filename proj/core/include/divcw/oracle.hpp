#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "divcw/graph.hpp"
#include "divcw/measures.hpp"
#include "divcw/mso/formula.hpp"

namespace divcw {

// What counts as a solution, for brute-force enumeration.
struct ProblemSpec {
    enum class Kind { VertexCover, DominatingSet, MinimalDominatingSet, MsoFormula };

    Kind kind;
    int k = 0;  // size bound for VertexCover / DominatingSet
    std::shared_ptr<const mso::Formula> formula;  // MsoFormula: first quantifier must be 'exists set'

    std::string label() const;
};

// Predicates, straight from the definitions.
bool is_vertex_cover(const ColoredGraph& g, const VertexSet& s);
bool is_dominating_set(const ColoredGraph& g, const VertexSet& s);

// Closed-formula truth by direct quantifier recursion (set variables range
// over all 2^n subsets).  Independent of the evaluation-tree machinery.
// Refuses graphs with more than 20 vertices.
bool naive_mso_eval(const mso::Formula& f, const ColoredGraph& g);

inline constexpr int kOracleMaxVertices = 20;
inline constexpr std::uint64_t kOracleMaxTuples = 10'000'000;

// All solutions of the problem on g, sorted lexicographically (sets compare
// by their sorted vertex names).  Refuses graphs with more than 20 vertices.
std::vector<VertexSet> brute_solutions(const ProblemSpec& spec, const ColoredGraph& g);

struct BestTuple {
    std::uint64_t value = 0;
    std::vector<VertexSet> tuple;  // lexicographically least maximizer
};

// Exact maximum of venn_div(f, tuple) over the cartesian product of the
// given per-slot solution lists.  Returns nullopt if some list is empty.
// Refuses universes over 64 vertices and products over 10^7 tuples.
// Deterministic for every thread count: scans in lexicographic order and
// keeps the first maximizer.
std::optional<BestTuple> brute_best_diversity(const std::vector<std::vector<VertexSet>>& lists,
                                              const VennMeasure& f, const std::vector<std::string>& universe,
                                              int threads = 1);

// Same scan with the min-pairwise-Hamming-distance objective.
std::optional<BestTuple> brute_best_min_distance(const std::vector<std::vector<VertexSet>>& lists,
                                                 const std::vector<std::string>& universe, int threads = 1);

}  // namespace divcw
