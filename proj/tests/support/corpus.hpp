#pragma once

#include <random>
#include <set>
#include <string>
#include <vector>

#include "divcw/dp_core.hpp"
#include "divcw/graph.hpp"
#include "divcw/measures.hpp"

namespace divcw::test {

struct Instance {
    std::string name;
    CwDecomposition decomp;
};

// Small instance zoo (every graph has at most 8 vertices): generated paths,
// cliques and bicliques plus hand-written decomposition files covering
// cycles, pendants, disconnected graphs and recolor-heavy shapes.
const std::vector<Instance>& corpus();

// The corpus instances whose graphs have at most max_n vertices.
std::vector<const Instance*> corpus_up_to(int max_n);

// Every solution extractable from some witness of the core: the reference
// semantics of a core, by exhaustive enumeration (exponential; tiny d only).
std::set<VertexSet> witness_solutions(const DpCore& core, const CwDecomposition& d);

// Deterministic random measure table with values in [0, max_value].
VennMeasure random_measure(int r, std::uint64_t seed, std::uint64_t max_value = 20);

// Deterministic random subset of the universe.
VertexSet random_subset(const std::vector<std::string>& universe, std::mt19937_64& rng);

}  // namespace divcw::test
