#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "divcw/dp_core.hpp"
#include "divcw/measures.hpp"

namespace divcw {

// Entries reachable at each node (the fixpoint of the transition relation),
// indexed by node.  Sorted and duplicate-free.
std::vector<std::vector<Entry>> reachable_entries(const DpCore& core, const CwDecomposition& d);

// A witness: one entry per node index (nodes not reachable from the root are
// left empty; a validated decomposition has none).
struct Witness {
    std::vector<Entry> entry;
};

// Runs the plain (r = 1) dynamic program.  Returns a witness with an
// accepted root entry, or nullopt if the problem is infeasible on d.
// Deterministic: among all witnesses, the lexicographically least entry /
// transition is chosen at every step.
std::optional<Witness> solve_single(const DpCore& core, const CwDecomposition& d);

// Reads the solution off a witness via the leaf bits.
VertexSet extract_solution(const DpCore& core, const CwDecomposition& d, const Witness& w);

// --- diverse solving -------------------------------------------------------

// Result of the diversity-maximizing product program.
struct DiverseResult {
    std::uint64_t best = 0;            // maximum diversity over accepted tuples
    std::vector<VertexSet> solutions;  // an r-tuple attaining `best`
};

// Finds r solutions (one per core) maximizing the Venn-form diversity f.
// All cores must be built over d and f.r must equal cores.size().  Returns
// nullopt when no tuple of accepted root entries exists (some core is
// infeasible); otherwise the exact optimum.  A caller-imposed diversity
// target does not influence the optimum; success is result->best >= target.
std::optional<DiverseResult> diverse_solve(const std::vector<const DpCore*>& cores, const VennMeasure& f,
                                           const CwDecomposition& d);

// The set of root keys (r-tuples of entries) reachable in the product
// program, for introspection and tests.
std::vector<std::vector<Entry>> diverse_root_keys(const std::vector<const DpCore*>& cores,
                                                  const CwDecomposition& d);

// Finds r solutions with all pairwise Hamming distances >= d_target, or
// nullopt if none exist.  Distances are tracked capped at d_target, so the
// state space stays finite.  d_target = 0 degenerates to independent
// feasibility of every core.
std::optional<std::vector<VertexSet>> min_diverse_solve(const std::vector<const DpCore*>& cores,
                                                        std::uint64_t d_target, const CwDecomposition& d);

}  // namespace divcw
