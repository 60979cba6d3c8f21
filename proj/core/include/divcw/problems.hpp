#pragma once

#include <memory>
#include <optional>

#include "divcw/dp_core.hpp"
#include "divcw/measures.hpp"

namespace divcw {

// Core whose witnesses are exactly the vertex covers of size <= k.  Entries
// are per-color histograms of chosen cover vertices, bit-packed at a fixed
// width derived from k.  An edge-adding step keeps an entry only when one of
// the two color classes is fully inside the cover, so uncovered edges can
// never appear.
std::unique_ptr<DpCore> vc_core(int k, const CwDecomposition& d);

// Core whose witnesses are exactly the dominating sets of size <= k.
// Entries are (count, colors containing a chosen vertex, colors containing a
// not-yet-dominated vertex); acceptance requires nothing undominated.
std::unique_ptr<DpCore> ds_core(int k, const CwDecomposition& d);

// Smallest vertex cover of size at most k, found by running vc_core for
// k' = 0..k and extracting the witness of the first feasible size.  The
// minimization itself is not a monotone core, hence the outer loop.
std::optional<VertexSet> min_vc(const CwDecomposition& d, int k);

}  // namespace divcw
