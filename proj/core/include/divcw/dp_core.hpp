#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "divcw/graph.hpp"

namespace divcw {

// A dynamic-programming entry.  The byte string is the canonical encoding of
// the core's state: byte equality is state equality, and the byte order is
// the tie-breaking order used everywhere determinism matters.
struct Entry {
    std::string bytes;
    auto operator<=>(const Entry&) const = default;
    bool operator==(const Entry&) const = default;
};

// One transition at a decomposition node: the node's entry together with the
// child entries (in child order) it can be derived from.  Leaves have no
// children.
struct ProcessTuple {
    Entry parent;
    std::vector<Entry> children;
    auto operator<=>(const ProcessTuple&) const = default;
    bool operator==(const ProcessTuple&) const = default;
};

// A dynamic-programming core over a fixed decomposition.  A core is built
// for one decomposition and precomputes, per node, the sorted list of
// transitions among reachable entries.  Semantics:
//  * a witness assigns an entry to every node so that each node's entry and
//    its children's entries form one of the node's process tuples and the
//    root entry is accepted;
//  * solution_bit says, for a leaf entry, whether the introduced vertex is in
//    the solution; the solution of a witness is the set of vertices whose
//    leaf bit is 1 (the monotone-core contract: the derived solution set
//    depends only on the leaf entries).
class DpCore {
public:
    virtual ~DpCore() = default;

    virtual const CwDecomposition& decomposition() const = 0;

    // Sorted and duplicate-free; tuples have node.arity() children.
    virtual const std::vector<ProcessTuple>& process(int node) const = 0;

    // Acceptance test for entries of the root node.
    virtual bool accepts(const Entry& entry) const = 0;

    // 0/1 solution membership for entries of Intro nodes; throws
    // std::logic_error when handed bytes that are not a leaf entry.
    virtual bool solution_bit(const Entry& leaf_entry) const = 0;

    // Short human-readable label ("vc:2", "ds:1", "mso:<name>").
    virtual std::string label() const = 0;
};

}  // namespace divcw
