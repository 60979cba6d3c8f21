#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "divcw/mso/formula.hpp"

namespace divcw::mso {

inline constexpr int kMaxQuantDepth = 6;
inline constexpr std::size_t kDefaultArenaBudget = 2'000'000;

// A configuration: what a partial assignment of the quantifier prefix looks
// like from inside one part of the graph.  Slots are the distinct concrete
// vertices assigned to vertex variables so far, ordered by the first
// variable that assigned them; everything else about those vertices
// (colors, induced adjacency, membership in assigned set variables) is
// recorded, and vertex variables assigned outside this part are marked
// external.
struct Configuration {
    static constexpr std::uint8_t kExt = 0xFF;

    std::uint8_t level = 0;                    // number of assigned prefix variables
    std::vector<std::uint8_t> vertex_assign;   // per assigned vertex variable: slot index or kExt
    std::vector<std::uint8_t> slot_color;      // per slot: color (1..width, width <= 255)
    std::vector<std::uint8_t> adj_rows;        // per slot: bitmask over slots (symmetric, no loops)
    std::vector<std::uint8_t> set_mask;        // per assigned set variable: bitmask over slots

    int num_slots() const { return static_cast<int>(slot_color.size()); }
    bool adjacent(int s, int t) const { return s != t && (adj_rows[s] & (1u << t)); }
    void set_adjacent(int s, int t);

    // Canonical serialization; configurations are equal iff bytes are equal.
    std::string bytes() const;

    auto operator<=>(const Configuration&) const = default;
};

// Hash-consed store of reduced evaluation trees for one formula.  A node is
// identified by a digest of its structure (leaf: its configuration; inner:
// the sorted set of child digests), so ids are independent of insertion
// order and equal digests mean equal reduced trees.
class TreeArena {
public:
    using Ref = std::uint32_t;

    TreeArena(const Formula& f, std::size_t budget);

    Ref leaf(Configuration config);
    // children are deduplicated and sorted by digest; must be non-empty and
    // one level below.  The node's own configuration is derived by
    // restricting the first child's.
    Ref inner(int level, std::vector<Ref> children);

    const Formula& formula() const { return *formula_; }
    int level(Ref r) const { return nodes_[r].level; }
    bool is_leaf(Ref r) const { return nodes_[r].leaf; }
    const Configuration& config(Ref r) const { return nodes_[r].config; }
    const std::vector<Ref>& children(Ref r) const { return nodes_[r].children; }
    const std::string& digest(Ref r) const { return nodes_[r].digest; }
    std::size_t size() const { return nodes_.size(); }

private:
    struct Node {
        int level;
        bool leaf;
        Configuration config;
        std::vector<Ref> children;
        std::string digest;
    };

    Ref intern(Node node);

    const Formula* formula_;
    std::size_t budget_;
    std::vector<Node> nodes_;
    std::unordered_map<std::string, Ref> by_digest_;
};

// Bundles an arena with the operations of the decomposition induction and
// their memo tables.  All operations are deterministic and their results
// depend only on the (structural) inputs.
class TreeEngine {
public:
    using Ref = TreeArena::Ref;

    // Throws input_error for quantifier depth > 6, width > 255, or a prefix
    // with no vertex variable.
    TreeEngine(const Formula& f, int width, std::size_t budget = kDefaultArenaBudget);

    const TreeArena& arena() const { return arena_; }
    const Formula& formula() const { return *formula_; }

    // Full reduced tree (level 0) of the one-vertex graph with this color.
    Ref leaf_tree(int color);
    // Reduced subtree of the one-vertex graph below a fixed choice of the
    // first variable; meaningful when the first variable is a set variable
    // (include = whether the vertex is in it).
    Ref leaf_subtree_level1(int color, bool include);

    // Reduced tree of the disjoint union of the two parts (any level).
    Ref product(Ref a, Ref b);
    // Rewrites for the two unary decomposition operations.
    Ref recolor(Ref t, int from, int to);
    Ref add_edges(Ref t, int a, int b);

    // Truth of the subtree rooted at t: quantifier recursion over the
    // remaining levels with external branches pruned; the matrix is
    // evaluated at leaves.  Every vertex variable assigned before level(t)
    // must be concrete on pruned paths.
    bool eval(Ref t);

private:
    Ref build_leaf_tree(int level, std::uint8_t vertex_color, const std::vector<std::uint8_t>& vertex_choices,
                        const std::vector<std::uint8_t>& set_choices);
    Ref rewrite(Ref t, std::map<std::tuple<Ref, int, int>, Ref>& memo, int a, int b, bool recolor_op);
    Ref ext_child(Ref t) const;

    const Formula* formula_;
    int width_;
    TreeArena arena_;
    std::map<std::pair<Ref, Ref>, Ref> product_memo_;
    std::map<std::tuple<Ref, int, int>, Ref> recolor_memo_;
    std::map<std::tuple<Ref, int, int>, Ref> add_edges_memo_;
    std::map<Ref, bool> eval_memo_;
};

}  // namespace divcw::mso
