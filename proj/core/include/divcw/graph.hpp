#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace divcw {

using Color = int;  // colors are 1-based: 1..width

// A vertex-colored graph.  Vertices are opaque names; indices are positions
// in `names` and are what edges and colors refer to.
struct ColoredGraph {
    std::vector<std::string> names;
    std::vector<Color> colors;                  // parallel to names
    std::set<std::pair<int, int>> edges;        // normalized: first < second

    int num_vertices() const { return static_cast<int>(names.size()); }
    int num_edges() const { return static_cast<int>(edges.size()); }

    int index_of(const std::string& name) const;  // -1 if absent
    bool has_edge(int u, int v) const;
    void add_edge(int u, int v);  // normalizes; rejects self-loops

    // Same vertex names and same edges (colors ignored).
    bool same_labeled_graph(const ColoredGraph& other) const;
};

// One node of a cliquewidth decomposition.
struct CwNode {
    enum class Kind { Intro, Union, Recolor, AddEdges };

    Kind kind;
    std::string id;       // explicit id from the file / generator
    std::string vertex;   // Intro only
    Color a = 0;          // Intro: the color; Recolor: from; AddEdges: first color
    Color b = 0;          // Recolor: to; AddEdges: second color
    int child1 = -1;      // Union/Recolor/AddEdges
    int child2 = -1;      // Union only
    int line = 0;         // source line, 0 for generated nodes

    int arity() const {
        switch (kind) {
            case Kind::Intro: return 0;
            case Kind::Union: return 2;
            default: return 1;
        }
    }
};

// A rooted cliquewidth decomposition.  `width` is the number of colors; the
// parser sets it to the maximum color mentioned anywhere in the file.
struct CwDecomposition {
    std::vector<CwNode> nodes;  // file / construction order
    int root = -1;              // index into nodes
    int width = 0;

    int num_nodes() const { return static_cast<int>(nodes.size()); }
    int num_vertices() const;                       // number of Intro nodes
    int node_index(const std::string& id) const;    // -1 if absent
    int leaf_of(const std::string& vertex) const;   // Intro node index, -1 if absent

    // Node indices in post order (children before parents), root last.
    // Only nodes reachable from the root appear.
    std::vector<int> post_order() const;
};

// --- parsing ------------------------------------------------------------

// Text format, one directive per line, '#' starts a comment:
//   intro <node-id> <vertex> <color>
//   union <node-id> <child-id> <child-id>
//   recolor <node-id> <child-id> <from> <to>
//   addedges <node-id> <child-id> <color> <color>
//   root <node-id>
// Throws parse_error on syntax errors, duplicate node ids, duplicate vertex
// introduction, dangling child references, multiple/missing root directives,
// and colors < 1.
CwDecomposition parse_decomposition(std::istream& in);
CwDecomposition parse_decomposition_file(const std::string& path);

// Renders a decomposition back into the text format accepted by
// parse_decomposition (used by the generator command).
std::string format_decomposition(const CwDecomposition& d);

// Plain graph text format, one directive per line, '#' starts a comment:
//   v <name>
//   e <name> <name>
// Throws parse_error on duplicate vertices, unknown endpoints, self-loops and
// duplicate edges.  All colors are set to 1.
ColoredGraph parse_graph(std::istream& in);
ColoredGraph parse_graph_file(const std::string& path);

// --- structural validation ----------------------------------------------

// Returns human-readable violations; empty means the decomposition is valid:
// the nodes reachable from the root form a tree (every non-root node has
// exactly one parent), children exist, every vertex is introduced exactly
// once, all colors lie in [1, width], and addedges uses two distinct colors.
std::vector<std::string> validate(const CwDecomposition& d);

// --- evaluation -----------------------------------------------------------

// Builds the colored graph of the root node.  Requires validate(d).empty();
// throws input_error otherwise.  Vertex order is Intro order in post order,
// so two runs produce identical output.
ColoredGraph evaluate(const CwDecomposition& d);

// Per-node color histograms: result[t][c] = number of vertices of color c in
// the graph of node t (index 0 unused).  Same precondition as evaluate.
std::vector<std::vector<int>> color_counts(const CwDecomposition& d);

// --- generators -----------------------------------------------------------

// Path v1-v2-...-vn, width <= 3.
CwDecomposition gen_path(int n);
// Complete graph on v1..vn, width <= 2.
CwDecomposition gen_clique(int n);
// Complete bipartite graph a1..ap vs b1..bq, width 2.
CwDecomposition gen_complete_bipartite(int p, int q);

}  // namespace divcw
