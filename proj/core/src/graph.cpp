#include "divcw/graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "divcw/errors.hpp"

namespace divcw {

int ColoredGraph::index_of(const std::string& name) const {
    for (int i = 0; i < num_vertices(); ++i)
        if (names[i] == name) return i;
    return -1;
}

bool ColoredGraph::has_edge(int u, int v) const {
    if (u > v) std::swap(u, v);
    return edges.count({u, v}) != 0;
}

void ColoredGraph::add_edge(int u, int v) {
    if (u == v) throw input_error("self-loop on vertex '" + names[u] + "'");
    if (u > v) std::swap(u, v);
    edges.insert({u, v});
}

bool ColoredGraph::same_labeled_graph(const ColoredGraph& other) const {
    std::set<std::string> mine(names.begin(), names.end());
    std::set<std::string> theirs(other.names.begin(), other.names.end());
    if (mine != theirs) return false;
    std::set<std::pair<std::string, std::string>> my_edges, their_edges;
    auto collect = [](const ColoredGraph& g, std::set<std::pair<std::string, std::string>>& out) {
        for (auto [u, v] : g.edges) {
            std::string a = g.names[u], b = g.names[v];
            if (b < a) std::swap(a, b);
            out.insert({a, b});
        }
    };
    collect(*this, my_edges);
    collect(other, their_edges);
    return my_edges == their_edges;
}

int CwDecomposition::num_vertices() const {
    int n = 0;
    for (const auto& node : nodes)
        if (node.kind == CwNode::Kind::Intro) ++n;
    return n;
}

int CwDecomposition::node_index(const std::string& id) const {
    for (int i = 0; i < num_nodes(); ++i)
        if (nodes[i].id == id) return i;
    return -1;
}

int CwDecomposition::leaf_of(const std::string& vertex) const {
    for (int i = 0; i < num_nodes(); ++i)
        if (nodes[i].kind == CwNode::Kind::Intro && nodes[i].vertex == vertex) return i;
    return -1;
}

std::vector<int> CwDecomposition::post_order() const {
    std::vector<int> order;
    if (root < 0) return order;
    // Iterative post order; the tree shape has been validated before any
    // caller that relies on this, but guard against cycles anyway.
    std::vector<std::pair<int, int>> stack{{root, 0}};  // (node, next child slot)
    std::vector<char> on_stack(nodes.size(), 0);
    on_stack[root] = 1;
    while (!stack.empty()) {
        auto& [t, slot] = stack.back();
        const CwNode& node = nodes[t];
        int child = -1;
        if (slot == 0 && node.arity() >= 1) child = node.child1;
        if (slot == 1 && node.arity() >= 2) child = node.child2;
        if (child >= 0 && slot < node.arity()) {
            ++slot;
            if (on_stack[child]) throw input_error("decomposition contains a cycle at node '" + nodes[child].id + "'");
            stack.push_back({child, 0});
            on_stack[child] = 1;
        } else {
            order.push_back(t);
            on_stack[t] = 0;
            stack.pop_back();
        }
    }
    return order;
}

namespace {

struct RawLine {
    int line;
    std::vector<std::string> tokens;
    std::vector<int> columns;  // 1-based start column of each token
};

std::vector<RawLine> tokenize_lines(std::istream& in) {
    std::vector<RawLine> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        RawLine raw;
        raw.line = lineno;
        std::string token;
        int col = 0, token_start = 0;
        auto flush = [&]() {
            if (!token.empty()) {
                raw.tokens.push_back(token);
                raw.columns.push_back(token_start);
                token.clear();
            }
        };
        for (char c : line) {
            ++col;
            if (c == '#') break;
            if (std::isspace(static_cast<unsigned char>(c))) {
                flush();
            } else {
                if (token.empty()) token_start = col;
                token += c;
            }
        }
        flush();
        if (!raw.tokens.empty()) out.push_back(std::move(raw));
    }
    return out;
}

int parse_color(const RawLine& raw, size_t idx, const char* what) {
    const std::string& tok = raw.tokens[idx];
    size_t pos = 0;
    long value = 0;
    try {
        value = std::stol(tok, &pos);
    } catch (const std::exception&) {
        throw parse_error(std::string("expected ") + what + ", got '" + tok + "'", raw.line, raw.columns[idx]);
    }
    if (pos != tok.size())
        throw parse_error(std::string("expected ") + what + ", got '" + tok + "'", raw.line, raw.columns[idx]);
    if (value < 1 || value > 1 << 20)
        throw parse_error(std::string(what) + " out of range: " + tok, raw.line, raw.columns[idx]);
    return static_cast<int>(value);
}

void require_tokens(const RawLine& raw, size_t count, const char* usage) {
    if (raw.tokens.size() != count)
        throw parse_error(std::string("expected '") + usage + "'", raw.line, raw.columns[0]);
}

}  // namespace

CwDecomposition parse_decomposition(std::istream& in) {
    CwDecomposition d;
    std::unordered_map<std::string, int> by_id;
    std::unordered_map<std::string, int> vertex_line;
    // Children may be forward references, so collect raw child ids first.
    std::vector<std::pair<std::string, std::string>> raw_children;  // (c1, c2) per node
    std::vector<int> claim_line;
    std::string root_id;
    int root_line = 0;

    for (const RawLine& raw : tokenize_lines(in)) {
        const std::string& directive = raw.tokens[0];
        if (directive == "root") {
            require_tokens(raw, 2, "root <node-id>");
            if (!root_id.empty())
                throw parse_error("multiple root directives (previous on line " + std::to_string(root_line) + ")",
                                  raw.line, raw.columns[0]);
            root_id = raw.tokens[1];
            root_line = raw.line;
            continue;
        }

        CwNode node;
        std::string c1, c2;
        if (directive == "intro") {
            require_tokens(raw, 4, "intro <node-id> <vertex> <color>");
            node.kind = CwNode::Kind::Intro;
            node.id = raw.tokens[1];
            node.vertex = raw.tokens[2];
            node.a = parse_color(raw, 3, "color");
            auto [it, fresh] = vertex_line.try_emplace(node.vertex, raw.line);
            if (!fresh)
                throw parse_error("vertex '" + node.vertex + "' introduced more than once (first on line " +
                                      std::to_string(it->second) + ")",
                                  raw.line, raw.columns[2]);
        } else if (directive == "union") {
            require_tokens(raw, 4, "union <node-id> <child-id> <child-id>");
            node.kind = CwNode::Kind::Union;
            node.id = raw.tokens[1];
            c1 = raw.tokens[2];
            c2 = raw.tokens[3];
        } else if (directive == "recolor") {
            require_tokens(raw, 5, "recolor <node-id> <child-id> <from> <to>");
            node.kind = CwNode::Kind::Recolor;
            node.id = raw.tokens[1];
            c1 = raw.tokens[2];
            node.a = parse_color(raw, 3, "color");
            node.b = parse_color(raw, 4, "color");
        } else if (directive == "addedges") {
            require_tokens(raw, 5, "addedges <node-id> <child-id> <color> <color>");
            node.kind = CwNode::Kind::AddEdges;
            node.id = raw.tokens[1];
            c1 = raw.tokens[2];
            node.a = parse_color(raw, 3, "color");
            node.b = parse_color(raw, 4, "color");
        } else {
            throw parse_error("unknown directive '" + directive + "'", raw.line, raw.columns[0]);
        }

        node.line = raw.line;
        auto [it, fresh] = by_id.try_emplace(node.id, d.num_nodes());
        if (!fresh)
            throw parse_error("duplicate node id '" + node.id + "' (first on line " +
                                  std::to_string(d.nodes[it->second].line) + ")",
                              raw.line, raw.columns[1]);
        d.nodes.push_back(std::move(node));
        raw_children.push_back({c1, c2});
        claim_line.push_back(raw.line);
    }

    // Resolve children.
    for (int i = 0; i < d.num_nodes(); ++i) {
        auto resolve = [&](const std::string& id) {
            auto it = by_id.find(id);
            if (it == by_id.end())
                throw parse_error("dangling child reference '" + id + "'", claim_line[i], 1);
            return it->second;
        };
        if (!raw_children[i].first.empty()) d.nodes[i].child1 = resolve(raw_children[i].first);
        if (!raw_children[i].second.empty()) d.nodes[i].child2 = resolve(raw_children[i].second);
    }

    if (root_id.empty()) throw parse_error("missing root directive", 1, 1);
    auto it = by_id.find(root_id);
    if (it == by_id.end()) throw parse_error("root references unknown node '" + root_id + "'", root_line, 1);
    d.root = it->second;

    for (const CwNode& node : d.nodes) d.width = std::max({d.width, node.a, node.b});
    return d;
}

CwDecomposition parse_decomposition_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open decomposition file '" + path + "'");
    return parse_decomposition(in);
}

std::string format_decomposition(const CwDecomposition& d) {
    std::ostringstream out;
    for (const CwNode& node : d.nodes) {
        switch (node.kind) {
            case CwNode::Kind::Intro:
                out << "intro " << node.id << ' ' << node.vertex << ' ' << node.a << '\n';
                break;
            case CwNode::Kind::Union:
                out << "union " << node.id << ' ' << d.nodes[node.child1].id << ' ' << d.nodes[node.child2].id << '\n';
                break;
            case CwNode::Kind::Recolor:
                out << "recolor " << node.id << ' ' << d.nodes[node.child1].id << ' ' << node.a << ' ' << node.b
                    << '\n';
                break;
            case CwNode::Kind::AddEdges:
                out << "addedges " << node.id << ' ' << d.nodes[node.child1].id << ' ' << node.a << ' ' << node.b
                    << '\n';
                break;
        }
    }
    if (d.root >= 0) out << "root " << d.nodes[d.root].id << '\n';
    return out.str();
}

ColoredGraph parse_graph(std::istream& in) {
    ColoredGraph g;
    std::unordered_map<std::string, int> by_name;
    for (const RawLine& raw : tokenize_lines(in)) {
        const std::string& directive = raw.tokens[0];
        if (directive == "v") {
            require_tokens(raw, 2, "v <name>");
            auto [it, fresh] = by_name.try_emplace(raw.tokens[1], g.num_vertices());
            if (!fresh) throw parse_error("duplicate vertex '" + raw.tokens[1] + "'", raw.line, raw.columns[1]);
            g.names.push_back(raw.tokens[1]);
            g.colors.push_back(1);
        } else if (directive == "e") {
            require_tokens(raw, 3, "e <name> <name>");
            auto lookup = [&](size_t idx) {
                auto it = by_name.find(raw.tokens[idx]);
                if (it == by_name.end())
                    throw parse_error("edge references unknown vertex '" + raw.tokens[idx] + "'", raw.line,
                                      raw.columns[idx]);
                return it->second;
            };
            int u = lookup(1), v = lookup(2);
            if (u == v) throw parse_error("self-loop on '" + raw.tokens[1] + "'", raw.line, raw.columns[1]);
            if (u > v) std::swap(u, v);
            if (!g.edges.insert({u, v}).second)
                throw parse_error("duplicate edge '" + raw.tokens[1] + " " + raw.tokens[2] + "'", raw.line,
                                  raw.columns[0]);
        } else {
            throw parse_error("unknown directive '" + directive + "'", raw.line, raw.columns[0]);
        }
    }
    return g;
}

ColoredGraph parse_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open graph file '" + path + "'");
    return parse_graph(in);
}

std::vector<std::string> validate(const CwDecomposition& d) {
    std::vector<std::string> violations;
    auto complain = [&](const std::string& msg) { violations.push_back(msg); };

    if (d.root < 0 || d.root >= d.num_nodes()) {
        complain("root is not a valid node");
        return violations;
    }

    std::vector<int> parents(d.nodes.size(), 0);
    std::set<std::string> seen_vertices;
    for (int i = 0; i < d.num_nodes(); ++i) {
        const CwNode& node = d.nodes[i];
        auto check_child = [&](int c, const char* slot) {
            if (c < 0 || c >= d.num_nodes()) {
                complain("node '" + node.id + "' has an invalid " + slot + " child");
                return;
            }
            ++parents[c];
            if (parents[c] == 2) complain("node '" + d.nodes[c].id + "' has multiple parents");
        };
        if (node.arity() >= 1) check_child(node.child1, "first");
        if (node.arity() >= 2) check_child(node.child2, "second");

        auto check_color = [&](Color c, const char* what) {
            if (c < 1 || c > d.width)
                complain(std::string(what) + " out of range at node '" + node.id + "': " + std::to_string(c));
        };
        switch (node.kind) {
            case CwNode::Kind::Intro:
                check_color(node.a, "color");
                if (!seen_vertices.insert(node.vertex).second)
                    complain("vertex '" + node.vertex + "' introduced more than once");
                break;
            case CwNode::Kind::Union:
                break;
            case CwNode::Kind::Recolor:
                check_color(node.a, "color");
                check_color(node.b, "color");
                break;
            case CwNode::Kind::AddEdges:
                check_color(node.a, "color");
                check_color(node.b, "color");
                if (node.a == node.b) complain("addedges with equal colors at node '" + node.id + "'");
                break;
        }
    }
    if (!violations.empty()) return violations;  // child indices may be bad; stop before traversing

    if (parents[d.root] != 0) complain("root node '" + d.nodes[d.root].id + "' has a parent");
    for (int i = 0; i < d.num_nodes(); ++i)
        if (i != d.root && parents[i] == 0) complain("node '" + d.nodes[i].id + "' has no parent");
    if (!violations.empty()) return violations;

    // All parent counts are right, so reachable-from-root now means tree.
    try {
        std::vector<int> order = d.post_order();
        if (static_cast<int>(order.size()) != d.num_nodes())
            complain("decomposition has nodes unreachable from the root");
    } catch (const input_error& e) {
        complain(e.what());
    }
    return violations;
}

ColoredGraph evaluate(const CwDecomposition& d) {
    std::vector<std::string> violations = validate(d);
    if (!violations.empty()) throw input_error("invalid decomposition: " + violations.front());

    std::vector<ColoredGraph> value(d.nodes.size());
    for (int t : d.post_order()) {
        const CwNode& node = d.nodes[t];
        ColoredGraph g;
        switch (node.kind) {
            case CwNode::Kind::Intro:
                g.names.push_back(node.vertex);
                g.colors.push_back(node.a);
                break;
            case CwNode::Kind::Union: {
                const ColoredGraph& g1 = value[node.child1];
                const ColoredGraph& g2 = value[node.child2];
                g = g1;
                int offset = g1.num_vertices();
                for (int i = 0; i < g2.num_vertices(); ++i) {
                    // validate() guarantees globally unique vertices, so the
                    // union is disjoint by construction.
                    g.names.push_back(g2.names[i]);
                    g.colors.push_back(g2.colors[i]);
                }
                for (auto [u, v] : g2.edges) g.edges.insert({u + offset, v + offset});
                break;
            }
            case CwNode::Kind::Recolor: {
                g = value[node.child1];
                for (Color& c : g.colors)
                    if (c == node.a) c = node.b;
                break;
            }
            case CwNode::Kind::AddEdges: {
                g = value[node.child1];
                for (int u = 0; u < g.num_vertices(); ++u)
                    for (int v = 0; v < g.num_vertices(); ++v)
                        if (u != v && g.colors[u] == node.a && g.colors[v] == node.b) g.add_edge(u, v);
                break;
            }
        }
        value[t] = std::move(g);
        // Free children eagerly: every node has at most one parent.
        if (node.arity() >= 1) value[node.child1] = ColoredGraph{};
        if (node.arity() >= 2) value[node.child2] = ColoredGraph{};
    }
    return value[d.root];
}

std::vector<std::vector<int>> color_counts(const CwDecomposition& d) {
    std::vector<std::string> violations = validate(d);
    if (!violations.empty()) throw input_error("invalid decomposition: " + violations.front());

    std::vector<std::vector<int>> counts(d.nodes.size(), std::vector<int>(d.width + 1, 0));
    for (int t : d.post_order()) {
        const CwNode& node = d.nodes[t];
        switch (node.kind) {
            case CwNode::Kind::Intro:
                counts[t][node.a] = 1;
                break;
            case CwNode::Kind::Union:
                for (int c = 1; c <= d.width; ++c)
                    counts[t][c] = counts[node.child1][c] + counts[node.child2][c];
                break;
            case CwNode::Kind::Recolor:
                counts[t] = counts[node.child1];
                if (node.a != node.b) {
                    counts[t][node.b] += counts[t][node.a];
                    counts[t][node.a] = 0;
                }
                break;
            case CwNode::Kind::AddEdges:
                counts[t] = counts[node.child1];
                break;
        }
    }
    return counts;
}

namespace {

class Builder {
public:
    // Appends a node and returns its id string.
    std::string intro(const std::string& vertex, Color color) {
        CwNode node;
        node.kind = CwNode::Kind::Intro;
        node.id = next_id();
        node.vertex = vertex;
        node.a = color;
        d_.nodes.push_back(node);
        return node.id;
    }
    std::string join(const std::string& c1, const std::string& c2) {
        CwNode node;
        node.kind = CwNode::Kind::Union;
        node.id = next_id();
        node.child1 = d_.node_index(c1);
        node.child2 = d_.node_index(c2);
        d_.nodes.push_back(node);
        return node.id;
    }
    std::string recolor(const std::string& c, Color from, Color to) {
        CwNode node;
        node.kind = CwNode::Kind::Recolor;
        node.id = next_id();
        node.child1 = d_.node_index(c);
        node.a = from;
        node.b = to;
        d_.nodes.push_back(node);
        return node.id;
    }
    std::string add_edges(const std::string& c, Color a, Color b) {
        CwNode node;
        node.kind = CwNode::Kind::AddEdges;
        node.id = next_id();
        node.child1 = d_.node_index(c);
        node.a = a;
        node.b = b;
        d_.nodes.push_back(node);
        return node.id;
    }
    CwDecomposition finish(const std::string& root_id) {
        d_.root = d_.node_index(root_id);
        for (const CwNode& node : d_.nodes) d_.width = std::max({d_.width, node.a, node.b});
        return std::move(d_);
    }

private:
    std::string next_id() { return "t" + std::to_string(++counter_); }
    CwDecomposition d_;
    int counter_ = 0;
};

void check_positive(int n, const char* what) {
    if (n < 1) throw input_error(std::string(what) + " must be at least 1");
}

}  // namespace

CwDecomposition gen_path(int n) {
    check_positive(n, "path length");
    Builder b;
    // Color 1: interior vertices, color 2: current right end, color 3: the
    // vertex being attached.
    std::string cur = b.intro("v1", n == 1 ? 1 : 2);
    for (int i = 2; i <= n; ++i) {
        std::string leaf = b.intro("v" + std::to_string(i), 3);
        cur = b.join(cur, leaf);
        cur = b.add_edges(cur, 2, 3);
        cur = b.recolor(cur, 2, 1);
        cur = b.recolor(cur, 3, 2);
    }
    return b.finish(cur);
}

CwDecomposition gen_clique(int n) {
    check_positive(n, "clique size");
    Builder b;
    std::string cur = b.intro("v1", 1);
    for (int i = 2; i <= n; ++i) {
        std::string leaf = b.intro("v" + std::to_string(i), 2);
        cur = b.join(cur, leaf);
        cur = b.add_edges(cur, 1, 2);
        cur = b.recolor(cur, 2, 1);
    }
    return b.finish(cur);
}

CwDecomposition gen_complete_bipartite(int p, int q) {
    check_positive(p, "first side size");
    check_positive(q, "second side size");
    Builder b;
    std::string left = b.intro("a1", 1);
    for (int i = 2; i <= p; ++i) left = b.join(left, b.intro("a" + std::to_string(i), 1));
    std::string right = b.intro("b1", 2);
    for (int i = 2; i <= q; ++i) right = b.join(right, b.intro("b" + std::to_string(i), 2));
    std::string all = b.join(left, right);
    all = b.add_edges(all, 1, 2);
    return b.finish(all);
}

}  // namespace divcw
