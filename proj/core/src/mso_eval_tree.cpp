#include "divcw/mso/eval_tree.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <stdexcept>

#include "divcw/errors.hpp"

namespace divcw::mso {

namespace {

std::string sha256_16(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::logic_error("SHA-256 failed");
    return std::string(reinterpret_cast<char*>(digest), 16);
}

}  // namespace

void Configuration::set_adjacent(int s, int t) {
    if (s == t) return;
    adj_rows[s] |= static_cast<std::uint8_t>(1u << t);
    adj_rows[t] |= static_cast<std::uint8_t>(1u << s);
}

std::string Configuration::bytes() const {
    std::string out;
    out.reserve(8 + vertex_assign.size() + 2 * slot_color.size() + set_mask.size());
    out += static_cast<char>(level);
    out += static_cast<char>(slot_color.size());
    out += static_cast<char>(vertex_assign.size());
    for (std::uint8_t v : vertex_assign) out += static_cast<char>(v);
    for (std::uint8_t c : slot_color) out += static_cast<char>(c);
    for (std::uint8_t row : adj_rows) out += static_cast<char>(row);
    out += static_cast<char>(set_mask.size());
    for (std::uint8_t m : set_mask) out += static_cast<char>(m);
    return out;
}

TreeArena::TreeArena(const Formula& f, std::size_t budget) : formula_(&f), budget_(budget) {}

TreeArena::Ref TreeArena::intern(Node node) {
    auto it = by_digest_.find(node.digest);
    if (it != by_digest_.end()) return it->second;
    if (nodes_.size() >= budget_)
        throw budget_error("evaluation-tree arena exceeded its budget of " + std::to_string(budget_) +
                           " nodes (quantifier depth " + std::to_string(formula_->depth()) +
                           "); simplify the formula or raise the budget");
    Ref r = static_cast<Ref>(nodes_.size());
    by_digest_.emplace(node.digest, r);
    nodes_.push_back(std::move(node));
    return r;
}

TreeArena::Ref TreeArena::leaf(Configuration config) {
    if (config.level != formula_->depth()) throw std::logic_error("leaf configuration at wrong level");
    Node node;
    node.level = config.level;
    node.leaf = true;
    node.digest = sha256_16("L" + config.bytes());
    node.config = std::move(config);
    return intern(std::move(node));
}

namespace {

// Drops the last assigned variable from a configuration (the inverse of one
// assignment step); used to derive an inner node's configuration from its
// children's.
Configuration restrict_last(const Configuration& c, const Formula& f) {
    Configuration out = c;
    const Quantifier& var = f.prefix[c.level - 1];
    out.level = c.level - 1;
    if (var.sort == VarSort::Set) {
        out.set_mask.pop_back();
        return out;
    }
    std::uint8_t slot = out.vertex_assign.back();
    out.vertex_assign.pop_back();
    if (slot == Configuration::kExt) return out;
    for (std::uint8_t other : out.vertex_assign)
        if (other == slot) return out;  // slot still in use by an earlier variable
    // Sole user: slots are ordered by first assigner, so this is the last slot.
    if (slot != out.slot_color.size() - 1) throw std::logic_error("sole-user slot is not the last slot");
    out.slot_color.pop_back();
    out.adj_rows.pop_back();
    std::uint8_t keep = static_cast<std::uint8_t>(~(1u << slot));
    for (std::uint8_t& row : out.adj_rows) row &= keep;
    for (std::uint8_t& mask : out.set_mask) mask &= keep;
    return out;
}

}  // namespace

TreeArena::Ref TreeArena::inner(int level, std::vector<Ref> children) {
    if (children.empty()) throw std::logic_error("inner node without children");
    std::sort(children.begin(), children.end(),
              [this](Ref a, Ref b) { return nodes_[a].digest < nodes_[b].digest; });
    children.erase(std::unique(children.begin(), children.end()), children.end());

    std::string material = "I";
    material += static_cast<char>(level);
    for (Ref c : children) {
        if (nodes_[c].level != level + 1) throw std::logic_error("child level mismatch");
        material += nodes_[c].digest;
    }

    Node node;
    node.level = level;
    node.leaf = false;
    node.digest = sha256_16(material);
    node.config = restrict_last(nodes_[children[0]].config, *formula_);
    node.children = std::move(children);
    return intern(std::move(node));
}

// --- engine -------------------------------------------------------------

TreeEngine::TreeEngine(const Formula& f, int width, std::size_t budget)
    : formula_(&f), width_(width), arena_(f, budget) {
    if (f.depth() > kMaxQuantDepth)
        throw input_error("quantifier depth " + std::to_string(f.depth()) + " exceeds the supported maximum " +
                          std::to_string(kMaxQuantDepth));
    if (f.num_vertex_vars() < 1) throw input_error("the formula must quantify at least one vertex variable");
    if (width > 255) throw input_error("decomposition width > 255 is not supported by the formula engine");
    if (width < 1) throw input_error("decomposition width must be positive");
}

// vertex_choices / set_choices are the assignments so far for the one-vertex
// graph: per vertex variable 1 = the vertex, 0 = external; per set variable
// 1 = contains the vertex.
TreeEngine::Ref TreeEngine::build_leaf_tree(int level, std::uint8_t vertex_color,
                                            const std::vector<std::uint8_t>& vertex_choices,
                                            const std::vector<std::uint8_t>& set_choices) {
    const Formula& f = *formula_;
    if (level == f.depth()) {
        Configuration c;
        c.level = static_cast<std::uint8_t>(level);
        bool used = std::any_of(vertex_choices.begin(), vertex_choices.end(), [](std::uint8_t x) { return x; });
        if (used) {
            c.slot_color.push_back(vertex_color);
            c.adj_rows.push_back(0);
        }
        for (std::uint8_t choice : vertex_choices) c.vertex_assign.push_back(choice ? 0 : Configuration::kExt);
        for (std::uint8_t choice : set_choices) c.set_mask.push_back(choice && used ? 1 : 0);
        return arena_.leaf(std::move(c));
    }
    const Quantifier& q = f.prefix[level];
    std::vector<Ref> children;
    for (std::uint8_t choice : {std::uint8_t{0}, std::uint8_t{1}}) {
        std::vector<std::uint8_t> vc = vertex_choices;
        std::vector<std::uint8_t> sc = set_choices;
        if (q.sort == VarSort::Vertex) {
            // Variables may repeat vertices, so both choices stay available
            // even when an earlier variable already took this vertex.
            vc.push_back(choice);
        } else {
            sc.push_back(choice);
        }
        children.push_back(build_leaf_tree(level + 1, vertex_color, vc, sc));
    }
    return arena_.inner(level, std::move(children));
}

TreeEngine::Ref TreeEngine::leaf_tree(int color) {
    if (color < 1 || color > width_) throw input_error("color out of range");
    return build_leaf_tree(0, static_cast<std::uint8_t>(color), {}, {});
}

TreeEngine::Ref TreeEngine::leaf_subtree_level1(int color, bool include) {
    if (color < 1 || color > width_) throw input_error("color out of range");
    const Quantifier& q = formula_->prefix[0];
    std::vector<std::uint8_t> vc, sc;
    if (q.sort == VarSort::Vertex)
        vc.push_back(include ? 1 : 0);
    else
        sc.push_back(include ? 1 : 0);
    return build_leaf_tree(1, static_cast<std::uint8_t>(color), vc, sc);
}

namespace {

// Disjoint union of two configurations at the same level.  Every vertex
// variable must be external on at least one side.
Configuration config_union(const Configuration& c1, const Configuration& c2) {
    if (c1.level != c2.level) throw std::logic_error("configuration level mismatch in union");
    Configuration out;
    out.level = c1.level;

    // (side, old slot) -> new slot, in first-assignment order.
    std::map<std::pair<int, std::uint8_t>, std::uint8_t> remap;
    for (std::size_t i = 0; i < c1.vertex_assign.size(); ++i) {
        std::uint8_t s1 = c1.vertex_assign[i], s2 = c2.vertex_assign[i];
        if (s1 != Configuration::kExt && s2 != Configuration::kExt)
            throw std::logic_error("vertex variable concrete on both sides of a union");
        int side = s1 != Configuration::kExt ? 1 : 2;
        std::uint8_t old_slot = side == 1 ? s1 : s2;
        if (old_slot == Configuration::kExt) {
            out.vertex_assign.push_back(Configuration::kExt);
            continue;
        }
        const Configuration& c = side == 1 ? c1 : c2;
        auto [it, fresh] = remap.try_emplace({side, old_slot}, static_cast<std::uint8_t>(out.slot_color.size()));
        if (fresh) {
            out.slot_color.push_back(c.slot_color[old_slot]);
            out.adj_rows.push_back(0);
        }
        out.vertex_assign.push_back(it->second);
    }

    // Adjacency: copy within each side; nothing across (disjoint union).
    for (const auto& [key1, new1] : remap) {
        for (const auto& [key2, new2] : remap) {
            if (key1.first != key2.first || new2 <= new1) continue;
            const Configuration& c = key1.first == 1 ? c1 : c2;
            if (c.adjacent(key1.second, key2.second)) out.set_adjacent(new1, new2);
        }
    }

    // Set variables: union of the two sides' memberships, translated.
    out.set_mask.resize(c1.set_mask.size(), 0);
    for (const auto& [key, ns] : remap) {
        const Configuration& c = key.first == 1 ? c1 : c2;
        for (std::size_t j = 0; j < c.set_mask.size(); ++j)
            if (c.set_mask[j] & (1u << key.second)) out.set_mask[j] |= static_cast<std::uint8_t>(1u << ns);
    }
    return out;
}

}  // namespace

TreeEngine::Ref TreeEngine::ext_child(Ref t) const {
    const Ref* found = nullptr;
    for (const Ref& c : arena_.children(t)) {
        if (arena_.config(c).vertex_assign.back() == Configuration::kExt) {
            if (found) throw std::logic_error("two external children at a vertex level");
            found = &c;
        }
    }
    if (!found) throw std::logic_error("no external child at a vertex level");
    return *found;
}

TreeEngine::Ref TreeEngine::product(Ref a, Ref b) {
    if (arena_.level(a) != arena_.level(b)) throw std::logic_error("tree product level mismatch");
    auto it = product_memo_.find({a, b});
    if (it != product_memo_.end()) return it->second;

    Ref result;
    if (arena_.is_leaf(a)) {
        if (!arena_.is_leaf(b)) throw std::logic_error("leaf paired with inner node in product");
        result = arena_.leaf(config_union(arena_.config(a), arena_.config(b)));
    } else {
        const Quantifier& q = formula_->prefix[arena_.level(a)];
        std::vector<Ref> children;
        if (q.sort == VarSort::Set) {
            // A set choice may take vertices from both parts.
            for (Ref ca : arena_.children(a))
                for (Ref cb : arena_.children(b)) children.push_back(product(ca, cb));
        } else {
            // A vertex choice is concrete in one part and external in the other.
            Ref ea = ext_child(a), eb = ext_child(b);
            for (Ref ca : arena_.children(a)) children.push_back(product(ca, eb));
            for (Ref cb : arena_.children(b)) children.push_back(product(ea, cb));
        }
        result = arena_.inner(arena_.level(a), std::move(children));
    }
    product_memo_.emplace(std::make_pair(a, b), result);
    return result;
}

TreeEngine::Ref TreeEngine::rewrite(Ref t, std::map<std::tuple<Ref, int, int>, Ref>& memo, int a, int b,
                                    bool recolor_op) {
    auto it = memo.find({t, a, b});
    if (it != memo.end()) return it->second;

    Ref result;
    if (arena_.is_leaf(t)) {
        Configuration c = arena_.config(t);
        if (recolor_op) {
            for (std::uint8_t& color : c.slot_color)
                if (color == a) color = static_cast<std::uint8_t>(b);
        } else {
            for (int s = 0; s < c.num_slots(); ++s)
                for (int u = 0; u < c.num_slots(); ++u)
                    if (s != u && c.slot_color[s] == a && c.slot_color[u] == b) c.set_adjacent(s, u);
        }
        result = arena_.leaf(std::move(c));
    } else {
        std::vector<Ref> children;
        children.reserve(arena_.children(t).size());
        for (Ref c : arena_.children(t)) children.push_back(rewrite(c, memo, a, b, recolor_op));
        result = arena_.inner(arena_.level(t), std::move(children));
    }
    memo.emplace(std::make_tuple(t, a, b), result);
    return result;
}

TreeEngine::Ref TreeEngine::recolor(Ref t, int from, int to) {
    if (from < 1 || from > width_ || to < 1 || to > width_) throw input_error("color out of range");
    if (from == to) return t;
    return rewrite(t, recolor_memo_, from, to, true);
}

TreeEngine::Ref TreeEngine::add_edges(Ref t, int a, int b) {
    if (a < 1 || a > width_ || b < 1 || b > width_) throw input_error("color out of range");
    if (a == b) throw input_error("add_edges needs two distinct colors");
    return rewrite(t, add_edges_memo_, std::min(a, b), std::max(a, b), false);
}

namespace {

bool eval_matrix_config(const Expr& e, const Configuration& c) {
    using Op = Expr::Op;
    auto slot = [&](int vertex_var) {
        std::uint8_t s = c.vertex_assign.at(vertex_var);
        if (s == Configuration::kExt) throw std::logic_error("external assignment on a pruned path");
        return static_cast<int>(s);
    };
    switch (e.op) {
        case Op::Adj: return c.adjacent(slot(e.lhs_vertex), slot(e.rhs_vertex));
        case Op::Eq: return slot(e.lhs_vertex) == slot(e.rhs_vertex);
        case Op::In: return (c.set_mask.at(e.set_var) >> slot(e.lhs_vertex)) & 1u;
        case Op::Not: return !eval_matrix_config(*e.left, c);
        case Op::And: return eval_matrix_config(*e.left, c) && eval_matrix_config(*e.right, c);
        case Op::Or: return eval_matrix_config(*e.left, c) || eval_matrix_config(*e.right, c);
        case Op::Implies: return !eval_matrix_config(*e.left, c) || eval_matrix_config(*e.right, c);
    }
    return false;
}

}  // namespace

bool TreeEngine::eval(Ref t) {
    auto it = eval_memo_.find(t);
    if (it != eval_memo_.end()) return it->second;

    bool result;
    if (arena_.is_leaf(t)) {
        result = eval_matrix_config(*formula_->matrix, arena_.config(t));
    } else {
        const Quantifier& q = formula_->prefix[arena_.level(t)];
        bool is_exists = q.kind == QuantKind::Exists;
        result = !is_exists;
        for (Ref c : arena_.children(t)) {
            // Prune choices that put the vertex outside the graph: the
            // quantifier ranges over actual vertices only.
            if (q.sort == VarSort::Vertex && arena_.config(c).vertex_assign.back() == Configuration::kExt)
                continue;
            if (eval(c) == is_exists) {
                result = is_exists;
                break;
            }
        }
    }
    eval_memo_.emplace(t, result);
    return result;
}

}  // namespace divcw::mso
