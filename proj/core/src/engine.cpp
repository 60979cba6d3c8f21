#include "divcw/engine.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "divcw/errors.hpp"

namespace divcw {

namespace {

using KeyTuple = std::vector<Entry>;

void check_cores(const std::vector<const DpCore*>& cores, const CwDecomposition& d) {
    if (cores.empty()) throw input_error("need at least one core");
    for (const DpCore* core : cores) {
        if (core == nullptr) throw std::logic_error("null core");
        if (&core->decomposition() != &d)
            throw std::logic_error("core '" + core->label() + "' was built for a different decomposition");
    }
}

void check_tuple_arity(const CwNode& node, const ProcessTuple& tuple, const DpCore& core) {
    if (static_cast<int>(tuple.children.size()) != node.arity())
        throw std::logic_error("core '" + core.label() + "' emitted an arity-" +
                               std::to_string(tuple.children.size()) + " tuple at an arity-" +
                               std::to_string(node.arity()) + " node");
}

// Per-core transition lookups at one node, keyed by the child entries.
struct UnaryIndex {
    std::map<Entry, std::vector<Entry>> parents;  // child entry -> parents, sorted
};
struct BinaryIndex {
    std::map<std::pair<Entry, Entry>, std::vector<Entry>> parents;
};

UnaryIndex unary_index(const DpCore& core, const CwNode& node, int t) {
    UnaryIndex idx;
    for (const ProcessTuple& tuple : core.process(t)) {
        check_tuple_arity(node, tuple, core);
        idx.parents[tuple.children[0]].push_back(tuple.parent);
    }
    return idx;
}

BinaryIndex binary_index(const DpCore& core, const CwNode& node, int t) {
    BinaryIndex idx;
    for (const ProcessTuple& tuple : core.process(t)) {
        check_tuple_arity(node, tuple, core);
        idx.parents[{tuple.children[0], tuple.children[1]}].push_back(tuple.parent);
    }
    return idx;
}

// Enumerates the cartesian product of r entry lists in lexicographic order.
template <typename Fn>
void for_each_key(const std::vector<const std::vector<Entry>*>& lists, Fn&& fn) {
    KeyTuple key(lists.size());
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == lists.size()) {
            fn(key);
            return;
        }
        for (const Entry& e : *lists[i]) {
            key[i] = e;
            self(self, i + 1);
        }
    };
    rec(rec, 0);
}

}  // namespace

std::vector<std::vector<Entry>> reachable_entries(const DpCore& core, const CwDecomposition& d) {
    if (&core.decomposition() != &d) throw std::logic_error("core was built for a different decomposition");
    std::vector<std::set<Entry>> reach(d.num_nodes());
    for (int t : d.post_order()) {
        const CwNode& node = d.nodes[t];
        for (const ProcessTuple& tuple : core.process(t)) {
            check_tuple_arity(node, tuple, core);
            bool ok = true;
            if (node.arity() >= 1) ok = ok && reach[node.child1].count(tuple.children[0]);
            if (node.arity() >= 2) ok = ok && reach[node.child2].count(tuple.children[1]);
            if (ok) reach[t].insert(tuple.parent);
        }
    }
    std::vector<std::vector<Entry>> out(d.num_nodes());
    for (int t = 0; t < d.num_nodes(); ++t) out[t].assign(reach[t].begin(), reach[t].end());
    return out;
}

std::optional<Witness> solve_single(const DpCore& core, const CwDecomposition& d) {
    check_cores({&core}, d);
    // chosen[t][w] = lexicographically least transition deriving w at t from
    // reachable child entries.
    std::vector<std::map<Entry, const ProcessTuple*>> chosen(d.num_nodes());
    for (int t : d.post_order()) {
        const CwNode& node = d.nodes[t];
        for (const ProcessTuple& tuple : core.process(t)) {
            check_tuple_arity(node, tuple, core);
            bool ok = true;
            if (node.arity() >= 1) ok = ok && chosen[node.child1].count(tuple.children[0]);
            if (node.arity() >= 2) ok = ok && chosen[node.child2].count(tuple.children[1]);
            if (!ok) continue;
            chosen[t].try_emplace(tuple.parent, &tuple);  // first hit is lex-least: process is sorted
        }
    }

    const Entry* root_entry = nullptr;
    for (const auto& [entry, tuple] : chosen[d.root])
        if (core.accepts(entry)) {
            root_entry = &entry;
            break;
        }
    if (root_entry == nullptr) return std::nullopt;

    Witness w;
    w.entry.resize(d.num_nodes());
    // Walk down from the root along chosen transitions.
    std::vector<std::pair<int, Entry>> stack{{d.root, *root_entry}};
    while (!stack.empty()) {
        auto [t, entry] = std::move(stack.back());
        stack.pop_back();
        w.entry[t] = entry;
        const CwNode& node = d.nodes[t];
        const ProcessTuple* tuple = chosen[t].at(entry);
        if (node.arity() >= 1) stack.push_back({node.child1, tuple->children[0]});
        if (node.arity() >= 2) stack.push_back({node.child2, tuple->children[1]});
    }
    return w;
}

VertexSet extract_solution(const DpCore& core, const CwDecomposition& d, const Witness& w) {
    if (static_cast<int>(w.entry.size()) != d.num_nodes()) throw std::logic_error("witness size mismatch");
    VertexSet s;
    for (int t = 0; t < d.num_nodes(); ++t) {
        const CwNode& node = d.nodes[t];
        if (node.kind != CwNode::Kind::Intro) continue;
        if (w.entry[t].bytes.empty()) throw std::logic_error("witness missing an entry at leaf '" + node.id + "'");
        if (core.solution_bit(w.entry[t])) s.insert(node.vertex);
    }
    return s;
}

// --- diversity-maximizing product program -----------------------------------

namespace {

struct DiverseCell {
    std::uint64_t value = 0;
    std::vector<KeyTuple> back;  // child keys, in child order
};

using DiverseTable = std::map<KeyTuple, DiverseCell>;

void offer(DiverseTable& table, const KeyTuple& key, std::uint64_t value, std::vector<KeyTuple> back) {
    auto [it, fresh] = table.try_emplace(key);
    if (fresh || value > it->second.value || (value == it->second.value && back < it->second.back)) {
        it->second.value = value;
        it->second.back = std::move(back);
    }
}

std::vector<DiverseTable> build_diverse_tables(const std::vector<const DpCore*>& cores, const VennMeasure& f,
                                               const CwDecomposition& d) {
    check_cores(cores, d);
    const std::size_t r = cores.size();
    if (f.r != static_cast<int>(r))
        throw input_error("measure arity " + std::to_string(f.r) + " does not match the number of cores " +
                          std::to_string(r));

    const std::uint64_t n = d.num_vertices();
    const std::uint64_t f0 = f.at_empty();
    const std::uint64_t slack = checked_mul(n, f0);  // subtracted once per union

    std::vector<DiverseTable> tables(d.num_nodes());
    for (int t : d.post_order()) {
        const CwNode& node = d.nodes[t];
        DiverseTable& table = tables[t];
        switch (node.arity()) {
            case 0: {
                std::vector<const std::vector<Entry>*> lists(r);
                std::vector<std::vector<Entry>> own(r);
                for (std::size_t i = 0; i < r; ++i) {
                    for (const ProcessTuple& tuple : cores[i]->process(t)) {
                        check_tuple_arity(node, tuple, *cores[i]);
                        own[i].push_back(tuple.parent);
                    }
                    lists[i] = &own[i];
                }
                for_each_key(lists, [&](const KeyTuple& key) {
                    unsigned m = 0;
                    for (std::size_t i = 0; i < r; ++i)
                        if (cores[i]->solution_bit(key[i])) m |= 1u << i;
                    // The other n-1 vertices are not introduced yet; they
                    // contribute f(empty) each so sums over subtrees combine
                    // additively at unions.
                    std::uint64_t value = checked_add(f.at(m), checked_mul(n - 1, f0));
                    offer(table, key, value, {});
                });
                break;
            }
            case 1: {
                std::vector<UnaryIndex> idx;
                idx.reserve(r);
                for (std::size_t i = 0; i < r; ++i) idx.push_back(unary_index(*cores[i], node, t));
                for (const auto& [child_key, child_cell] : tables[node.child1]) {
                    std::vector<const std::vector<Entry>*> lists(r);
                    bool ok = true;
                    for (std::size_t i = 0; i < r && ok; ++i) {
                        auto it = idx[i].parents.find(child_key[i]);
                        if (it == idx[i].parents.end())
                            ok = false;
                        else
                            lists[i] = &it->second;
                    }
                    if (!ok) continue;
                    for_each_key(lists,
                                 [&](const KeyTuple& key) { offer(table, key, child_cell.value, {child_key}); });
                }
                break;
            }
            case 2: {
                std::vector<BinaryIndex> idx;
                idx.reserve(r);
                for (std::size_t i = 0; i < r; ++i) idx.push_back(binary_index(*cores[i], node, t));
                for (const auto& [key1, cell1] : tables[node.child1]) {
                    for (const auto& [key2, cell2] : tables[node.child2]) {
                        std::vector<const std::vector<Entry>*> lists(r);
                        bool ok = true;
                        for (std::size_t i = 0; i < r && ok; ++i) {
                            auto it = idx[i].parents.find({key1[i], key2[i]});
                            if (it == idx[i].parents.end())
                                ok = false;
                            else
                                lists[i] = &it->second;
                        }
                        if (!ok) continue;
                        std::uint64_t sum = checked_add(cell1.value, cell2.value);
                        if (sum < slack) throw std::logic_error("diversity bookkeeping underflow");
                        std::uint64_t value = sum - slack;
                        for_each_key(lists, [&](const KeyTuple& key) { offer(table, key, value, {key1, key2}); });
                    }
                }
                break;
            }
        }
    }
    return tables;
}

std::vector<VertexSet> extract_tuple(const std::vector<const DpCore*>& cores, const CwDecomposition& d,
                                     const std::vector<DiverseTable>& tables, const KeyTuple& root_key) {
    std::vector<VertexSet> solutions(cores.size());
    std::vector<std::pair<int, const KeyTuple*>> stack{{d.root, &root_key}};
    while (!stack.empty()) {
        auto [t, key] = stack.back();
        stack.pop_back();
        const CwNode& node = d.nodes[t];
        if (node.arity() == 0) {
            for (std::size_t i = 0; i < cores.size(); ++i)
                if (cores[i]->solution_bit((*key)[i])) solutions[i].insert(node.vertex);
            continue;
        }
        const DiverseCell& cell = tables[t].at(*key);
        if (node.arity() >= 1) stack.push_back({node.child1, &cell.back[0]});
        if (node.arity() >= 2) stack.push_back({node.child2, &cell.back[1]});
    }
    return solutions;
}

}  // namespace

std::optional<DiverseResult> diverse_solve(const std::vector<const DpCore*>& cores, const VennMeasure& f,
                                           const CwDecomposition& d) {
    std::vector<DiverseTable> tables = build_diverse_tables(cores, f, d);
    const KeyTuple* best_key = nullptr;
    std::uint64_t best = 0;
    for (const auto& [key, cell] : tables[d.root]) {
        bool accepted = true;
        for (std::size_t i = 0; i < cores.size() && accepted; ++i) accepted = cores[i]->accepts(key[i]);
        if (!accepted) continue;
        if (best_key == nullptr || cell.value > best) {
            best_key = &key;
            best = cell.value;
        }
    }
    if (best_key == nullptr) return std::nullopt;

    DiverseResult result;
    result.best = best;
    result.solutions = extract_tuple(cores, d, tables, *best_key);
    return result;
}

std::vector<std::vector<Entry>> diverse_root_keys(const std::vector<const DpCore*>& cores,
                                                  const CwDecomposition& d) {
    // Any measure of the right arity yields the same key set; use the
    // all-zero table.
    VennMeasure zero;
    zero.r = static_cast<int>(cores.size());
    zero.name = "zero";
    zero.table.assign(std::size_t{1} << zero.r, 0);
    std::vector<DiverseTable> tables = build_diverse_tables(cores, zero, d);
    std::vector<KeyTuple> keys;
    keys.reserve(tables[d.root].size());
    for (const auto& [key, cell] : tables[d.root]) keys.push_back(key);
    return keys;
}

// --- min-distance product program -------------------------------------------

namespace {

using DistVec = std::vector<std::uint32_t>;  // capped pairwise distances, pairs in (i,j) i<j order

struct MinBack {
    std::vector<std::pair<KeyTuple, DistVec>> children;
    auto operator<=>(const MinBack&) const = default;
};

using MinTable = std::map<KeyTuple, std::map<DistVec, MinBack>>;

void offer_min(MinTable& table, const KeyTuple& key, const DistVec& vec, MinBack back) {
    auto& slot = table[key];
    auto [it, fresh] = slot.try_emplace(vec);
    if (fresh || back < it->second) it->second = std::move(back);
}

}  // namespace

std::optional<std::vector<VertexSet>> min_diverse_solve(const std::vector<const DpCore*>& cores,
                                                        std::uint64_t d_target, const CwDecomposition& d) {
    check_cores(cores, d);
    const std::size_t r = cores.size();
    if (r < 2) throw input_error("min-distance diverse solving needs at least two cores");

    if (d_target == 0) {
        // Every tuple of solutions qualifies; solve the cores independently.
        std::vector<VertexSet> solutions(r);
        for (std::size_t i = 0; i < r; ++i) {
            std::optional<Witness> w = solve_single(*cores[i], d);
            if (!w) return std::nullopt;
            solutions[i] = extract_solution(*cores[i], d, *w);
        }
        return solutions;
    }
    if (d_target > std::numeric_limits<std::uint32_t>::max())
        throw input_error("distance target too large");
    const std::uint32_t cap = static_cast<std::uint32_t>(d_target);

    const std::size_t num_pairs = r * (r - 1) / 2;
    std::vector<MinTable> tables(d.num_nodes());
    for (int t : d.post_order()) {
        const CwNode& node = d.nodes[t];
        MinTable& table = tables[t];
        switch (node.arity()) {
            case 0: {
                std::vector<const std::vector<Entry>*> lists(r);
                std::vector<std::vector<Entry>> own(r);
                for (std::size_t i = 0; i < r; ++i) {
                    for (const ProcessTuple& tuple : cores[i]->process(t)) {
                        check_tuple_arity(node, tuple, *cores[i]);
                        own[i].push_back(tuple.parent);
                    }
                    lists[i] = &own[i];
                }
                for_each_key(lists, [&](const KeyTuple& key) {
                    DistVec vec(num_pairs, 0);
                    std::size_t p = 0;
                    for (std::size_t i = 0; i < r; ++i)
                        for (std::size_t j = i + 1; j < r; ++j, ++p)
                            if (cores[i]->solution_bit(key[i]) != cores[j]->solution_bit(key[j]))
                                vec[p] = std::min<std::uint32_t>(1, cap);
                    offer_min(table, key, vec, {});
                });
                break;
            }
            case 1: {
                std::vector<UnaryIndex> idx;
                idx.reserve(r);
                for (std::size_t i = 0; i < r; ++i) idx.push_back(unary_index(*cores[i], node, t));
                for (const auto& [child_key, vecs] : tables[node.child1]) {
                    std::vector<const std::vector<Entry>*> lists(r);
                    bool ok = true;
                    for (std::size_t i = 0; i < r && ok; ++i) {
                        auto it = idx[i].parents.find(child_key[i]);
                        if (it == idx[i].parents.end())
                            ok = false;
                        else
                            lists[i] = &it->second;
                    }
                    if (!ok) continue;
                    for_each_key(lists, [&](const KeyTuple& key) {
                        for (const auto& [vec, back] : vecs)
                            offer_min(table, key, vec, MinBack{{{child_key, vec}}});
                    });
                }
                break;
            }
            case 2: {
                std::vector<BinaryIndex> idx;
                idx.reserve(r);
                for (std::size_t i = 0; i < r; ++i) idx.push_back(binary_index(*cores[i], node, t));
                for (const auto& [key1, vecs1] : tables[node.child1]) {
                    for (const auto& [key2, vecs2] : tables[node.child2]) {
                        std::vector<const std::vector<Entry>*> lists(r);
                        bool ok = true;
                        for (std::size_t i = 0; i < r && ok; ++i) {
                            auto it = idx[i].parents.find({key1[i], key2[i]});
                            if (it == idx[i].parents.end())
                                ok = false;
                            else
                                lists[i] = &it->second;
                        }
                        if (!ok) continue;
                        std::vector<std::pair<DistVec, MinBack>> combos;
                        for (const auto& [vec1, back1] : vecs1) {
                            for (const auto& [vec2, back2] : vecs2) {
                                DistVec vec(num_pairs);
                                for (std::size_t p = 0; p < num_pairs; ++p)
                                    vec[p] = static_cast<std::uint32_t>(
                                        std::min<std::uint64_t>(cap, std::uint64_t{vec1[p]} + vec2[p]));
                                combos.push_back({std::move(vec), MinBack{{{key1, vec1}, {key2, vec2}}}});
                            }
                        }
                        for_each_key(lists, [&](const KeyTuple& key) {
                            for (const auto& [vec, back] : combos) offer_min(table, key, vec, back);
                        });
                    }
                }
                break;
            }
        }
    }

    const DistVec want(num_pairs, cap);
    const KeyTuple* root_key = nullptr;
    for (const auto& [key, vecs] : tables[d.root]) {
        bool accepted = true;
        for (std::size_t i = 0; i < r && accepted; ++i) accepted = cores[i]->accepts(key[i]);
        if (!accepted || !vecs.count(want)) continue;
        root_key = &key;
        break;
    }
    if (root_key == nullptr) return std::nullopt;

    std::vector<VertexSet> solutions(r);
    std::vector<std::tuple<int, const KeyTuple*, const DistVec*>> stack{{d.root, root_key, &want}};
    while (!stack.empty()) {
        auto [t, key, vec] = stack.back();
        stack.pop_back();
        const CwNode& node = d.nodes[t];
        if (node.arity() == 0) {
            for (std::size_t i = 0; i < r; ++i)
                if (cores[i]->solution_bit((*key)[i])) solutions[i].insert(node.vertex);
            continue;
        }
        const MinBack& back = tables[t].at(*key).at(*vec);
        for (std::size_t ci = 0; ci < back.children.size(); ++ci) {
            int child = (ci == 0) ? node.child1 : node.child2;
            stack.push_back({child, &back.children[ci].first, &back.children[ci].second});
        }
    }
    return solutions;
}

}  // namespace divcw
