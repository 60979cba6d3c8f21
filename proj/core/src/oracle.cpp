#include "divcw/oracle.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <thread>

#include "divcw/errors.hpp"

namespace divcw {

std::string ProblemSpec::label() const {
    switch (kind) {
        case Kind::VertexCover: return "vc:" + std::to_string(k);
        case Kind::DominatingSet: return "ds:" + std::to_string(k);
        case Kind::MinimalDominatingSet: return "minds";
        case Kind::MsoFormula: return "mso";
    }
    return "?";
}

namespace {

std::vector<std::uint32_t> adjacency_rows(const ColoredGraph& g) {
    std::vector<std::uint32_t> adj(g.num_vertices(), 0);
    for (auto [u, v] : g.edges) {
        adj[u] |= 1u << v;
        adj[v] |= 1u << u;
    }
    return adj;
}

void check_oracle_size(const ColoredGraph& g) {
    if (g.num_vertices() > kOracleMaxVertices)
        throw budget_error("oracle refuses graphs with more than " + std::to_string(kOracleMaxVertices) +
                           " vertices (got " + std::to_string(g.num_vertices()) + ")");
}

bool covers(const std::vector<std::uint32_t>& /*adj*/, const ColoredGraph& g, std::uint32_t mask) {
    for (auto [u, v] : g.edges)
        if (!(mask & (1u << u)) && !(mask & (1u << v))) return false;
    return true;
}

bool dominates(const std::vector<std::uint32_t>& closed, std::uint32_t mask, int n) {
    for (int v = 0; v < n; ++v)
        if (!(mask & closed[v])) return false;
    return true;
}

// Matrix truth under full assignments.
bool eval_matrix(const mso::Expr& e, const std::vector<std::uint32_t>& adj, const std::vector<int>& vertex_env,
                 const std::vector<std::uint32_t>& set_env) {
    using Op = mso::Expr::Op;
    switch (e.op) {
        case Op::Adj: {
            int u = vertex_env[e.lhs_vertex], v = vertex_env[e.rhs_vertex];
            return u != v && (adj[u] & (1u << v));
        }
        case Op::Eq: return vertex_env[e.lhs_vertex] == vertex_env[e.rhs_vertex];
        case Op::In: return set_env[e.set_var] & (1u << vertex_env[e.lhs_vertex]);
        case Op::Not: return !eval_matrix(*e.left, adj, vertex_env, set_env);
        case Op::And: return eval_matrix(*e.left, adj, vertex_env, set_env) &&
                             eval_matrix(*e.right, adj, vertex_env, set_env);
        case Op::Or: return eval_matrix(*e.left, adj, vertex_env, set_env) ||
                            eval_matrix(*e.right, adj, vertex_env, set_env);
        case Op::Implies: return !eval_matrix(*e.left, adj, vertex_env, set_env) ||
                                 eval_matrix(*e.right, adj, vertex_env, set_env);
    }
    return false;
}

bool eval_prefix(const mso::Formula& f, std::size_t i, const std::vector<std::uint32_t>& adj, int n,
                 std::vector<int>& vertex_env, std::vector<std::uint32_t>& set_env) {
    if (i == f.prefix.size()) return eval_matrix(*f.matrix, adj, vertex_env, set_env);
    const mso::Quantifier& q = f.prefix[i];
    bool is_exists = q.kind == mso::QuantKind::Exists;
    if (q.sort == mso::VarSort::Vertex) {
        for (int v = 0; v < n; ++v) {
            vertex_env.push_back(v);
            bool sub = eval_prefix(f, i + 1, adj, n, vertex_env, set_env);
            vertex_env.pop_back();
            if (sub == is_exists) return is_exists;
        }
    } else {
        std::uint64_t subsets = std::uint64_t{1} << n;
        for (std::uint64_t s = 0; s < subsets; ++s) {
            set_env.push_back(static_cast<std::uint32_t>(s));
            bool sub = eval_prefix(f, i + 1, adj, n, vertex_env, set_env);
            set_env.pop_back();
            if (sub == is_exists) return is_exists;
        }
    }
    return !is_exists;  // exhausted: exists fails, forall holds
}

VertexSet mask_to_set(std::uint32_t mask, const ColoredGraph& g) {
    VertexSet s;
    for (int v = 0; v < g.num_vertices(); ++v)
        if (mask & (1u << v)) s.insert(g.names[v]);
    return s;
}

}  // namespace

bool is_vertex_cover(const ColoredGraph& g, const VertexSet& s) {
    for (auto [u, v] : g.edges)
        if (!s.count(g.names[u]) && !s.count(g.names[v])) return false;
    return true;
}

bool is_dominating_set(const ColoredGraph& g, const VertexSet& s) {
    std::vector<std::uint32_t> adj = adjacency_rows(g);
    for (int v = 0; v < g.num_vertices(); ++v) {
        bool dominated = s.count(g.names[v]) != 0;
        for (int u = 0; u < g.num_vertices() && !dominated; ++u)
            if ((adj[v] & (1u << u)) && s.count(g.names[u])) dominated = true;
        if (!dominated) return false;
    }
    return true;
}

bool naive_mso_eval(const mso::Formula& f, const ColoredGraph& g) {
    check_oracle_size(g);
    std::vector<std::uint32_t> adj = adjacency_rows(g);
    std::vector<int> vertex_env;
    std::vector<std::uint32_t> set_env;
    return eval_prefix(f, 0, adj, g.num_vertices(), vertex_env, set_env);
}

std::vector<VertexSet> brute_solutions(const ProblemSpec& spec, const ColoredGraph& g) {
    check_oracle_size(g);
    const int n = g.num_vertices();
    std::vector<std::uint32_t> adj = adjacency_rows(g);
    std::vector<std::uint32_t> closed(n);
    for (int v = 0; v < n; ++v) closed[v] = adj[v] | (1u << v);

    if (spec.kind == ProblemSpec::Kind::MsoFormula) {
        if (!spec.formula) throw input_error("mso problem without a formula");
        if (spec.formula->prefix.empty() || spec.formula->prefix[0].kind != mso::QuantKind::Exists ||
            spec.formula->prefix[0].sort != mso::VarSort::Set)
            throw input_error("mso problems need a formula starting with 'exists set'");
    }

    std::vector<VertexSet> out;
    std::uint64_t subsets = std::uint64_t{1} << n;
    for (std::uint64_t raw = 0; raw < subsets; ++raw) {
        std::uint32_t mask = static_cast<std::uint32_t>(raw);
        bool good = false;
        switch (spec.kind) {
            case ProblemSpec::Kind::VertexCover:
                good = std::popcount(mask) <= spec.k && covers(adj, g, mask);
                break;
            case ProblemSpec::Kind::DominatingSet:
                good = std::popcount(mask) <= spec.k && dominates(closed, mask, n);
                break;
            case ProblemSpec::Kind::MinimalDominatingSet: {
                good = dominates(closed, mask, n);
                for (int v = 0; v < n && good; ++v)
                    if (mask & (1u << v)) good = !dominates(closed, mask & ~(1u << v), n);
                break;
            }
            case ProblemSpec::Kind::MsoFormula: {
                // Pin the leading set variable to this subset and evaluate
                // the rest of the prefix.
                std::vector<int> vertex_env;
                std::vector<std::uint32_t> set_env{mask};
                good = eval_prefix(*spec.formula, 1, adj, n, vertex_env, set_env);
                break;
            }
        }
        if (good) out.push_back(mask_to_set(mask, g));
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

struct MaskLists {
    std::vector<std::vector<std::uint64_t>> masks;  // per slot, in lexicographic set order
    std::vector<std::vector<const VertexSet*>> sets;
};

MaskLists index_lists(const std::vector<std::vector<VertexSet>>& lists,
                      const std::vector<std::string>& universe) {
    if (lists.empty()) throw input_error("need at least one solution list");
    if (universe.size() > 64) throw budget_error("diversity scan supports at most 64 universe vertices");
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < universe.size(); ++i) {
        if (!index.try_emplace(universe[i], static_cast<int>(i)).second)
            throw input_error("duplicate universe vertex '" + universe[i] + "'");
    }

    std::uint64_t tuples = 1;
    for (const auto& list : lists) {
        tuples = checked_mul(tuples, std::max<std::uint64_t>(1, list.size()));
        if (tuples > kOracleMaxTuples)
            throw budget_error("diversity scan over " + std::to_string(tuples) + "+ tuples exceeds the " +
                               std::to_string(kOracleMaxTuples) + " budget");
    }

    MaskLists out;
    out.masks.resize(lists.size());
    out.sets.resize(lists.size());
    for (std::size_t i = 0; i < lists.size(); ++i) {
        std::vector<const VertexSet*> order;
        order.reserve(lists[i].size());
        for (const VertexSet& s : lists[i]) order.push_back(&s);
        std::sort(order.begin(), order.end(), [](const VertexSet* a, const VertexSet* b) { return *a < *b; });
        for (const VertexSet* s : order) {
            std::uint64_t mask = 0;
            for (const std::string& v : *s) {
                auto it = index.find(v);
                if (it == index.end()) throw input_error("solution vertex '" + v + "' is not in the universe");
                mask |= std::uint64_t{1} << it->second;
            }
            out.masks[i].push_back(mask);
            out.sets[i].push_back(s);
        }
    }
    return out;
}

// Scans the cartesian product in lexicographic order of slot indices,
// calling score on each tuple of masks; returns the first maximizer's
// indices.  Chunked by the first slot so multi-threaded runs stay
// deterministic: chunks are merged in order and ties keep the earlier chunk.
template <typename Score>
std::optional<std::pair<std::uint64_t, std::vector<std::size_t>>> scan_product(
    const std::vector<std::vector<std::uint64_t>>& masks, int threads, const Score& score) {
    const std::size_t r = masks.size();
    for (const auto& list : masks)
        if (list.empty()) return std::nullopt;

    struct Local {
        bool any = false;
        std::uint64_t best = 0;
        std::vector<std::size_t> argmax;
    };

    auto scan_range = [&](std::size_t first_lo, std::size_t first_hi, Local& local) {
        std::vector<std::size_t> idx(r, 0);
        std::vector<std::uint64_t> current(r);
        for (std::size_t first = first_lo; first < first_hi; ++first) {
            idx[0] = first;
            current[0] = masks[0][first];
            // Odometer over the remaining slots.
            std::fill(idx.begin() + 1, idx.end(), 0);
            for (std::size_t i = 1; i < r; ++i) current[i] = masks[i][0];
            while (true) {
                std::uint64_t value = score(current);
                if (!local.any || value > local.best) {
                    local.any = true;
                    local.best = value;
                    local.argmax = idx;
                }
                std::size_t slot = r - 1;
                while (slot >= 1) {
                    if (++idx[slot] < masks[slot].size()) {
                        current[slot] = masks[slot][idx[slot]];
                        break;
                    }
                    idx[slot] = 0;
                    current[slot] = masks[slot][0];
                    --slot;
                }
                if (slot == 0) break;  // wrapped past slot 1: this first-index block is done
            }
        }
    };

    std::size_t first_size = masks[0].size();
    int workers = std::max(1, std::min<int>(threads, static_cast<int>(first_size)));
    std::vector<Local> locals(workers);
    if (workers == 1) {
        scan_range(0, first_size, locals[0]);
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (first_size + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            std::size_t lo = std::min(first_size, w * chunk);
            std::size_t hi = std::min(first_size, lo + chunk);
            pool.emplace_back([&, lo, hi, w] { scan_range(lo, hi, locals[w]); });
        }
        for (std::thread& th : pool) th.join();
    }

    Local merged;
    for (const Local& local : locals) {
        if (!local.any) continue;
        if (!merged.any || local.best > merged.best) merged = local;  // ties keep the earlier chunk
    }
    if (!merged.any) return std::nullopt;
    return std::make_pair(merged.best, merged.argmax);
}

std::vector<VertexSet> collect_tuple(const MaskLists& ml, const std::vector<std::size_t>& idx) {
    std::vector<VertexSet> tuple;
    tuple.reserve(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) tuple.push_back(*ml.sets[i][idx[i]]);
    return tuple;
}

}  // namespace

std::optional<BestTuple> brute_best_diversity(const std::vector<std::vector<VertexSet>>& lists,
                                              const VennMeasure& f, const std::vector<std::string>& universe,
                                              int threads) {
    if (static_cast<int>(lists.size()) != f.r)
        throw input_error("measure arity " + std::to_string(f.r) + " does not match the number of slots " +
                          std::to_string(lists.size()));
    MaskLists ml = index_lists(lists, universe);
    const std::size_t u = universe.size();
    auto score = [&](const std::vector<std::uint64_t>& masks) {
        std::uint64_t total = 0;
        for (std::size_t v = 0; v < u; ++v) {
            unsigned m = 0;
            for (std::size_t i = 0; i < masks.size(); ++i) m |= ((masks[i] >> v) & 1u) << i;
            total = checked_add(total, f.at(m));
        }
        return total;
    };
    auto best = scan_product(ml.masks, threads, score);
    if (!best) return std::nullopt;
    return BestTuple{best->first, collect_tuple(ml, best->second)};
}

std::optional<BestTuple> brute_best_min_distance(const std::vector<std::vector<VertexSet>>& lists,
                                                 const std::vector<std::string>& universe, int threads) {
    if (lists.size() < 2) throw input_error("min-distance scan needs at least two slots");
    MaskLists ml = index_lists(lists, universe);
    auto score = [&](const std::vector<std::uint64_t>& masks) {
        std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
        for (std::size_t i = 0; i < masks.size(); ++i)
            for (std::size_t j = i + 1; j < masks.size(); ++j)
                best = std::min<std::uint64_t>(best, std::popcount(masks[i] ^ masks[j]));
        return best;
    };
    auto best = scan_product(ml.masks, threads, score);
    if (!best) return std::nullopt;
    return BestTuple{best->first, collect_tuple(ml, best->second)};
}

}  // namespace divcw
