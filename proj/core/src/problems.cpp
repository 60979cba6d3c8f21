#include "divcw/problems.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>
#include <stdexcept>

#include "divcw/engine.hpp"
#include "divcw/errors.hpp"
#include "divcw/graph.hpp"

namespace divcw {

namespace {

void check_params(int k, const CwDecomposition& d) {
    if (k < 0) throw input_error("solution size bound must be non-negative");
    std::vector<std::string> violations = validate(d);
    if (!violations.empty()) throw input_error("invalid decomposition: " + violations.front());
}

// Shared skeleton: concrete cores fill per-node sorted transition lists once
// at construction, walking the decomposition bottom-up over reachable
// entries.
class TableCore : public DpCore {
public:
    TableCore(const CwDecomposition& d, std::string label) : d_(d), label_(std::move(label)) {}

    const CwDecomposition& decomposition() const override { return d_; }
    const std::vector<ProcessTuple>& process(int node) const override { return process_.at(node); }
    std::string label() const override { return label_; }

protected:
    // Builds process_ from a transition generator: derive(t, children) returns
    // the entries derivable at node t from the given child entries.
    template <typename Derive>
    void build(const Derive& derive) {
        process_.assign(d_.num_nodes(), {});
        std::vector<std::vector<Entry>> reach(d_.num_nodes());
        for (int t : d_.post_order()) {
            const CwNode& node = d_.nodes[t];
            std::set<ProcessTuple> tuples;
            std::set<Entry> entries;
            auto emit = [&](std::vector<Entry> children) {
                for (Entry& e : derive(t, children)) {
                    entries.insert(e);
                    tuples.insert(ProcessTuple{std::move(e), children});
                }
            };
            switch (node.arity()) {
                case 0:
                    emit({});
                    break;
                case 1:
                    for (const Entry& c : reach[node.child1]) emit({c});
                    break;
                case 2:
                    for (const Entry& c1 : reach[node.child1])
                        for (const Entry& c2 : reach[node.child2]) emit({c1, c2});
                    break;
            }
            process_[t].assign(tuples.begin(), tuples.end());
            reach[t].assign(entries.begin(), entries.end());
        }
    }

    const CwDecomposition& d_;

private:
    std::string label_;
    std::vector<std::vector<ProcessTuple>> process_;
};

// --- vertex cover ------------------------------------------------------------

// Entry encoding: width colors, each a cover-vertex count in [0, k], packed
// little-endian at fixed bit width so byte order equals numeric order per
// field and encodings are canonical.
class VcCore : public TableCore {
public:
    VcCore(int k, const CwDecomposition& d)
        : TableCore(d, "vc:" + std::to_string(k)),
          k_(k),
          bits_per_color_(std::bit_width(static_cast<unsigned>(k) + 1)),
          counts_(color_counts(d)) {
        build([this](int t, const std::vector<Entry>& children) { return derive(t, children); });
    }

    bool accepts(const Entry& entry) const override {
        std::vector<int> c = decode(entry);
        return std::all_of(c.begin() + 1, c.end(), [this](int x) { return x <= k_; });
    }

    bool solution_bit(const Entry& leaf_entry) const override {
        std::vector<int> c = decode(leaf_entry);
        int total = 0;
        for (int color = 1; color <= d_.width; ++color) total += c[color];
        if (total > 1) throw std::logic_error("not a leaf entry of vc core");
        return total == 1;
    }

private:
    Entry encode(const std::vector<int>& counts) const {
        std::string bytes((static_cast<std::size_t>(d_.width) * bits_per_color_ + 7) / 8, '\0');
        for (int color = 1; color <= d_.width; ++color) {
            unsigned value = static_cast<unsigned>(counts[color]);
            std::size_t base = static_cast<std::size_t>(color - 1) * bits_per_color_;
            for (int b = 0; b < bits_per_color_; ++b)
                if (value & (1u << b)) bytes[(base + b) / 8] |= static_cast<char>(1 << ((base + b) % 8));
        }
        return Entry{std::move(bytes)};
    }

    std::vector<int> decode(const Entry& entry) const {
        std::size_t expect = (static_cast<std::size_t>(d_.width) * bits_per_color_ + 7) / 8;
        if (entry.bytes.size() != expect) throw std::logic_error("entry size mismatch in vc core");
        std::vector<int> counts(d_.width + 1, 0);
        for (int color = 1; color <= d_.width; ++color) {
            unsigned value = 0;
            std::size_t base = static_cast<std::size_t>(color - 1) * bits_per_color_;
            for (int b = 0; b < bits_per_color_; ++b)
                if (entry.bytes[(base + b) / 8] & (1 << ((base + b) % 8))) value |= 1u << b;
            counts[color] = static_cast<int>(value);
        }
        return counts;
    }

    std::vector<Entry> derive(int t, const std::vector<Entry>& children) const {
        const CwNode& node = d_.nodes[t];
        std::vector<Entry> out;
        switch (node.kind) {
            case CwNode::Kind::Intro: {
                std::vector<int> zero(d_.width + 1, 0);
                out.push_back(encode(zero));  // vertex not in the cover
                if (k_ >= 1) {
                    zero[node.a] = 1;
                    out.push_back(encode(zero));  // vertex in the cover
                }
                break;
            }
            case CwNode::Kind::Union: {
                std::vector<int> c1 = decode(children[0]);
                std::vector<int> c2 = decode(children[1]);
                int total = 0;
                for (int color = 1; color <= d_.width; ++color) {
                    c1[color] += c2[color];
                    total += c1[color];
                }
                if (total <= k_) out.push_back(encode(c1));
                break;
            }
            case CwNode::Kind::Recolor: {
                std::vector<int> c = decode(children[0]);
                if (node.a != node.b) {
                    c[node.b] += c[node.a];
                    c[node.a] = 0;
                }
                out.push_back(encode(c));
                break;
            }
            case CwNode::Kind::AddEdges: {
                std::vector<int> c = decode(children[0]);
                // New edges between colors a and b are covered iff one side
                // is entirely in the cover.
                if (c[node.a] == counts_[t][node.a] || c[node.b] == counts_[t][node.b])
                    out.push_back(encode(c));
                break;
            }
        }
        return out;
    }

    int k_;
    int bits_per_color_;
    std::vector<std::vector<int>> counts_;  // vertices per color per node
};

// --- dominating set -----------------------------------------------------------

// Entry encoding: 2 bytes of count (big-endian), then one bitmask byte run
// for "some chosen vertex has this color", then one for "some not-yet-
// dominated vertex has this color".
class DsCore : public TableCore {
public:
    DsCore(int k, const CwDecomposition& d) : TableCore(d, "ds:" + std::to_string(k)), k_(k) {
        if (k_ > 0xFFFF) throw input_error("dominating-set bound too large");
        build([this](int t, const std::vector<Entry>& children) { return derive(t, children); });
    }

    bool accepts(const Entry& entry) const override {
        State s = decode(entry);
        return s.count <= k_ && none(s.undominated);
    }

    bool solution_bit(const Entry& leaf_entry) const override {
        State s = decode(leaf_entry);
        if (s.count > 1) throw std::logic_error("not a leaf entry of ds core");
        return s.count == 1;
    }

private:
    struct State {
        int count = 0;
        std::vector<bool> chosen;       // indexed by color, [0] unused
        std::vector<bool> undominated;  // colors with a vertex not dominated yet
    };

    static bool none(const std::vector<bool>& bits) {
        return std::none_of(bits.begin(), bits.end(), [](bool b) { return b; });
    }

    Entry encode(const State& s) const {
        std::size_t mask_bytes = static_cast<std::size_t>(d_.width + 7) / 8;
        std::string bytes(2 + 2 * mask_bytes, '\0');
        bytes[0] = static_cast<char>((s.count >> 8) & 0xFF);
        bytes[1] = static_cast<char>(s.count & 0xFF);
        for (int color = 1; color <= d_.width; ++color) {
            int bit = color - 1;
            if (s.chosen[color]) bytes[2 + bit / 8] |= static_cast<char>(1 << (bit % 8));
            if (s.undominated[color]) bytes[2 + mask_bytes + bit / 8] |= static_cast<char>(1 << (bit % 8));
        }
        return Entry{std::move(bytes)};
    }

    State decode(const Entry& entry) const {
        std::size_t mask_bytes = static_cast<std::size_t>(d_.width + 7) / 8;
        if (entry.bytes.size() != 2 + 2 * mask_bytes) throw std::logic_error("entry size mismatch in ds core");
        State s;
        s.count = (static_cast<unsigned char>(entry.bytes[0]) << 8) | static_cast<unsigned char>(entry.bytes[1]);
        s.chosen.assign(d_.width + 1, false);
        s.undominated.assign(d_.width + 1, false);
        for (int color = 1; color <= d_.width; ++color) {
            int bit = color - 1;
            if (entry.bytes[2 + bit / 8] & (1 << (bit % 8))) s.chosen[color] = true;
            if (entry.bytes[2 + mask_bytes + bit / 8] & (1 << (bit % 8))) s.undominated[color] = true;
        }
        return s;
    }

    std::vector<Entry> derive(int t, const std::vector<Entry>& children) const {
        const CwNode& node = d_.nodes[t];
        std::vector<Entry> out;
        switch (node.kind) {
            case CwNode::Kind::Intro: {
                State s;
                s.chosen.assign(d_.width + 1, false);
                s.undominated.assign(d_.width + 1, false);
                s.count = 0;
                s.undominated[node.a] = true;  // vertex not chosen, nothing dominates it yet
                out.push_back(encode(s));
                if (k_ >= 1) {
                    State c;
                    c.chosen.assign(d_.width + 1, false);
                    c.undominated.assign(d_.width + 1, false);
                    c.count = 1;
                    c.chosen[node.a] = true;  // chosen vertices dominate themselves
                    out.push_back(encode(c));
                }
                break;
            }
            case CwNode::Kind::Union: {
                State s1 = decode(children[0]);
                State s2 = decode(children[1]);
                if (s1.count + s2.count > k_) break;
                State s;
                s.count = s1.count + s2.count;
                s.chosen.assign(d_.width + 1, false);
                s.undominated.assign(d_.width + 1, false);
                for (int color = 1; color <= d_.width; ++color) {
                    s.chosen[color] = s1.chosen[color] || s2.chosen[color];
                    s.undominated[color] = s1.undominated[color] || s2.undominated[color];
                }
                out.push_back(encode(s));
                break;
            }
            case CwNode::Kind::Recolor: {
                State s = decode(children[0]);
                if (node.a != node.b) {
                    if (s.chosen[node.a]) s.chosen[node.b] = true;
                    if (s.undominated[node.a]) s.undominated[node.b] = true;
                    s.chosen[node.a] = false;
                    s.undominated[node.a] = false;
                }
                out.push_back(encode(s));
                break;
            }
            case CwNode::Kind::AddEdges: {
                State s = decode(children[0]);
                // A chosen vertex on one side dominates the whole other side.
                if (s.chosen[node.a]) s.undominated[node.b] = false;
                if (s.chosen[node.b]) s.undominated[node.a] = false;
                out.push_back(encode(s));
                break;
            }
        }
        return out;
    }

    int k_;
};

}  // namespace

std::unique_ptr<DpCore> vc_core(int k, const CwDecomposition& d) {
    check_params(k, d);
    return std::make_unique<VcCore>(k, d);
}

std::unique_ptr<DpCore> ds_core(int k, const CwDecomposition& d) {
    check_params(k, d);
    return std::make_unique<DsCore>(k, d);
}

std::optional<VertexSet> min_vc(const CwDecomposition& d, int k) {
    check_params(k, d);
    for (int bound = 0; bound <= k; ++bound) {
        std::unique_ptr<DpCore> core = vc_core(bound, d);
        std::optional<Witness> w = solve_single(*core, d);
        if (w) return extract_solution(*core, d, *w);
    }
    return std::nullopt;
}

}  // namespace divcw
