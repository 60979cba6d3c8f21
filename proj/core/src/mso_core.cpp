#include "divcw/mso/mso_core.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "divcw/errors.hpp"

namespace divcw::mso {

namespace {

void check_decomposition(const CwDecomposition& d) {
    std::vector<std::string> violations = validate(d);
    if (!violations.empty()) throw input_error("invalid decomposition: " + violations.front());
}

}  // namespace

bool model_check(const Formula& f, const CwDecomposition& d, std::size_t budget) {
    check_decomposition(d);
    TreeEngine engine(f, d.width, budget);

    // One reduced evaluation tree per node, built bottom-up.
    std::vector<TreeEngine::Ref> tree(d.num_nodes());
    for (int t : d.post_order()) {
        const CwNode& node = d.nodes[t];
        switch (node.kind) {
            case CwNode::Kind::Intro: tree[t] = engine.leaf_tree(node.a); break;
            case CwNode::Kind::Union: tree[t] = engine.product(tree[node.child1], tree[node.child2]); break;
            case CwNode::Kind::Recolor: tree[t] = engine.recolor(tree[node.child1], node.a, node.b); break;
            case CwNode::Kind::AddEdges: tree[t] = engine.add_edges(tree[node.child1], node.a, node.b); break;
        }
    }
    return engine.eval(tree[d.root]);
}

namespace {

// DP core compiled from an 'exists set Z: ...' formula.  Entries are the
// level-1 classes of the reduced evaluation tree (the state after choosing
// Z's trace in the node's part); at leaves the entry carries a one-byte tag
// recording whether the introduced vertex was put into Z.
class MsoCore : public DpCore {
public:
    MsoCore(const Formula& f, const CwDecomposition& d, std::string label, std::size_t budget)
        : d_(d), label_(std::move(label)) {
        if (f.prefix[0].kind != QuantKind::Exists || f.prefix[0].sort != VarSort::Set)
            throw input_error("compiling a formula into a core requires it to start with 'exists set'");

        TreeEngine engine(f, d.width, budget);
        process_.assign(d.num_nodes(), {});
        // Reachable level-1 classes per node, with their canonical entries.
        std::vector<std::map<TreeEngine::Ref, Entry>> classes(d.num_nodes());

        for (int t : d_.post_order()) {
            const CwNode& node = d_.nodes[t];
            std::set<ProcessTuple> tuples;
            switch (node.kind) {
                case CwNode::Kind::Intro: {
                    TreeEngine::Ref out = engine.leaf_subtree_level1(node.a, false);
                    TreeEngine::Ref in = engine.leaf_subtree_level1(node.a, true);
                    if (out == in)
                        throw std::logic_error("the two set choices collapsed at a leaf; tagging is unsound");
                    Entry e_out{std::string(1, '\0') + engine.arena().digest(out)};
                    Entry e_in{std::string(1, '\1') + engine.arena().digest(in)};
                    classes[t] = {{out, e_out}, {in, e_in}};
                    tuples.insert(ProcessTuple{e_out, {}});
                    tuples.insert(ProcessTuple{e_in, {}});
                    break;
                }
                case CwNode::Kind::Union: {
                    for (const auto& [f1, e1] : classes[node.child1]) {
                        for (const auto& [f2, e2] : classes[node.child2]) {
                            TreeEngine::Ref out = engine.product(f1, f2);
                            Entry e = entry_of(engine, out);
                            classes[t].try_emplace(out, e);
                            tuples.insert(ProcessTuple{e, {e1, e2}});
                        }
                    }
                    break;
                }
                case CwNode::Kind::Recolor:
                case CwNode::Kind::AddEdges: {
                    for (const auto& [f1, e1] : classes[node.child1]) {
                        TreeEngine::Ref out = node.kind == CwNode::Kind::Recolor
                                                  ? engine.recolor(f1, node.a, node.b)
                                                  : engine.add_edges(f1, node.a, node.b);
                        Entry e = entry_of(engine, out);
                        classes[t].try_emplace(out, e);
                        tuples.insert(ProcessTuple{e, {e1}});
                    }
                    break;
                }
            }
            process_[t].assign(tuples.begin(), tuples.end());
        }

        // Accepting root entries: classes whose remaining quantifiers
        // evaluate to true over the finished graph.
        for (const auto& [ref, entry] : classes[d_.root])
            if (engine.eval(ref)) accept_.insert(entry);
        // The arena and memos are only needed during construction.
    }

    const CwDecomposition& decomposition() const override { return d_; }
    const std::vector<ProcessTuple>& process(int node) const override { return process_.at(node); }
    bool accepts(const Entry& entry) const override { return accept_.count(entry) != 0; }

    bool solution_bit(const Entry& leaf_entry) const override {
        if (leaf_entry.bytes.size() != 17 ||
            (leaf_entry.bytes[0] != '\0' && leaf_entry.bytes[0] != '\1'))
            throw std::logic_error("not a leaf entry of an mso core");
        return leaf_entry.bytes[0] == '\1';
    }

    std::string label() const override { return label_; }

private:
    // Leaf entries are tagged; inner entries are bare digests.
    Entry entry_of(const TreeEngine& engine, TreeEngine::Ref ref) const {
        return Entry{engine.arena().digest(ref)};
    }

    const CwDecomposition& d_;
    std::string label_;
    std::vector<std::vector<ProcessTuple>> process_;
    std::set<Entry> accept_;
};

}  // namespace

std::unique_ptr<DpCore> mso_core(const Formula& f, const CwDecomposition& d, const std::string& label,
                                 std::size_t budget) {
    check_decomposition(d);
    return std::make_unique<MsoCore>(f, d, label, budget);
}

}  // namespace divcw::mso
