// ecs.hpp -- shift-annotated enumerable compact sets: arena, operations,
// structural predicates, and a reference set-semantics oracle.
//
// Nodes live in an append-only arena and are never mutated, so any handle
// returned by an operation keeps its semantics forever (persistence). The
// four public operations (add, shift, prod, unite) maintain three structural
// invariants used by the enumerator:
//   * every returned handle is bottom, epsilon, a safe shift node, or a
//     union whose left child is epsilon and whose right child is a safe
//     shift with no epsilon below it (epsilon-safety),
//   * output-depth of every node stays <= 3,
//   * each operation appends O(1) nodes (<= 9).
#pragma once

#include <cassert>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "gcq/automaton.hpp"
#include "gcq/errors.hpp"
#include "gcq/text.hpp"

namespace gcq {

using NodeId = uint32_t;

enum class NodeKind : uint8_t { Bot, Eps, Output, Union, Product, Shift, SersOutput };

struct OpCounts {
    uint64_t adds = 0, shifts = 0, unions = 0, prods = 0;
    uint64_t total() const { return adds + shifts + unions + prods; }
};

class EcsArena {
  public:
    static constexpr NodeId kBot = 0;
    static constexpr NodeId kEps = 1;

    EcsArena() {
        push(NodeKind::Bot, 0, 0, 0, 0);
        push(NodeKind::Eps, 0, 0, 0, 0);
    }

    size_t size() const { return nodes_.size(); }
    NodeKind kind(NodeId v) const { return nodes_[v].kind; }
    NodeId left(NodeId v) const { return nodes_[v].l; }
    NodeId right(NodeId v) const { return nodes_[v].r; }
    int64_t shift_of(NodeId v) const { return nodes_[v].k; }
    uint32_t sym_of(NodeId v) const { return nodes_[v].sym; }
    NodeId rep_of(NodeId v) const { return nodes_[v].l; }
    int odepth(NodeId v) const { return nodes_[v].od; }

    uint32_t intern_output(const std::string& name) {
        auto it = out_index_.find(name);
        if (it != out_index_.end()) return it->second;
        uint32_t id = static_cast<uint32_t>(out_names_.size());
        out_names_.push_back(name);
        out_index_.emplace(name, id);
        return id;
    }
    const std::string& output_name(uint32_t id) const { return out_names_[id]; }

    // --- raw node builders (used by the operations and by tests) ---------

    NodeId node_output(uint32_t sym) { return push(NodeKind::Output, 0, sym, 0, 0); }
    NodeId node_sers(NodeId rep) { return push(NodeKind::SersOutput, 0, 0, rep, 0); }
    NodeId node_union(NodeId l, NodeId r) {
        return push(NodeKind::Union, sat(odepth(l) + 1), 0, l, r);
    }
    NodeId node_product(NodeId l, NodeId r) { return push(NodeKind::Product, 0, 0, l, r); }
    NodeId node_shift(int64_t k, NodeId l) {
        NodeId v = push(NodeKind::Shift, sat(odepth(l) + 1), 0, l, 0);
        nodes_[v].k = k;
        return v;
    }

    // --- the four operations ---------------------------------------------

    // {(sym, 1)} as a fresh output-shaped safe shift. Exactly 2 nodes.
    NodeId add(const std::string& sym) {
        ops.adds++;
        return node_shift(0, node_output(intern_output(sym)));
    }

    // Variant whose leaf denotes a whole set of output symbols, each given
    // by one sequence of a nested enumerable structure (set-of-sets leaf).
    NodeId add_rep(NodeId rep) {
        ops.adds++;
        return node_shift(0, node_sers(rep));
    }

    // sh(sem(v), k). At most 2 nodes; 0 when k = 0 or v is bottom/epsilon.
    NodeId shift(NodeId v, int64_t k) {
        ops.shifts++;
        if (v == kBot || v == kEps || k == 0) return v;
        if (kind(v) == NodeKind::Shift)
            return node_shift(checked_add(shift_of(v), k), left(v));
        assert(kind(v) == NodeKind::Union && left(v) == kEps);
        NodeId r = right(v);
        NodeId w = node_shift(checked_add(shift_of(r), k), left(r));
        return node_union(kEps, w);
    }

    // Concatenation sem(v1) . sem(v2). Inputs must come from operations
    // (and be position-disjoint for duplicate-freeness). At most 9 nodes.
    NodeId prod(NodeId v1, NodeId v2) {
        ops.prods++;
        if (v1 == kBot || v2 == kBot) return kBot;
        if (v1 == kEps) return v2;
        if (v2 == kEps) return v1;
        bool e1 = with_eps(v1), e2 = with_eps(v2);
        if (!e1 && !e2) return plain_prod(v1, v2);
        if (!e1 && e2) {
            // A . ({eps} u B) = A u A.B
            NodeId ab = plain_prod(v1, right(v2));
            return safe_union(v1, ab);
        }
        if (e1 && !e2) {
            // ({eps} u A) . B = B u A.B
            NodeId ab = plain_prod(right(v1), v2);
            return safe_union(v2, ab);
        }
        return eps_eps_prod(right(v1), right(v2));
    }

    // Set union sem(v3) u sem(v4); inputs must be disjoint. At most 8 nodes.
    NodeId unite(NodeId v3, NodeId v4) {
        ops.unions++;
        if (v3 == kBot) return v4;
        if (v4 == kBot) return v3;
        if (v3 == kEps && v4 == kEps) return kEps;
        if (v3 == kEps) return with_eps(v4) ? v4 : node_union(kEps, v4);
        if (v4 == kEps) return with_eps(v3) ? v3 : node_union(kEps, v3);
        bool e3 = with_eps(v3), e4 = with_eps(v4);
        if (!e3 && !e4) return safe_union(v3, v4);
        NodeId a = e3 ? right(v3) : v3;
        NodeId b = e4 ? right(v4) : v4;
        return node_union(kEps, safe_union(a, b));
    }

    OpCounts ops;

    // --- structural predicates (independent of the operations) -----------

    bool is_output_shaped(NodeId v) const { return odepth(v) == 0; }

    // A shift node is safe when its child is output-shaped, or is a union
    // of an output-shaped left part and a shift of output-depth <= 2.
    bool is_safe(NodeId v) const {
        if (kind(v) != NodeKind::Shift) return false;
        NodeId c = left(v);
        if (odepth(c) == 0) return true;
        if (kind(c) != NodeKind::Union || odepth(c) != 1) return false;
        NodeId r = right(c);
        return kind(r) == NodeKind::Shift && odepth(r) <= 2;
    }

    bool has_eps_below(NodeId v) const {
        std::vector<NodeId> st{v};
        std::set<NodeId> seen;
        while (!st.empty()) {
            NodeId u = st.back();
            st.pop_back();
            if (!seen.insert(u).second) continue;
            switch (kind(u)) {
                case NodeKind::Eps: return true;
                case NodeKind::Union:
                case NodeKind::Product:
                    st.push_back(left(u));
                    st.push_back(right(u));
                    break;
                case NodeKind::Shift: st.push_back(left(u)); break;
                default: break;
            }
        }
        return false;
    }

    // The handle shape every operation guarantees for its result.
    bool is_eps_safe(NodeId v) const {
        if (v == kBot || v == kEps) return true;
        if (is_safe(v)) return !has_eps_below(v);
        if (kind(v) != NodeKind::Union || left(v) != kEps) return false;
        NodeId r = right(v);
        return is_safe(r) && !has_eps_below(r);
    }

    // Every union in an operation-built arena keeps epsilon only as a
    // direct left child (checked over the whole arena by tests).
    bool eps_only_as_union_left() const {
        for (NodeId v = 2; v < nodes_.size(); ++v) {
            switch (kind(v)) {
                case NodeKind::Union:
                    if (right(v) == kEps) return false;
                    break;
                case NodeKind::Product:
                    if (left(v) == kEps || right(v) == kEps) return false;
                    break;
                case NodeKind::Shift:
                    if (left(v) == kEps) return false;
                    break;
                default: break;
            }
        }
        return true;
    }

    // --- diagnostics ------------------------------------------------------

    std::string dump() const {
        std::string out;
        for (NodeId v = 0; v < nodes_.size(); ++v) {
            out += std::to_string(v);
            switch (kind(v)) {
                case NodeKind::Bot: out += " bot"; break;
                case NodeKind::Eps: out += " eps"; break;
                case NodeKind::Output: out += " out " + out_names_[sym_of(v)]; break;
                case NodeKind::SersOutput:
                    out += " sers " + std::to_string(rep_of(v));
                    break;
                case NodeKind::Union:
                    out += " union " + std::to_string(left(v)) + " " +
                           std::to_string(right(v));
                    break;
                case NodeKind::Product:
                    out += " prod " + std::to_string(left(v)) + " " +
                           std::to_string(right(v));
                    break;
                case NodeKind::Shift:
                    out += " shift " + std::to_string(shift_of(v)) + " " +
                           std::to_string(left(v));
                    break;
            }
            out += "\n";
        }
        return out;
    }

  private:
    struct Node {
        NodeKind kind;
        uint8_t od;
        uint32_t sym;
        NodeId l, r;
        int64_t k;
    };
    std::vector<Node> nodes_;
    std::vector<std::string> out_names_;
    std::unordered_map<std::string, uint32_t> out_index_;

    static uint8_t sat(int d) { return d > 200 ? 200 : static_cast<uint8_t>(d); }

    NodeId push(NodeKind kd, uint8_t od, uint32_t sym, NodeId l, NodeId r) {
        if (nodes_.size() >= UINT32_MAX)
            fail("BudgetExceeded", "arena node limit reached");
        nodes_.push_back(Node{kd, od, sym, l, r, 0});
        return static_cast<NodeId>(nodes_.size() - 1);
    }

    // Epsilon-condition of an operation-built non-bottom handle: epsilon
    // itself, a safe shift (no epsilon), or an epsilon-union.
    bool with_eps(NodeId v) const {
        if (kind(v) == NodeKind::Union) {
            assert(left(v) == kEps);
            return true;
        }
        assert(kind(v) == NodeKind::Shift);
        return false;
    }

    // Union of two safe shifts a, b (no epsilon anywhere below).
    // Result is a safe shift; 3 nodes when either side is output-shaped
    // under its shift, 7 otherwise.
    NodeId safe_union(NodeId a, NodeId b) {
        assert(kind(a) == NodeKind::Shift && kind(b) == NodeKind::Shift);
        if (odepth(left(a)) == 0) {
            NodeId t = node_shift(checked_sub(shift_of(b), shift_of(a)), left(b));
            NodeId u = node_union(left(a), t);
            return node_shift(shift_of(a), u);
        }
        if (odepth(left(b)) == 0) {
            NodeId t = node_shift(checked_sub(shift_of(a), shift_of(b)), left(a));
            NodeId u = node_union(left(b), t);
            return node_shift(shift_of(b), u);
        }
        // Both children are unions x u (k' -> X). Rebalance into one safe
        // shift covering all four parts; shifts telescope so each part ends
        // at its original absolute offset.
        int64_t k1 = shift_of(a), k2 = shift_of(b);
        NodeId u3 = left(a), u4 = left(b);
        NodeId s3 = right(u3), s4 = right(u4);
        int64_t k1p = shift_of(s3), k2p = shift_of(s4);
        NodeId v6 = node_shift(
            checked_sub(checked_add(k2, k2p), checked_add(k1, k1p)), left(s4));
        NodeId v5 = node_union(left(s3), v6);
        NodeId v4 = node_shift(checked_sub(checked_add(k1, k1p), k2), v5);
        NodeId v3 = node_union(left(u4), v4);
        NodeId v2 = node_shift(checked_sub(k2, k1), v3);
        NodeId v1 = node_union(left(u3), v2);
        return node_shift(k1, v1);
    }

    // Product of two safe shifts: sh(l1, k1) . sh(l2, k2) =
    // sh(l1 . sh(l2, k2-k1), k1). 3 nodes, output-shaped result.
    NodeId plain_prod(NodeId v1, NodeId v2) {
        assert(kind(v1) == NodeKind::Shift && kind(v2) == NodeKind::Shift);
        NodeId t = node_shift(checked_sub(shift_of(v2), shift_of(v1)), left(v2));
        NodeId p = node_product(left(v1), t);
        return node_shift(shift_of(v1), p);
    }

    // ({eps} u A) . ({eps} u B) = {eps} u A u B u A.B, with A = sem(r1),
    // B = sem(r2) given by safe epsilon-free shifts. Built as one chain of
    // unions whose left leaves are output-shaped, so the result stays safe;
    // the product leaf reuses r1 and r2 unshifted. 7 nodes when either input
    // has an output-shaped child, 9 otherwise.
    NodeId eps_eps_prod(NodeId r1, NodeId r2) {
        NodeId ab = node_product(r1, r2);
        NodeId chain;
        if (odepth(left(r1)) == 0) {
            NodeId t2 = node_shift(checked_sub(shift_of(r2), shift_of(r1)), left(r2));
            NodeId u2 = node_union(left(r1), t2);
            NodeId t1 = node_shift(shift_of(r1), u2);
            chain = node_union(ab, t1);
        } else if (odepth(left(r2)) == 0) {
            NodeId t2 = node_shift(checked_sub(shift_of(r1), shift_of(r2)), left(r1));
            NodeId u2 = node_union(left(r2), t2);
            NodeId t1 = node_shift(shift_of(r2), u2);
            chain = node_union(ab, t1);
        } else {
            // A = sh(o1, l1) u sh(X, l1+l1'); B reused whole at l2.
            NodeId u1 = left(r1), u2 = left(r2);
            int64_t l1 = shift_of(r1), l2 = shift_of(r2);
            int64_t l1p = shift_of(right(u1));
            NodeId x = left(right(u1));
            NodeId t3 = node_shift(checked_sub(checked_add(l1, l1p), l2), x);
            NodeId m3 = node_union(u2, t3);
            NodeId t2 = node_shift(checked_sub(l2, l1), m3);
            NodeId m2 = node_union(left(u1), t2);
            NodeId t1 = node_shift(l1, m2);
            chain = node_union(ab, t1);
        }
        return node_union(kEps, node_shift(0, chain));
    }
};

// Canonical output symbol for one enumerated sequence of a set-of-sets
// leaf: member symbols deduplicated, sorted, comma-joined.
inline std::string sers_set_symbol(const Annotation& seq) {
    std::set<std::string> syms;
    for (const AnnPair& p : seq) syms.insert(p.sym);
    std::string out;
    for (const auto& s : syms) {
        if (!out.empty()) out += ",";
        out += s;
    }
    return out;
}

// --- reference semantics oracle ------------------------------------------

// Computes sem(v) as an explicit set, together with the multiset size
// (sum of multiplicities); a mismatch between the two reveals duplicates.
// Written against the definition only, never against the operations.
struct SemValue {
    std::set<Annotation> set;
    uint64_t count = 0;  // multiset cardinality
};

inline SemValue sem_oracle(const EcsArena& a, NodeId root,
                           const EcsArena* sers = nullptr,
                           uint64_t budget = uint64_t{1} << 20) {
    std::unordered_map<NodeId, SemValue> memo;
    uint64_t work = 0;
    // Post-order over the DAG with an explicit stack.
    std::vector<std::pair<NodeId, bool>> st{{root, false}};
    while (!st.empty()) {
        auto [v, ready] = st.back();
        st.pop_back();
        if (memo.count(v)) continue;
        if (!ready) {
            st.push_back({v, true});
            switch (a.kind(v)) {
                case NodeKind::Union:
                case NodeKind::Product:
                    st.push_back({a.left(v), false});
                    st.push_back({a.right(v), false});
                    break;
                case NodeKind::Shift: st.push_back({a.left(v), false}); break;
                default: break;
            }
            continue;
        }
        SemValue r;
        switch (a.kind(v)) {
            case NodeKind::Bot: break;
            case NodeKind::Eps:
                r.set.insert(Annotation{});
                r.count = 1;
                break;
            case NodeKind::Output:
                r.set.insert(Annotation{{a.output_name(a.sym_of(v)), 1}});
                r.count = 1;
                break;
            case NodeKind::SersOutput: {
                if (!sers) fail("DimensionMismatch", "set-of-sets leaf without a nested store");
                SemValue inner = sem_oracle(*sers, a.rep_of(v), nullptr, budget);
                for (const Annotation& seq : inner.set)
                    r.set.insert(Annotation{{sers_set_symbol(seq), 1}});
                r.count = inner.count;
                break;
            }
            case NodeKind::Union: {
                const SemValue& l = memo[a.left(v)];
                const SemValue& rr = memo[a.right(v)];
                r.set = l.set;
                r.set.insert(rr.set.begin(), rr.set.end());
                r.count = l.count + rr.count;
                break;
            }
            case NodeKind::Product: {
                const SemValue& l = memo[a.left(v)];
                const SemValue& rr = memo[a.right(v)];
                for (const Annotation& x : l.set)
                    for (const Annotation& y : rr.set) {
                        Annotation xy = x;
                        xy.insert(xy.end(), y.begin(), y.end());
                        work += xy.size() + 1;
                        r.set.insert(std::move(xy));
                    }
                r.count = l.count * rr.count;
                break;
            }
            case NodeKind::Shift: {
                const SemValue& l = memo[a.left(v)];
                int64_t k = a.shift_of(v);
                for (const Annotation& x : l.set) {
                    Annotation y = x;
                    for (AnnPair& p : y) p.pos = checked_add(p.pos, k);
                    work += y.size() + 1;
                    r.set.insert(std::move(y));
                }
                r.count = l.count;
                break;
            }
        }
        work += r.set.size() + 1;
        if (work > budget) fail("BudgetExceeded", "semantics oracle budget exhausted");
        memo.emplace(v, std::move(r));
    }
    return memo[root];
}

}  // namespace gcq
