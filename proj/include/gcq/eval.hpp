// eval.hpp -- evaluating annotated automata over SLP-compressed documents
//
// One (|Q| x |Q|)-matrix of arena handles per grammar symbol: entry (p, q)
// represents the annotation set of all partial runs p -> q across the
// symbol's expansion. Rules fold left to right with shifted factors;
// memoization makes the work linear in grammar size for fixed |Q|.
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gcq/automaton.hpp"
#include "gcq/ecs.hpp"
#include "gcq/enumerate.hpp"
#include "gcq/errors.hpp"
#include "gcq/slp.hpp"

namespace gcq {

struct NodeMatrix {
    uint32_t n = 0;
    std::vector<NodeId> e;

    NodeMatrix() = default;
    NodeMatrix(uint32_t n_, NodeId fill) : n(n_), e(size_t{n_} * n_, fill) {}

    NodeId& at(uint32_t p, uint32_t q) { return e[size_t{p} * n + q]; }
    NodeId at(uint32_t p, uint32_t q) const { return e[size_t{p} * n + q]; }
};

inline NodeMatrix identity_matrix(uint32_t n) {
    NodeMatrix m(n, EcsArena::kBot);
    for (uint32_t p = 0; p < n; ++p) m.at(p, p) = EcsArena::kEps;
    return m;
}

// (m1 x m2)[p,q] = union over i of prod(m1[p,i], m2[i,q]), folded left to
// right; bottom pairs are skipped before any operation is issued.
inline NodeMatrix mat_mul(EcsArena& a, const NodeMatrix& m1, const NodeMatrix& m2) {
    if (m1.n != m2.n) fail("DimensionMismatch", "matrix sizes differ");
    NodeMatrix out(m1.n, EcsArena::kBot);
    for (uint32_t p = 0; p < m1.n; ++p)
        for (uint32_t q = 0; q < m1.n; ++q) {
            NodeId acc = EcsArena::kBot;
            for (uint32_t i = 0; i < m1.n; ++i) {
                NodeId x = m1.at(p, i), y = m2.at(i, q);
                if (x == EcsArena::kBot || y == EcsArena::kBot) continue;
                NodeId w = a.prod(x, y);
                acc = acc == EcsArena::kBot ? w : a.unite(acc, w);
            }
            out.at(p, q) = acc;
        }
    return out;
}

inline NodeMatrix mat_shift(EcsArena& a, const NodeMatrix& m, int64_t k) {
    NodeMatrix out(m.n, EcsArena::kBot);
    for (size_t i = 0; i < m.e.size(); ++i)
        out.e[i] = m.e[i] == EcsArena::kBot ? EcsArena::kBot : a.shift(m.e[i], k);
    return out;
}

// Uniform transition view shared by the plain pipeline (output symbols) and
// the succinct spanner pipeline (set-of-sets representations).
struct TransView {
    uint32_t n_states = 0;
    uint32_t init = 0;
    std::vector<uint32_t> finals;
    struct R {
        uint32_t p;
        Char a;
        uint32_t q;
    };
    struct W {
        uint32_t p;
        Char a;
        bool is_rep = false;
        std::string omega;  // when !is_rep
        NodeId rep = 0;     // when is_rep: handle into the nested store
        uint32_t q;
    };
    std::vector<R> reads;
    std::vector<W> writes;

    static TransView from_anna(const AnnA& a) {
        TransView t;
        t.n_states = static_cast<uint32_t>(a.n_states());
        t.init = a.init;
        t.finals = a.finals;
        for (const auto& r : a.reads) t.reads.push_back({r.p, r.a, r.q});
        for (const auto& w : a.writes)
            t.writes.push_back({w.p, w.a, false, a.out_names[w.omega], 0, w.q});
        return t;
    }
};

// Matrix for one terminal: write transitions contribute fresh singletons,
// read transitions contribute the empty annotation, both in file order.
inline NodeMatrix terminal_matrix(EcsArena& a, const TransView& t, Char c) {
    NodeMatrix m(t.n_states, EcsArena::kBot);
    for (const auto& w : t.writes) {
        if (w.a != c) continue;
        NodeId u = w.is_rep ? a.add_rep(w.rep) : a.add(w.omega);
        m.at(w.p, w.q) = a.unite(m.at(w.p, w.q), u);
    }
    for (const auto& r : t.reads) {
        if (r.a != c) continue;
        m.at(r.p, r.q) = a.unite(m.at(r.p, r.q), EcsArena::kEps);
    }
    return m;
}

// Grammar-symbol keys: terminals tagged above the nonterminal index range.
inline uint64_t sym_key(const Sym& s) {
    return s.terminal ? (uint64_t{1} << 40) | static_cast<uint64_t>(s.ch)
                      : static_cast<uint64_t>(s.nt);
}

struct QueryDataStructure {
    EcsArena arena;
    TransView trans;
    std::shared_ptr<const EcsArena> sers;  // nested store, spanner path only
    std::unordered_map<uint64_t, NodeMatrix> mats;
    std::unordered_map<uint64_t, uint64_t> lens;
    std::unordered_map<uint64_t, uint64_t> compute_calls;
    std::unordered_map<uint32_t, NodeId> roots;  // per queried nonterminal

    const NodeMatrix& matrix_of(uint32_t nt) const {
        auto it = mats.find(nt);
        if (it == mats.end()) fail("UnknownSymbol", "no matrix for nonterminal");
        return it->second;
    }
};

// Computes the matrix of every symbol reachable from `root`, memoized, with
// an explicit work stack. Safe to call again for further roots; existing
// matrices are reused untouched.
inline void ensure_symbol(QueryDataStructure& qds, const Slp& slp, uint32_t root) {
    std::vector<uint64_t> work{sym_key(Sym::nonterm(root))};
    while (!work.empty()) {
        uint64_t key = work.back();
        if (qds.mats.count(key)) {
            work.pop_back();
            continue;
        }
        if (key >> 40) {
            Char c = static_cast<Char>(key & 0xffffffffull);
            qds.compute_calls[key]++;
            qds.mats.emplace(key, terminal_matrix(qds.arena, qds.trans, c));
            qds.lens[key] = 1;
            work.pop_back();
            continue;
        }
        uint32_t nt = static_cast<uint32_t>(key);
        const std::vector<Sym>& body = slp.rules.at(nt);
        bool missing = false;
        for (const Sym& s : body) {
            uint64_t k = sym_key(s);
            if (!qds.mats.count(k)) {
                work.push_back(k);
                missing = true;
            }
        }
        if (missing) continue;
        qds.compute_calls[key]++;
        // Seed the fold with the first symbol's matrix (offset 0); folding
        // from the identity would just multiply it back out.
        uint64_t k0 = sym_key(body[0]);
        NodeMatrix m = qds.mats.at(k0);
        uint64_t len = qds.lens[k0];
        for (size_t i = 1; i < body.size(); ++i) {
            uint64_t k = sym_key(body[i]);
            m = mat_mul(qds.arena, m, mat_shift(qds.arena, qds.mats[k],
                                                static_cast<int64_t>(len)));
            len += qds.lens[k];
        }
        qds.mats.emplace(key, std::move(m));
        qds.lens[key] = len;
        work.pop_back();
    }
}

// Root handle for one nonterminal: union over final states of the partial
// runs init -> f, folded in final-state file order. Cached per nonterminal.
inline NodeId query_root(QueryDataStructure& qds, const Slp& slp, uint32_t nt) {
    auto it = qds.roots.find(nt);
    if (it != qds.roots.end()) return it->second;
    ensure_symbol(qds, slp, nt);
    const NodeMatrix& m = qds.mats[nt];
    NodeId v = EcsArena::kBot;
    for (uint32_t f : qds.trans.finals) v = qds.arena.unite(v, m.at(qds.trans.init, f));
    qds.roots.emplace(nt, v);
    return v;
}

inline std::unique_ptr<QueryDataStructure> build_query_structure(const AnnA& a,
                                                                 const Slp& slp,
                                                                 uint32_t root) {
    auto qds = std::make_unique<QueryDataStructure>();
    qds->trans = TransView::from_anna(a);
    ensure_symbol(*qds, slp, root);
    return qds;
}

struct EvalResult {
    std::unique_ptr<QueryDataStructure> qds;
    NodeId root = EcsArena::kBot;

    EnumSession session() const {
        return EnumSession(qds->arena, root, qds->sers.get());
    }
};

// Full pipeline for a rooted SLP: preprocess in one pass over the grammar,
// then hand out enumeration sessions over the root handle.
inline EvalResult evaluate(const AnnA& a, const Slp& slp,
                           std::optional<uint32_t> root_nt = std::nullopt) {
    if (!root_nt && !slp.start)
        fail("UnknownSymbol", "grammar has no start symbol; pass a root");
    uint32_t root = root_nt ? *root_nt : *slp.start;
    EvalResult r;
    r.qds = build_query_structure(a, slp, root);
    r.root = query_root(*r.qds, slp, root);
    return r;
}

}  // namespace gcq
