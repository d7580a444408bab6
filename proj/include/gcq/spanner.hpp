// spanner.hpp -- document spanners: sequential (extended) variable-set
// automata, reductions to (succinctly) annotated automata, mappings.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gcq/automaton.hpp"
#include "gcq/ecs.hpp"
#include "gcq/errors.hpp"
#include "gcq/eval.hpp"
#include "gcq/slp.hpp"
#include "gcq/text.hpp"

namespace gcq {

constexpr Char kEndMarker = U'#';

struct Span {
    uint64_t i = 0, j = 0;
    auto operator<=>(const Span&) const = default;
};

using Mapping = std::map<std::string, Span>;  // variable -> span, sorted

inline std::string format_mapping(const Mapping& m) {
    if (m.empty()) return "()";
    std::string out;
    for (const auto& [var, sp] : m) {
        if (!out.empty()) out += " ";
        out += var + "=[" + std::to_string(sp.i) + "," + std::to_string(sp.j) + ")";
    }
    return out;
}

// A variable marker: open (span start) or close (span end).
struct Marker {
    bool open;
    std::string var;
    auto operator<=>(const Marker&) const = default;

    std::string str() const { return (open ? "open:" : "close:") + var; }
};

using MarkerSet = std::set<Marker>;

inline std::string marker_set_symbol(const MarkerSet& s) {
    std::string out;
    for (const Marker& m : s) {
        if (!out.empty()) out += ",";
        out += m.str();
    }
    return out;
}

inline Marker parse_marker(const std::string& tok, size_t line_no) {
    auto err = [&](const std::string& m) {
        fail("SyntaxError", "line " + std::to_string(line_no) + ": " + m);
    };
    size_t colon = tok.find(':');
    if (colon == std::string::npos) err("expected open:<var> or close:<var>");
    std::string kind = tok.substr(0, colon), var = tok.substr(colon + 1);
    if (!text::is_identifier(var)) err("bad variable name " + var);
    if (kind == "open") return {true, var};
    if (kind == "close") return {false, var};
    err("expected open:<var> or close:<var>");
    return {};
}

// --- automaton models ----------------------------------------------------

struct ExtendedVa {
    struct Letter {
        uint32_t p;
        Char a;
        uint32_t q;
    };
    struct SetTrans {
        uint32_t p;
        MarkerSet set;
        uint32_t q;
    };
    std::vector<std::string> state_names;
    std::map<std::string, uint32_t> state_index;
    std::set<std::string> vars;
    uint32_t init = 0;
    std::vector<uint32_t> finals;
    std::vector<Letter> letters;
    std::vector<SetTrans> sets;

    uint32_t add_state(const std::string& n) {
        auto it = state_index.find(n);
        if (it != state_index.end()) return it->second;
        uint32_t i = static_cast<uint32_t>(state_names.size());
        state_names.push_back(n);
        state_index.emplace(n, i);
        return i;
    }
    uint32_t state(const std::string& n) const {
        auto it = state_index.find(n);
        if (it == state_index.end()) fail("UnknownState", "no state named " + n);
        return it->second;
    }
    bool is_final(uint32_t q) const {
        return std::find(finals.begin(), finals.end(), q) != finals.end();
    }
};

struct Va {
    struct Letter {
        uint32_t p;
        Char a;
        uint32_t q;
    };
    struct VarTrans {
        uint32_t p;
        Marker m;
        uint32_t q;
    };
    std::vector<std::string> state_names;
    std::map<std::string, uint32_t> state_index;
    std::set<std::string> vars;
    uint32_t init = 0;
    std::vector<uint32_t> finals;
    std::vector<Letter> letters;
    std::vector<VarTrans> vtrans;

    uint32_t add_state(const std::string& n) {
        auto it = state_index.find(n);
        if (it != state_index.end()) return it->second;
        uint32_t i = static_cast<uint32_t>(state_names.size());
        state_names.push_back(n);
        state_index.emplace(n, i);
        return i;
    }
    uint32_t state(const std::string& n) const {
        auto it = state_index.find(n);
        if (it == state_index.end()) fail("UnknownState", "no state named " + n);
        return it->second;
    }
    bool is_final(uint32_t q) const {
        return std::find(finals.begin(), finals.end(), q) != finals.end();
    }
};

// --- file formats --------------------------------------------------------
//
//   eva v1                          va v1
//   states p q                      states p q
//   init p                          init p
//   final q                         final q
//   letter p 'a' q                  letter p 'a' q
//   markers p {open:x,close:x} q    open p x q
//                                   close p x q

namespace detail {

template <typename A>
void parse_spanner_common(A& a, const std::vector<std::string>& toks, size_t line_no,
                          bool& saw_init, std::set<uint32_t>& final_set) {
    auto err = [&](const std::string& m) {
        fail("SyntaxError", "line " + std::to_string(line_no) + ": " + m);
    };
    if (toks[0] == "states") {
        for (size_t i = 1; i < toks.size(); ++i) {
            if (!text::is_identifier(toks[i])) err("bad state name " + toks[i]);
            a.add_state(toks[i]);
        }
    } else if (toks[0] == "init") {
        if (toks.size() != 2) err("init expects one state");
        a.init = a.state(toks[1]);
        saw_init = true;
    } else if (toks[0] == "final") {
        for (size_t i = 1; i < toks.size(); ++i) {
            uint32_t q = a.state(toks[i]);
            if (final_set.insert(q).second) a.finals.push_back(q);
        }
    } else if (toks[0] == "letter") {
        if (toks.size() != 4) err("expected: letter <p> '<c>' <q>");
        a.letters.push_back({a.state(toks[1]),
                             text::parse_quoted_char(toks[2], line_no),
                             a.state(toks[3])});
    } else {
        err("unknown directive " + toks[0]);
    }
}

}  // namespace detail

inline ExtendedVa parse_eva(const std::string& input) {
    ExtendedVa a;
    auto lines = text::lines_of(input);
    bool saw_header = false, saw_init = false;
    std::set<uint32_t> final_set;
    for (size_t li = 0; li < lines.size(); ++li) {
        size_t line_no = li + 1;
        auto toks = text::split_line(lines[li], line_no);
        if (toks.empty()) continue;
        auto err = [&](const std::string& m) {
            fail("SyntaxError", "line " + std::to_string(line_no) + ": " + m);
        };
        if (!saw_header) {
            if (toks.size() != 2 || toks[0] != "eva" || toks[1] != "v1")
                err("expected header: eva v1");
            saw_header = true;
            continue;
        }
        if (toks[0] == "markers") {
            if (toks.size() != 4 || toks[2].front() != '{' || toks[2].back() != '}')
                err("expected: markers <p> {open:x,...} <q>");
            std::string body = toks[2].substr(1, toks[2].size() - 2);
            MarkerSet set;
            size_t start = 0;
            if (body.empty()) err("marker set may not be empty");
            while (start <= body.size()) {
                size_t comma = body.find(',', start);
                std::string one = comma == std::string::npos
                                      ? body.substr(start)
                                      : body.substr(start, comma - start);
                Marker m = parse_marker(one, line_no);
                if (!set.insert(m).second)
                    fail("MarkerConflict", "line " + std::to_string(line_no) +
                                               ": duplicate marker " + m.str());
                a.vars.insert(m.var);
                if (comma == std::string::npos) break;
                start = comma + 1;
            }
            a.sets.push_back({a.state(toks[1]), std::move(set), a.state(toks[3])});
        } else {
            detail::parse_spanner_common(a, toks, line_no, saw_init, final_set);
        }
    }
    if (!saw_header) fail("SyntaxError", "expected header: eva v1");
    if (a.state_names.empty()) fail("SyntaxError", "automaton has no states");
    if (!saw_init) fail("SyntaxError", "missing init line");
    return a;
}

inline Va parse_va(const std::string& input) {
    Va a;
    auto lines = text::lines_of(input);
    bool saw_header = false, saw_init = false;
    std::set<uint32_t> final_set;
    for (size_t li = 0; li < lines.size(); ++li) {
        size_t line_no = li + 1;
        auto toks = text::split_line(lines[li], line_no);
        if (toks.empty()) continue;
        auto err = [&](const std::string& m) {
            fail("SyntaxError", "line " + std::to_string(line_no) + ": " + m);
        };
        if (!saw_header) {
            if (toks.size() != 2 || toks[0] != "va" || toks[1] != "v1")
                err("expected header: va v1");
            saw_header = true;
            continue;
        }
        if (toks[0] == "open" || toks[0] == "close") {
            if (toks.size() != 4) err("expected: " + toks[0] + " <p> <var> <q>");
            if (!text::is_identifier(toks[2])) err("bad variable name " + toks[2]);
            Marker m{toks[0] == "open", toks[2]};
            a.vars.insert(m.var);
            a.vtrans.push_back({a.state(toks[1]), std::move(m), a.state(toks[3])});
        } else {
            detail::parse_spanner_common(a, toks, line_no, saw_init, final_set);
        }
    }
    if (!saw_header) fail("SyntaxError", "expected header: va v1");
    if (a.state_names.empty()) fail("SyntaxError", "automaton has no states");
    if (!saw_init) fail("SyntaxError", "missing init line");
    return a;
}

// --- extended VA -> annotated automaton ----------------------------------

// Set transitions are pushed onto the following letter (or the end marker):
// (p,S,q') + (q',a,q) becomes the read-write (p,(a,S),q). Runs of the
// result on d·# correspond one-to-one to accepting runs of the eva on d.
inline AnnA compile_extended_va(const ExtendedVa& eva,
                                std::vector<std::string>* warnings = nullptr) {
    AnnA a;
    for (const auto& n : eva.state_names) a.add_state(n);
    uint32_t sink = a.add_state([&] {
        std::string n = "qend";
        while (eva.state_index.count(n)) n = "_" + n;
        return n;
    }());
    a.init = eva.init;
    a.finals = {sink};
    std::set<AnnA::Read> read_set;
    std::set<AnnA::Write> write_set;
    for (const auto& t : eva.letters) {
        AnnA::Read r{t.p, t.a, t.q};
        if (read_set.insert(r).second) a.reads.push_back(r);
    }
    for (uint32_t f : eva.finals) {
        AnnA::Read r{f, kEndMarker, sink};
        if (read_set.insert(r).second) a.reads.push_back(r);
    }
    for (const auto& st : eva.sets) {
        uint32_t sym = a.add_output(marker_set_symbol(st.set));
        bool live = false;
        for (const auto& t : eva.letters) {
            if (t.p != st.q) continue;
            AnnA::Write w{st.p, t.a, sym, t.q};
            if (write_set.insert(w).second) a.writes.push_back(w);
            live = true;
        }
        if (eva.is_final(st.q)) {
            AnnA::Write w{st.p, kEndMarker, sym, sink};
            if (write_set.insert(w).second) a.writes.push_back(w);
            live = true;
        }
        if (!live && warnings)
            warnings->push_back("dropped dead set transition from " +
                                eva.state_names[st.p] + " to " +
                                eva.state_names[st.q]);
    }
    return a;
}

// Reads one annotation over marker-set symbols back into the mapping it
// encodes. Verifies open/close discipline.
inline Mapping mapping_of_annotation(const Annotation& ann) {
    Mapping m;
    std::set<std::string> open_now, closed;
    for (const AnnPair& p : ann) {
        // All opens of one set apply before its closes, so a variable may
        // open and close at the same position (empty span).
        std::vector<Marker> markers;
        size_t start = 0;
        const std::string& s = p.sym;
        while (start <= s.size()) {
            size_t comma = s.find(',', start);
            std::string one = comma == std::string::npos ? s.substr(start)
                                                         : s.substr(start, comma - start);
            markers.push_back(parse_marker(one, 0));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        for (const Marker& mk : markers) {
            if (!mk.open) continue;
            if (open_now.count(mk.var) || closed.count(mk.var))
                fail("InconsistentMarkers", "variable " + mk.var + " opened twice");
            open_now.insert(mk.var);
            m[mk.var].i = static_cast<uint64_t>(p.pos);
        }
        for (const Marker& mk : markers) {
            if (mk.open) continue;
            if (!open_now.count(mk.var))
                fail("InconsistentMarkers",
                     "variable " + mk.var + " closed while not open");
            open_now.erase(mk.var);
            closed.insert(mk.var);
            m[mk.var].j = static_cast<uint64_t>(p.pos);
        }
    }
    if (!open_now.empty())
        fail("InconsistentMarkers", "variable " + *open_now.begin() + " never closed");
    return m;
}

// --- VA -> succinct annotated automaton ----------------------------------

// Read-write transitions carry a handle into a nested marker store instead
// of one output symbol; the handle's language is a set of marker sets.
struct SuccinctAnnA {
    TransView trans;
    std::shared_ptr<EcsArena> sers;
    std::vector<std::string> state_names;
};

// Number of marker sets a representation holds (explicit-size oracle helper).
inline uint64_t rep_count(const EcsArena& sers, NodeId rep) {
    std::map<NodeId, uint64_t> memo;
    std::vector<std::pair<NodeId, bool>> st{{rep, false}};
    while (!st.empty()) {
        auto [v, ready] = st.back();
        st.pop_back();
        if (memo.count(v)) continue;
        if (!ready) {
            st.push_back({v, true});
            if (sers.kind(v) == NodeKind::Union || sers.kind(v) == NodeKind::Product) {
                st.push_back({sers.left(v), false});
                st.push_back({sers.right(v), false});
            } else if (sers.kind(v) == NodeKind::Shift) {
                st.push_back({sers.left(v), false});
            }
            continue;
        }
        uint64_t c = 0;
        switch (sers.kind(v)) {
            case NodeKind::Bot: c = 0; break;
            case NodeKind::Eps:
            case NodeKind::Output: c = 1; break;
            case NodeKind::Union: c = memo[sers.left(v)] + memo[sers.right(v)]; break;
            case NodeKind::Product: c = memo[sers.left(v)] * memo[sers.right(v)]; break;
            case NodeKind::Shift: c = memo[sers.left(v)]; break;
            default: fail("DimensionMismatch", "nested store inside a nested store");
        }
        memo.emplace(v, c);
    }
    return memo[rep];
}

// K-matrix construction over variable-only paths, then the same stitch as
// the extended-VA reduction with K entries in place of explicit sets.
inline SuccinctAnnA compile_va(const Va& va) {
    uint32_t n = static_cast<uint32_t>(va.state_names.size());
    // Topological order of states under variable edges (Kahn; ties and
    // isolated states in file order). A cycle of variable edges would admit
    // unboundedly many markers between two letters: not sequential.
    std::vector<uint32_t> indeg(n, 0);
    for (const auto& t : va.vtrans)
        if (t.p != t.q) indeg[t.q]++;
        else fail("NotSequential", "variable transition loops on one state");
    std::vector<uint32_t> order;
    std::vector<uint32_t> topo_pos(n, 0);
    {
        std::vector<uint32_t> deg = indeg;
        std::vector<uint32_t> ready;
        for (uint32_t q = 0; q < n; ++q)
            if (deg[q] == 0) ready.push_back(q);
        size_t next = 0;
        while (next < ready.size()) {
            uint32_t p = ready[next++];
            order.push_back(p);
            for (const auto& t : va.vtrans)
                if (t.p == p && --deg[t.q] == 0) ready.push_back(t.q);
        }
        if (order.size() != n)
            fail("NotSequential", "variable transitions form a cycle");
        for (uint32_t i = 0; i < n; ++i) topo_pos[order[i]] = i;
    }
    SuccinctAnnA out;
    out.sers = std::make_shared<EcsArena>();
    EcsArena& sers = *out.sers;
    std::vector<NodeId> K(size_t{n} * n, EcsArena::kBot);
    auto k_at = [&](uint32_t p, uint32_t q) -> NodeId& { return K[size_t{p} * n + q]; };
    for (uint32_t q = 0; q < n; ++q) k_at(q, q) = EcsArena::kEps;
    std::vector<uint32_t> by_topo(va.vtrans.size());
    for (uint32_t i = 0; i < va.vtrans.size(); ++i) by_topo[i] = i;
    std::stable_sort(by_topo.begin(), by_topo.end(), [&](uint32_t x, uint32_t y) {
        return topo_pos[va.vtrans[x].p] < topo_pos[va.vtrans[y].p];
    });
    for (uint32_t ti : by_topo) {
        const auto& t = va.vtrans[ti];
        NodeId u = sers.add(t.m.str());
        for (uint32_t p2 = 0; p2 < n; ++p2) {
            if (k_at(p2, t.p) == EcsArena::kBot) continue;
            NodeId path = sers.prod(k_at(p2, t.p), u);
            k_at(p2, t.q) = sers.unite(k_at(p2, t.q), path);
        }
    }
    // Stitch: plain reads survive; every non-trivial K entry rides on each
    // letter leaving its target state; '#' plumbing for finals.
    out.state_names = va.state_names;
    std::string sink_name = "qend";
    while (va.state_index.count(sink_name)) sink_name = "_" + sink_name;
    out.state_names.push_back(sink_name);
    uint32_t sink = n;
    out.trans.n_states = n + 1;
    out.trans.init = va.init;
    out.trans.finals = {sink};
    for (const auto& t : va.letters) out.trans.reads.push_back({t.p, t.a, t.q});
    for (uint32_t f : va.finals) out.trans.reads.push_back({f, kEndMarker, sink});
    for (const auto& t : va.letters)
        for (uint32_t p2 = 0; p2 < n; ++p2) {
            if (p2 == t.p || k_at(p2, t.p) == EcsArena::kBot) continue;
            out.trans.writes.push_back({p2, t.a, true, "", k_at(p2, t.p), t.q});
        }
    for (uint32_t f : va.finals)
        for (uint32_t p2 = 0; p2 < n; ++p2) {
            if (p2 == f || k_at(p2, f) == EcsArena::kBot) continue;
            out.trans.writes.push_back({p2, kEndMarker, true, "", k_at(p2, f), sink});
        }
    return out;
}

// --- evaluation pipelines ------------------------------------------------

// Copies the grammar and appends root__end -> root __hash, __hash -> '#'
// so spanner automata (which consume d·#) can run over it.
inline std::pair<Slp, uint32_t> with_end_marker(const Slp& slp, uint32_t root) {
    for (Char c : slp_alphabet(slp))
        if (c == kEndMarker)
            fail("MarkerInUse", "document already contains the reserved terminal '#'");
    Slp s = slp;
    uint32_t hash_nt = s.add_nonterminal(s.fresh_name("__hash"));
    s.rules[hash_nt] = {Sym::term(kEndMarker)};
    uint32_t root2 =
        s.add_nonterminal(s.fresh_name(s.nt_names[root] + "__end"));
    s.rules[root2] = {Sym::nonterm(root), Sym::nonterm(hash_nt)};
    validate_slp(s);
    return {std::move(s), root2};
}

// Extended-VA pipeline: compile, evaluate over doc(root)·#, decode mappings.
inline std::set<Mapping> evaluate_eva(const ExtendedVa& eva, const Slp& slp,
                                      uint32_t root,
                                      uint64_t limit = uint64_t{1} << 22) {
    AnnA a = compile_extended_va(eva);
    auto [s2, root2] = with_end_marker(slp, root);
    EvalResult r = evaluate(a, s2, root2);
    std::set<Mapping> out;
    for (const Annotation& ann :
         enumerate_all(r.qds->arena, r.root, nullptr, limit))
        out.insert(mapping_of_annotation(ann));
    return out;
}

inline std::unique_ptr<QueryDataStructure> build_query_structure_succinct(
    const SuccinctAnnA& t, const Slp& slp, uint32_t root) {
    auto qds = std::make_unique<QueryDataStructure>();
    qds->trans = t.trans;
    qds->sers = t.sers;
    ensure_symbol(*qds, slp, root);
    return qds;
}

// Succinct pipeline: matrices of handles whose leaves are themselves
// nested marker-store sessions at enumeration time.
inline EvalResult evaluate_succinct(const SuccinctAnnA& t, const Slp& slp,
                                    std::optional<uint32_t> root_nt = std::nullopt) {
    if (!root_nt && !slp.start)
        fail("UnknownSymbol", "grammar has no start symbol; pass a root");
    uint32_t root = root_nt ? *root_nt : *slp.start;
    EvalResult r;
    r.qds = build_query_structure_succinct(t, slp, root);
    r.root = query_root(*r.qds, slp, root);
    return r;
}

inline std::set<Mapping> evaluate_va(const Va& va, const Slp& slp, uint32_t root,
                                     uint64_t limit = uint64_t{1} << 22) {
    SuccinctAnnA t = compile_va(va);
    auto [s2, root2] = with_end_marker(slp, root);
    EvalResult r = evaluate_succinct(t, s2, root2);
    std::set<Mapping> out;
    for (const Annotation& ann :
         enumerate_all(r.qds->arena, r.root, r.qds->sers.get(), limit))
        out.insert(mapping_of_annotation(ann));
    return out;
}

// --- brute-force run-search oracles (independent of the matrix path) -----

// All accepting-run mappings of a VA on a concrete document, one entry per
// run (duplicates reveal ambiguity). Marker discipline enforced on the fly.
inline std::vector<Mapping> va_oracle_runs(const Va& va, const U32String& doc,
                                           uint64_t budget = uint64_t{1} << 22) {
    std::vector<Mapping> out;
    uint64_t work = 0;
    struct Frame {
        uint32_t state;
        size_t pos;
        Mapping m;
        std::set<std::string> open;
        std::set<std::string> closed;
    };
    std::vector<Frame> st{{va.init, 0, {}, {}, {}}};
    while (!st.empty()) {
        Frame f = std::move(st.back());
        st.pop_back();
        if (++work > budget) fail("BudgetExceeded", "run search budget exhausted");
        if (f.pos == doc.size() && va.is_final(f.state) && f.open.empty())
            out.push_back(f.m);
        for (const auto& t : va.letters) {
            if (t.p != f.state || f.pos >= doc.size() || doc[f.pos] != t.a) continue;
            Frame g = f;
            g.state = t.q;
            g.pos++;
            st.push_back(std::move(g));
        }
        for (const auto& t : va.vtrans) {
            if (t.p != f.state) continue;
            if (t.m.open && (f.open.count(t.m.var) || f.closed.count(t.m.var)))
                continue;
            if (!t.m.open && !f.open.count(t.m.var)) continue;
            Frame g = f;
            g.state = t.q;
            if (t.m.open) {
                g.open.insert(t.m.var);
                g.m[t.m.var].i = f.pos + 1;
            } else {
                g.open.erase(t.m.var);
                g.closed.insert(t.m.var);
                g.m[t.m.var].j = f.pos + 1;
            }
            st.push_back(std::move(g));
        }
    }
    return out;
}

// Same for an extended VA: set transitions alternate with letters, an
// optional final set transition may precede acceptance.
inline std::vector<Mapping> eva_oracle_runs(const ExtendedVa& eva,
                                            const U32String& doc,
                                            uint64_t budget = uint64_t{1} << 22) {
    std::vector<Mapping> out;
    uint64_t work = 0;
    struct Frame {
        uint32_t state;
        size_t pos;
        Mapping m;
        std::set<std::string> open;
        std::set<std::string> closed;
    };
    auto apply_set = [](Frame& g, const MarkerSet& set, uint64_t at) -> bool {
        for (const Marker& mk : set) {
            if (!mk.open) continue;
            if (g.open.count(mk.var) || g.closed.count(mk.var)) return false;
            g.open.insert(mk.var);
            g.m[mk.var].i = at;
        }
        for (const Marker& mk : set) {
            if (mk.open) continue;
            if (!g.open.count(mk.var)) return false;
            g.open.erase(mk.var);
            g.closed.insert(mk.var);
            g.m[mk.var].j = at;
        }
        return true;
    };
    std::vector<Frame> st{{eva.init, 0, {}, {}, {}}};
    while (!st.empty()) {
        Frame f = std::move(st.back());
        st.pop_back();
        if (++work > budget) fail("BudgetExceeded", "run search budget exhausted");
        if (f.pos == doc.size()) {
            if (eva.is_final(f.state) && f.open.empty()) out.push_back(f.m);
            for (const auto& t : eva.sets) {
                if (t.p != f.state || !eva.is_final(t.q)) continue;
                Frame g = f;
                g.state = t.q;
                if (apply_set(g, t.set, doc.size() + 1) && g.open.empty())
                    out.push_back(g.m);
            }
        }
        if (f.pos < doc.size()) {
            for (const auto& t : eva.letters) {
                if (t.p != f.state || doc[f.pos] != t.a) continue;
                Frame g = f;
                g.state = t.q;
                g.pos++;
                st.push_back(std::move(g));
            }
            for (const auto& t : eva.sets) {
                if (t.p != f.state) continue;
                Frame g = f;
                g.state = t.q;
                if (!apply_set(g, t.set, f.pos + 1)) continue;
                for (const auto& lt : eva.letters) {
                    if (lt.p != g.state || doc[f.pos] != lt.a) continue;
                    Frame h = g;
                    h.state = lt.q;
                    h.pos++;
                    st.push_back(std::move(h));
                }
            }
        }
    }
    return out;
}

}  // namespace gcq
