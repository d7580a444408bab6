// edits.hpp -- document databases with concat-only editing over rootless
// CNF grammars; query structures extend per new rule without re-preprocessing.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gcq/errors.hpp"
#include "gcq/eval.hpp"
#include "gcq/slp.hpp"
#include "gcq/spanner.hpp"

namespace gcq {

struct DocDatabase {
    Slp slp;  // CNF, rootless
    std::vector<std::string> doc_order;      // file order plus created docs
    std::map<std::string, uint32_t> docs;    // doc name -> nonterminal
    bool end_markers = false;
    uint32_t hash_nt = 0;  // wrapper for the '#' terminal, when attached
    std::map<std::string, uint32_t> companions;  // doc name -> A·# nonterminal
};

// Database file: an SLP file without a start line plus `doc <name> <Id>`
// lines. Non-CNF grammars are normalized on load (names preserved).
inline DocDatabase parse_database(const std::string& input, bool to_cnf = true) {
    auto lines = text::lines_of(input);
    size_t li = 0;
    while (li < lines.size() && text::split_line(lines[li], li + 1).empty()) ++li;
    auto header = li < lines.size() ? text::split_line(lines[li], li + 1)
                                    : std::vector<std::string>{};
    if (header.size() != 2 || header[0] != "slp" || header[1] != "v1")
        fail("SyntaxError", "expected header: slp v1");
    std::vector<std::pair<std::string, std::string>> doc_lines;
    DocDatabase db;
    db.slp = parse_slp_body(lines, li + 1, true, &doc_lines);
    if (to_cnf) db.slp = binarize(db.slp);
    for (auto& [name, nt_name] : doc_lines) {
        if (db.docs.count(name)) fail("NameClash", "duplicate doc name " + name);
        db.docs.emplace(name, db.slp.resolve(nt_name));
        db.doc_order.push_back(name);
    }
    return db;
}

inline uint32_t doc_nt(const DocDatabase& db, const std::string& name) {
    auto it = db.docs.find(name);
    if (it == db.docs.end()) fail("UnknownDoc", "no doc named " + name);
    return it->second;
}

// Appends one binary rule and its cached length; O(1), no re-validation.
inline uint32_t append_binary_rule(Slp& s, const std::string& name, uint32_t b,
                                   uint32_t c) {
    uint32_t nt = s.add_nonterminal(s.fresh_name(name));
    s.rules[nt] = {Sym::nonterm(b), Sym::nonterm(c)};
    uint64_t lb = s.lens[b], lc = s.lens[c];
    if (lb > kMaxDocLen - lc)
        fail("DocTooLarge", "concatenation reaches 2^63 characters");
    s.lens.push_back(lb + lc);
    s.topo.push_back(nt);
    return nt;
}

// concat <new> = <name1> <name2>: one fresh binary nonterminal; the new doc
// name is registered on it. Returns the fresh nonterminal indices (one here;
// the signature covers nested expressions built by chained script lines).
inline std::vector<uint32_t> apply_concat(DocDatabase& db, const std::string& new_name,
                                          const std::string& n1,
                                          const std::string& n2) {
    if (db.docs.count(new_name)) fail("NameClash", "doc " + new_name + " already exists");
    if (!text::is_identifier(new_name))
        fail("SyntaxError", "bad doc name " + new_name);
    uint32_t b = doc_nt(db, n1), c = doc_nt(db, n2);
    uint32_t nt = append_binary_rule(db.slp, new_name, b, c);
    db.docs.emplace(new_name, nt);
    db.doc_order.push_back(new_name);
    std::vector<uint32_t> fresh{nt};
    if (db.end_markers) {
        uint32_t comp = append_binary_rule(db.slp, new_name + "__end", nt, db.hash_nt);
        db.companions.emplace(new_name, comp);
        fresh.push_back(comp);
    }
    return fresh;
}

// Companion rules A__end -> A __hash (doc(A)·#) for every named doc, used
// by spanner queries. Idempotent; errors when '#' already occurs.
inline std::vector<uint32_t> attach_end_marker(DocDatabase& db) {
    if (db.end_markers) return {};
    for (Char c : slp_alphabet(db.slp))
        if (c == kEndMarker)
            fail("MarkerInUse", "database documents already use the terminal '#'");
    std::vector<uint32_t> fresh;
    uint32_t hash_nt = db.slp.add_nonterminal(db.slp.fresh_name("__hash"));
    db.slp.rules[hash_nt] = {Sym::term(kEndMarker)};
    db.slp.lens.push_back(1);
    db.slp.topo.push_back(hash_nt);
    db.hash_nt = hash_nt;
    fresh.push_back(hash_nt);
    for (const std::string& name : db.doc_order) {
        uint32_t comp =
            append_binary_rule(db.slp, name + "__end", db.docs[name], hash_nt);
        db.companions.emplace(name, comp);
        fresh.push_back(comp);
    }
    db.end_markers = true;
    return fresh;
}

// Computes matrices for freshly appended nonterminals. Existing matrices
// and arena nodes are reused untouched (append-only), so per new binary
// rule the work is one shifted matrix product.
inline void extend_query_structure(QueryDataStructure& qds, const Slp& slp,
                                   const std::vector<uint32_t>& fresh_nts) {
    for (uint32_t nt : fresh_nts) ensure_symbol(qds, slp, nt);
}

// Streams one doc's current results. The root handle per nonterminal is
// cached inside the structure, so re-querying after edits reuses it.
inline EnumSession query_doc(QueryDataStructure& qds, const DocDatabase& db,
                             const std::string& name, bool spanner_mode = false) {
    uint32_t nt;
    if (spanner_mode) {
        auto it = db.companions.find(name);
        if (it == db.companions.end())
            fail("UnknownDoc", "no end-marker companion for doc " + name);
        nt = it->second;
    } else {
        nt = doc_nt(db, name);
    }
    NodeId root = query_root(qds, db.slp, nt);
    return EnumSession(qds.arena, root, qds.sers.get());
}

}  // namespace gcq
