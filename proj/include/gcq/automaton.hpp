// automaton.hpp -- annotated automata, naive evaluation, determinization
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "gcq/errors.hpp"
#include "gcq/text.hpp"

namespace gcq {

// One annotation token: an output symbol attached to a 1-based position.
struct AnnPair {
    std::string sym;
    int64_t pos;
    auto operator<=>(const AnnPair&) const = default;
};

using Annotation = std::vector<AnnPair>;

inline std::string format_annotation(const Annotation& ann) {
    if (ann.empty()) return "()";
    std::string out;
    for (size_t i = 0; i < ann.size(); ++i) {
        if (i) out += " ";
        out += ann[i].sym + "@" + std::to_string(ann[i].pos);
    }
    return out;
}

// An annotated automaton. Read transitions consume a letter; write
// transitions consume a letter and emit an output symbol at its position.
struct AnnA {
    struct Read {
        uint32_t p;
        Char a;
        uint32_t q;
        auto operator<=>(const Read&) const = default;
    };
    struct Write {
        uint32_t p;
        Char a;
        uint32_t omega;  // index into out_names
        uint32_t q;
        auto operator<=>(const Write&) const = default;
    };

    std::vector<std::string> state_names;
    std::unordered_map<std::string, uint32_t> state_index;
    std::vector<std::string> out_names;
    std::unordered_map<std::string, uint32_t> out_index;
    uint32_t init = 0;
    std::vector<uint32_t> finals;  // file order, duplicate-free
    std::vector<Read> reads;       // file order
    std::vector<Write> writes;     // file order

    uint32_t add_state(const std::string& name) {
        auto it = state_index.find(name);
        if (it != state_index.end()) return it->second;
        uint32_t idx = static_cast<uint32_t>(state_names.size());
        state_names.push_back(name);
        state_index.emplace(name, idx);
        return idx;
    }

    uint32_t state(const std::string& name) const {
        auto it = state_index.find(name);
        if (it == state_index.end()) fail("UnknownState", "no state named " + name);
        return it->second;
    }

    uint32_t add_output(const std::string& name) {
        auto it = out_index.find(name);
        if (it != out_index.end()) return it->second;
        uint32_t idx = static_cast<uint32_t>(out_names.size());
        out_names.push_back(name);
        out_index.emplace(name, idx);
        return idx;
    }

    size_t n_states() const { return state_names.size(); }
    size_t n_transitions() const { return reads.size() + writes.size(); }

    std::vector<Char> alphabet() const {
        std::vector<Char> v;
        for (const Read& r : reads) v.push_back(r.a);
        for (const Write& w : writes) v.push_back(w.a);
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    }

    bool is_final(uint32_t q) const {
        return std::find(finals.begin(), finals.end(), q) != finals.end();
    }
};

// --- file format ---------------------------------------------------------
//
//   anna v1
//   states q0 q1
//   init q0
//   final q1
//   read q0 'a' q0
//   write q0 'b' @mark q1

inline AnnA parse_anna(const std::string& input) {
    AnnA a;
    auto lines = text::lines_of(input);
    bool saw_header = false, saw_init = false;
    std::set<AnnA::Read> read_set;
    std::set<AnnA::Write> write_set;
    std::set<uint32_t> final_set;
    for (size_t li = 0; li < lines.size(); ++li) {
        size_t line_no = li + 1;
        auto toks = text::split_line(lines[li], line_no);
        if (toks.empty()) continue;
        auto err = [&](const std::string& m) {
            fail("SyntaxError", "line " + std::to_string(line_no) + ": " + m);
        };
        if (!saw_header) {
            if (toks.size() != 2 || toks[0] != "anna" || toks[1] != "v1")
                err("expected header: anna v1");
            saw_header = true;
            continue;
        }
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
        } else if (toks[0] == "read") {
            if (toks.size() != 4) err("expected: read <p> '<c>' <q>");
            AnnA::Read r{a.state(toks[1]), text::parse_quoted_char(toks[2], line_no),
                         a.state(toks[3])};
            if (!read_set.insert(r).second)
                fail("DuplicateTransition", "line " + std::to_string(line_no) +
                                                ": duplicate read transition");
            a.reads.push_back(r);
        } else if (toks[0] == "write") {
            // Output symbols are @ followed by any non-space characters;
            // compiled marker-set symbols contain ':' and ','.
            if (toks.size() != 5) err("expected: write <p> '<c>' @<omega> <q>");
            if (toks[3].size() < 2 || toks[3][0] != '@')
                err("bad output symbol " + toks[3]);
            AnnA::Write w{a.state(toks[1]), text::parse_quoted_char(toks[2], line_no),
                          a.add_output(toks[3].substr(1)), a.state(toks[4])};
            if (!write_set.insert(w).second)
                fail("DuplicateTransition", "line " + std::to_string(line_no) +
                                                ": duplicate write transition");
            a.writes.push_back(w);
        } else {
            err("unknown directive " + toks[0]);
        }
    }
    if (!saw_header) fail("SyntaxError", "expected header: anna v1");
    if (a.state_names.empty()) fail("SyntaxError", "automaton has no states");
    if (!saw_init) fail("SyntaxError", "missing init line");
    return a;
}

inline std::string serialize_anna(const AnnA& a) {
    std::string out = "anna v1\nstates";
    for (const auto& n : a.state_names) out += " " + n;
    out += "\ninit " + a.state_names[a.init] + "\nfinal";
    for (uint32_t q : a.finals) out += " " + a.state_names[q];
    out += "\n";
    for (const auto& r : a.reads)
        out += "read " + a.state_names[r.p] + " " + text::quote_char(r.a) + " " +
               a.state_names[r.q] + "\n";
    for (const auto& w : a.writes)
        out += "write " + a.state_names[w.p] + " " + text::quote_char(w.a) + " @" +
               a.out_names[w.omega] + " " + a.state_names[w.q] + "\n";
    return out;
}

// --- naive evaluation (reference oracle) ---------------------------------

// Position-by-position DP carrying the full annotation set per state.
// Independent of the compressed evaluation path; used to cross-check it.
inline std::set<Annotation> naive_eval(const AnnA& a, const U32String& doc,
                                       uint64_t budget = uint64_t{1} << 20) {
    size_t n = a.n_states();
    std::vector<std::set<Annotation>> cur(n), nxt(n);
    cur[a.init].insert(Annotation{});
    uint64_t work = 0;
    for (size_t i = 0; i < doc.size(); ++i) {
        Char c = doc[i];
        int64_t pos = static_cast<int64_t>(i) + 1;
        for (auto& s : nxt) s.clear();
        for (const AnnA::Read& r : a.reads) {
            if (r.a != c) continue;
            for (const Annotation& ann : cur[r.p]) {
                work += ann.size() + 1;
                nxt[r.q].insert(ann);
            }
        }
        for (const AnnA::Write& w : a.writes) {
            if (w.a != c) continue;
            for (const Annotation& ann : cur[w.p]) {
                work += ann.size() + 2;
                Annotation ext = ann;
                ext.push_back({a.out_names[w.omega], pos});
                nxt[w.q].insert(std::move(ext));
            }
        }
        if (work > budget) fail("BudgetExceeded", "naive evaluation budget exhausted");
        cur.swap(nxt);
    }
    std::set<Annotation> out;
    for (uint32_t f : a.finals) out.insert(cur[f].begin(), cur[f].end());
    return out;
}

// --- determinism / unambiguity -------------------------------------------

// Deterministic: per (state, letter) at most one read successor, per
// (state, letter, output) at most one write successor.
inline bool is_deterministic(const AnnA& a) {
    std::set<std::pair<uint32_t, Char>> rk;
    std::set<std::tuple<uint32_t, Char, uint32_t>> wk;
    for (const auto& r : a.reads)
        if (!rk.insert({r.p, r.a}).second) return false;
    for (const auto& w : a.writes)
        if (!wk.insert({w.p, w.a, w.omega}).second) return false;
    return true;
}

// Subset construction over the extended alphabet of read letters and
// (letter, output) pairs. Preserves the annotation relation and yields an
// unambiguous automaton. Subset states are named s0, s1, ... in BFS order.
inline AnnA determinize(const AnnA& a) {
    using StateSet = std::vector<uint32_t>;  // sorted
    AnnA d;
    d.out_names = a.out_names;
    d.out_index = a.out_index;
    std::map<StateSet, uint32_t> ids;
    std::vector<StateSet> sets;
    auto intern = [&](const StateSet& s) {
        auto it = ids.find(s);
        if (it != ids.end()) return it->second;
        uint32_t id = d.add_state("s" + std::to_string(sets.size()));
        ids.emplace(s, id);
        sets.push_back(s);
        return id;
    };
    StateSet start{a.init};
    d.init = intern(start);
    for (uint32_t cur = 0; cur < sets.size(); ++cur) {
        StateSet s = sets[cur];
        std::map<Char, StateSet> via_read;
        std::map<std::pair<Char, uint32_t>, StateSet> via_write;
        for (uint32_t p : s) {
            for (const auto& r : a.reads)
                if (r.p == p) via_read[r.a].push_back(r.q);
            for (const auto& w : a.writes)
                if (w.p == p) via_write[{w.a, w.omega}].push_back(w.q);
        }
        for (auto& [c, tgt] : via_read) {
            std::sort(tgt.begin(), tgt.end());
            tgt.erase(std::unique(tgt.begin(), tgt.end()), tgt.end());
            d.reads.push_back({cur, c, intern(tgt)});
        }
        for (auto& [key, tgt] : via_write) {
            std::sort(tgt.begin(), tgt.end());
            tgt.erase(std::unique(tgt.begin(), tgt.end()), tgt.end());
            d.writes.push_back({cur, key.first, key.second, intern(tgt)});
        }
    }
    for (uint32_t id = 0; id < sets.size(); ++id)
        for (uint32_t q : sets[id])
            if (a.is_final(q)) {
                d.finals.push_back(id);
                break;
            }
    return d;
}

// Bounded check that no (document, annotation) pair has two accepting runs.
// Tries every document over the automaton's alphabet up to max_len; returns
// a witness document if ambiguity is found.
inline std::optional<U32String> find_ambiguous_doc(const AnnA& a, size_t max_len,
                                                   uint64_t budget = uint64_t{1} << 22) {
    std::vector<Char> sigma = a.alphabet();
    uint64_t work = 0;
    U32String doc;
    // Iterative odometer over documents of each length.
    for (size_t len = 0; len <= max_len; ++len) {
        if (sigma.empty() && len > 0) break;
        std::vector<size_t> idx(len, 0);
        while (true) {
            doc.clear();
            for (size_t i = 0; i < len; ++i) doc.push_back(sigma[idx[i]]);
            // Count runs per (state, annotation).
            size_t n = a.n_states();
            std::vector<std::map<Annotation, uint32_t>> cur(n), nxt(n);
            cur[a.init][{}] = 1;
            for (size_t i = 0; i < doc.size(); ++i) {
                Char c = doc[i];
                int64_t pos = static_cast<int64_t>(i) + 1;
                for (auto& m : nxt) m.clear();
                for (const auto& r : a.reads) {
                    if (r.a != c) continue;
                    for (const auto& [ann, cnt] : cur[r.p]) {
                        auto& slot = nxt[r.q][ann];
                        slot = std::min<uint32_t>(2, slot + cnt);
                        work += ann.size() + 1;
                    }
                }
                for (const auto& w : a.writes) {
                    if (w.a != c) continue;
                    for (const auto& [ann, cnt] : cur[w.p]) {
                        Annotation ext = ann;
                        ext.push_back({a.out_names[w.omega], pos});
                        auto& slot = nxt[w.q][ext];
                        slot = std::min<uint32_t>(2, slot + cnt);
                        work += ann.size() + 2;
                    }
                }
                cur.swap(nxt);
                if (work > budget)
                    fail("BudgetExceeded", "ambiguity check budget exhausted");
            }
            // Aggregate across final states: runs into different finals can
            // still emit the same annotation.
            std::map<Annotation, uint32_t> at_final;
            for (uint32_t f : a.finals)
                for (const auto& [ann, cnt] : cur[f]) {
                    auto& slot = at_final[ann];
                    slot = std::min<uint32_t>(2, slot + cnt);
                    if (slot >= 2) return doc;
                }
            // Advance odometer.
            size_t k = 0;
            while (k < len && ++idx[k] == sigma.size()) idx[k++] = 0;
            if (k == len) break;
        }
    }
    return std::nullopt;
}

}  // namespace gcq
