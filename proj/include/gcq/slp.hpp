// slp.hpp -- straight-line programs: parsing, validation, expansion, CNF
#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gcq/errors.hpp"
#include "gcq/text.hpp"

namespace gcq {

// A grammar symbol occurring in a rule body: either a terminal character or
// a nonterminal referenced by index.
struct Sym {
    bool terminal;
    Char ch = 0;      // valid when terminal
    uint32_t nt = 0;  // valid when !terminal

    static Sym term(Char c) { return Sym{true, c, 0}; }
    static Sym nonterm(uint32_t i) { return Sym{false, 0, i}; }

    bool operator==(const Sym&) const = default;
};

constexpr uint64_t kMaxDocLen = (uint64_t{1} << 63) - 1;

// A straight-line program: every nonterminal has exactly one rule, the
// reference graph is acyclic, bodies are non-empty. The start symbol is
// optional (document databases are rootless).
struct Slp {
    std::vector<std::string> nt_names;
    std::unordered_map<std::string, uint32_t> nt_index;
    std::vector<std::vector<Sym>> rules;
    std::optional<uint32_t> start;

    // Filled by validate():
    std::vector<uint64_t> lens;     // expansion length per nonterminal
    std::vector<uint32_t> topo;     // children-first order

    uint32_t add_nonterminal(const std::string& name) {
        auto it = nt_index.find(name);
        if (it != nt_index.end()) return it->second;
        uint32_t idx = static_cast<uint32_t>(nt_names.size());
        nt_names.push_back(name);
        nt_index.emplace(name, idx);
        rules.emplace_back();
        return idx;
    }

    bool has_rule(uint32_t nt) const { return !rules[nt].empty(); }

    uint64_t size() const {
        uint64_t s = 0;
        for (const auto& r : rules) s += r.size();
        return s;
    }

    uint32_t resolve(const std::string& name) const {
        auto it = nt_index.find(name);
        if (it == nt_index.end()) fail("UnknownSymbol", "no nonterminal named " + name);
        return it->second;
    }

    std::string fresh_name(std::string base) const {
        while (nt_index.count(base)) base = "_" + base;
        return base;
    }
};

// Topologically sorts and computes expansion lengths. Rejects missing rules,
// cycles, and documents at or above 2^63 characters.
inline void validate_slp(Slp& s) {
    size_t n = s.nt_names.size();
    for (size_t i = 0; i < n; ++i) {
        if (s.rules[i].empty())
            fail("MissingRule", "nonterminal " + s.nt_names[i] + " has no rule");
    }
    s.topo.clear();
    s.lens.assign(n, 0);
    // Iterative DFS with cycle detection (0 = white, 1 = on stack, 2 = done).
    std::vector<uint8_t> color(n, 0);
    std::vector<std::pair<uint32_t, size_t>> stack;
    for (uint32_t root = 0; root < n; ++root) {
        if (color[root] == 2) continue;
        stack.push_back({root, 0});
        color[root] = 1;
        while (!stack.empty()) {
            auto& [nt, pos] = stack.back();
            if (pos == s.rules[nt].size()) {
                uint64_t len = 0;
                for (const Sym& sym : s.rules[nt]) {
                    uint64_t part = sym.terminal ? 1 : s.lens[sym.nt];
                    if (len > kMaxDocLen - part)
                        fail("DocTooLarge", "expansion of " + s.nt_names[nt] +
                                                " reaches 2^63 characters");
                    len += part;
                }
                s.lens[nt] = len;
                color[nt] = 2;
                s.topo.push_back(nt);
                stack.pop_back();
                continue;
            }
            const Sym& sym = s.rules[nt][pos++];
            if (sym.terminal) continue;
            if (color[sym.nt] == 1)
                fail("CyclicGrammar", "cycle through " + s.nt_names[sym.nt]);
            if (color[sym.nt] == 0) {
                color[sym.nt] = 1;
                stack.push_back({sym.nt, 0});
            }
        }
    }
}

inline uint64_t doc_len(const Slp& s, uint32_t nt) { return s.lens.at(nt); }

// Expands a nonterminal to its document. The limit guards against blowing
// memory on deep grammars; crossing it is a budget failure.
inline U32String expand(const Slp& s, uint32_t nt, uint64_t limit = uint64_t{1} << 24) {
    if (s.lens.at(nt) > limit)
        fail("LimitExceeded", "expansion of " + s.nt_names[nt] + " has " +
                                  std::to_string(s.lens[nt]) +
                                  " characters, limit is " + std::to_string(limit));
    U32String out;
    out.reserve(static_cast<size_t>(s.lens[nt]));
    std::vector<std::pair<uint32_t, size_t>> stack{{nt, 0}};
    while (!stack.empty()) {
        auto& [cur, pos] = stack.back();
        if (pos == s.rules[cur].size()) {
            stack.pop_back();
            continue;
        }
        const Sym& sym = s.rules[cur][pos++];
        if (sym.terminal)
            out.push_back(sym.ch);
        else
            stack.push_back({sym.nt, 0});
    }
    return out;
}

// --- file format ---------------------------------------------------------
//
//   slp v1
//   start S0           (optional)
//   rule S0 = A 'r' B
//   rule A = 'b' 'a'
//
// '#' starts a comment; characters are quoted with the usual escapes.

inline Slp parse_slp_body(const std::vector<std::string>& lines, size_t first_line,
                          bool allow_doc_lines,
                          std::vector<std::pair<std::string, std::string>>* doc_lines) {
    Slp s;
    std::optional<std::string> start_name;
    std::vector<std::pair<std::string, std::vector<std::string>>> pending;  // name, body tokens
    std::vector<size_t> pending_line;
    std::unordered_set<std::string> seen;
    for (size_t li = first_line; li < lines.size(); ++li) {
        size_t line_no = li + 1;
        auto toks = text::split_line(lines[li], line_no);
        if (toks.empty()) continue;
        auto err = [&](const std::string& m) {
            fail("SyntaxError", "line " + std::to_string(line_no) + ": " + m);
        };
        if (toks[0] == "start") {
            if (toks.size() != 2) err("start expects one name");
            if (start_name) err("duplicate start line");
            start_name = toks[1];
        } else if (toks[0] == "rule") {
            if (toks.size() < 4 || toks[2] != "=") err("expected: rule <Id> = <sym>...");
            const std::string& name = toks[1];
            if (!text::is_identifier(name)) err("bad nonterminal name " + name);
            if (!seen.insert(name).second)
                fail("DuplicateRule", "line " + std::to_string(line_no) +
                                          ": second rule for " + name);
            pending.push_back({name, {toks.begin() + 3, toks.end()}});
            pending_line.push_back(line_no);
        } else if (allow_doc_lines && toks[0] == "doc") {
            if (toks.size() != 3) err("expected: doc <name> <Id>");
            doc_lines->push_back({toks[1], toks[2]});
        } else {
            err("unknown directive " + toks[0]);
        }
    }
    for (auto& p : pending) s.add_nonterminal(p.first);
    for (size_t pi = 0; pi < pending.size(); ++pi) {
        auto& [name, body] = pending[pi];
        size_t line_no = pending_line[pi];
        std::vector<Sym>& rule = s.rules[s.nt_index[name]];
        for (const std::string& tok : body) {
            if (tok.front() == '\'') {
                rule.push_back(Sym::term(text::parse_quoted_char(tok, line_no)));
            } else {
                auto it = s.nt_index.find(tok);
                if (it == s.nt_index.end())
                    fail("MissingRule", "line " + std::to_string(line_no) +
                                            ": no rule for " + tok);
                rule.push_back(Sym::nonterm(it->second));
            }
        }
        if (rule.empty())
            fail("EmptyRuleBody", "line " + std::to_string(line_no) +
                                      ": rule " + name + " has empty body");
    }
    if (start_name) {
        auto it = s.nt_index.find(*start_name);
        if (it == s.nt_index.end())
            fail("MissingRule", "start symbol " + *start_name + " has no rule");
        s.start = it->second;
    }
    validate_slp(s);
    return s;
}

inline Slp parse_slp(const std::string& input) {
    auto lines = text::lines_of(input);
    size_t li = 0;
    while (li < lines.size() && text::split_line(lines[li], li + 1).empty()) ++li;
    auto header = li < lines.size() ? text::split_line(lines[li], li + 1)
                                    : std::vector<std::string>{};
    if (header.size() != 2 || header[0] != "slp" || header[1] != "v1")
        fail("SyntaxError", "expected header: slp v1");
    return parse_slp_body(lines, li + 1, false, nullptr);
}

inline std::string serialize_slp(const Slp& s) {
    std::string out = "slp v1\n";
    if (s.start) out += "start " + s.nt_names[*s.start] + "\n";
    for (size_t i = 0; i < s.nt_names.size(); ++i) {
        out += "rule " + s.nt_names[i] + " =";
        for (const Sym& sym : s.rules[i])
            out += " " + (sym.terminal ? text::quote_char(sym.ch) : s.nt_names[sym.nt]);
        out += "\n";
    }
    return out;
}

// --- Chomsky normal form -------------------------------------------------

inline bool is_cnf(const Slp& s) {
    for (const auto& rule : s.rules) {
        if (rule.size() == 1 && rule[0].terminal) continue;
        if (rule.size() == 2 && !rule[0].terminal && !rule[1].terminal) continue;
        return false;
    }
    return true;
}

// Rewrites to CNF preserving every original nonterminal's name and document.
// Terminals in long bodies get wrapper rules, long bodies become left-leaning
// binary chains, unit rules A -> B are replaced by a copy of B's binary rule.
inline Slp binarize(const Slp& s) {
    if (is_cnf(s)) {
        Slp copy = s;
        validate_slp(copy);
        return copy;
    }
    Slp out;
    for (const auto& name : s.nt_names) out.add_nonterminal(name);
    std::map<Char, uint32_t> wrapper;
    auto wrap_terminal = [&](Char c) {
        auto it = wrapper.find(c);
        if (it != wrapper.end()) return it->second;
        char buf[24];
        std::snprintf(buf, sizeof buf, "L%X", static_cast<uint32_t>(c));
        uint32_t nt = out.add_nonterminal(out.fresh_name(buf));
        out.rules[nt] = {Sym::term(c)};
        wrapper.emplace(c, nt);
        return nt;
    };
    // Children-first so unit rules can copy the target's finished rule.
    for (uint32_t nt : s.topo) {
        const std::vector<Sym>& body = s.rules[nt];
        if (body.size() == 1 && body[0].terminal) {
            out.rules[nt] = body;
            continue;
        }
        if (body.size() == 1) {
            out.rules[nt] = out.rules[body[0].nt];
            continue;
        }
        std::vector<uint32_t> parts;
        for (const Sym& sym : body)
            parts.push_back(sym.terminal ? wrap_terminal(sym.ch) : sym.nt);
        // A = P0 P1 ... P(m-1)  becomes  A = P0 Z1, Z1 = P1 Z2, ...,
        // Z(m-2) = P(m-2) P(m-1), with fresh chain names A__k.
        uint32_t acc = parts.back();
        for (size_t i = parts.size() - 2; i >= 1; --i) {
            std::string cname =
                out.fresh_name(s.nt_names[nt] + "__" + std::to_string(i));
            uint32_t chain = out.add_nonterminal(cname);
            out.rules[chain] = {Sym::nonterm(parts[i]), Sym::nonterm(acc)};
            acc = chain;
        }
        out.rules[nt] = {Sym::nonterm(parts[0]), Sym::nonterm(acc)};
    }
    out.start = s.start;
    validate_slp(out);
    return out;
}

// Terminal alphabet actually used by the grammar, sorted.
inline std::vector<Char> slp_alphabet(const Slp& s) {
    std::vector<Char> v;
    for (const auto& rule : s.rules)
        for (const Sym& sym : rule)
            if (sym.terminal) v.push_back(sym.ch);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace gcq
