// cli.hpp -- command-line surface: validate, expand, eval, compile-spanner,
// edit, bench, determinize. Exit codes: 0 ok, 1 usage, 2 input, 3 budget.
#pragma once

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gcq/automaton.hpp"
#include "gcq/ecs.hpp"
#include "gcq/edits.hpp"
#include "gcq/enumerate.hpp"
#include "gcq/errors.hpp"
#include "gcq/eval.hpp"
#include "gcq/slp.hpp"
#include "gcq/spanner.hpp"
#include "gcq/text.hpp"

namespace gcq {

struct UsageError {
    std::string msg;
};

namespace cli {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("IoError", "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string detect_header(const std::string& content) {
    for (const std::string& line : text::lines_of(content)) {
        auto toks = text::split_line(line, 1);
        if (toks.empty()) continue;
        return toks[0];
    }
    return "";
}

inline std::string format_ops(const OpCounts& o) {
    return "adds=" + std::to_string(o.adds) + " shifts=" + std::to_string(o.shifts) +
           " unions=" + std::to_string(o.unions) +
           " prods=" + std::to_string(o.prods) + " total=" + std::to_string(o.total());
}

inline std::string json_annotation(const Annotation& ann) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const AnnPair& p : ann) pairs.push_back({p.sym, p.pos});
    return nlohmann::json{{"pairs", pairs}}.dump();
}

inline std::string json_mapping(const Mapping& m) {
    nlohmann::json obj = nlohmann::json::object();
    for (const auto& [var, sp] : m) obj[var] = {sp.i, sp.j};
    return nlohmann::json{{"mapping", obj}}.dump();
}

struct EvalFlags {
    bool naive = false;
    bool stats = false;
    std::string format = "plain";
    uint64_t limit = uint64_t{1} << 22;
    std::string root;
};

inline uint32_t pick_root(const Slp& slp, const std::string& root_flag) {
    if (!root_flag.empty()) return slp.resolve(root_flag);
    if (!slp.start) throw UsageError{"grammar has no start symbol; pass --root"};
    return *slp.start;
}

inline int cmd_validate(const std::string& path) {
    std::string content = read_file(path);
    std::string kind = detect_header(content);
    if (kind == "slp") {
        // Report the grammar as written; CNF normalization happens on load
        // in the evaluation paths, not here.
        DocDatabase db = parse_database(content, false);
        std::cout << "slp ok: " << db.slp.nt_names.size() << " nonterminals, size "
                  << db.slp.size();
        if (db.slp.start)
            std::cout << ", start " << db.slp.nt_names[*db.slp.start] << ", doc_len "
                      << doc_len(db.slp, *db.slp.start);
        std::cout << "\n";
        for (const std::string& name : db.doc_order)
            std::cout << "doc " << name << " len " << doc_len(db.slp, db.docs.at(name))
                      << "\n";
        return 0;
    }
    if (kind == "anna") {
        AnnA a = parse_anna(content);
        std::cout << "anna ok: " << a.n_states() << " states, " << a.reads.size()
                  << " reads, " << a.writes.size() << " writes, "
                  << a.out_names.size() << " outputs, "
                  << (is_deterministic(a) ? "deterministic" : "nondeterministic")
                  << "\n";
        return 0;
    }
    if (kind == "eva") {
        ExtendedVa e = parse_eva(content);
        std::cout << "eva ok: " << e.state_names.size() << " states, "
                  << e.letters.size() << " letters, " << e.sets.size()
                  << " set transitions, " << e.vars.size() << " vars\n";
        return 0;
    }
    if (kind == "va") {
        Va v = parse_va(content);
        std::cout << "va ok: " << v.state_names.size() << " states, "
                  << v.letters.size() << " letters, " << v.vtrans.size()
                  << " var transitions, " << v.vars.size() << " vars\n";
        return 0;
    }
    fail("SyntaxError", "unrecognized header in " + path);
}

inline int cmd_expand(const std::string& path, const std::string& root_flag,
                      uint64_t limit) {
    DocDatabase db = parse_database(read_file(path));
    uint32_t root = pick_root(db.slp, root_flag);
    std::cout << text::to_utf8(expand(db.slp, root, limit)) << "\n";
    return 0;
}

inline int cmd_eval(const std::string& slp_path, const std::string& query_path,
                    const EvalFlags& fl) {
    Slp slp = parse_slp(read_file(slp_path));
    uint32_t root = pick_root(slp, fl.root);
    std::string qcontent = read_file(query_path);
    std::string qkind = detect_header(qcontent);
    uint64_t outputs = 0, max_delay = 0;

    auto print_ann = [&](const Annotation& ann) {
        std::cout << (fl.format == "json-lines" ? json_annotation(ann)
                                                : format_annotation(ann))
                  << "\n"
                  << std::flush;
    };
    auto print_map = [&](const Mapping& m) {
        std::cout << (fl.format == "json-lines" ? json_mapping(m) : format_mapping(m))
                  << "\n"
                  << std::flush;
    };

    if (qkind == "anna") {
        AnnA a = parse_anna(qcontent);
        if (fl.naive) {
            for (const Annotation& ann : naive_eval(a, expand(slp, root, fl.limit)))
                print_ann(ann), ++outputs;
            if (fl.stats) std::cerr << "outputs=" << outputs << "\n";
            return 0;
        }
        EvalResult r = evaluate(a, slp, root);
        EnumSession s = r.session();
        while (auto ann = s.next()) {
            max_delay = std::max(max_delay, s.last_delay_steps());
            print_ann(*ann);
            if (++outputs > fl.limit) fail("LimitExceeded", "enumeration limit reached");
        }
        if (fl.stats)
            std::cerr << "arena_nodes=" << r.qds->arena.size() << "\n"
                      << "preprocess " << format_ops(r.qds->arena.ops) << "\n"
                      << "outputs=" << outputs << "\n"
                      << "max_delay_steps=" << max_delay << "\n";
        return 0;
    }
    if (qkind == "eva") {
        ExtendedVa eva = parse_eva(qcontent);
        if (fl.naive) {
            std::set<Mapping> ms;
            for (const Mapping& m : eva_oracle_runs(eva, expand(slp, root, fl.limit)))
                ms.insert(m);
            for (const Mapping& m : ms) print_map(m), ++outputs;
            if (fl.stats) std::cerr << "outputs=" << outputs << "\n";
            return 0;
        }
        std::vector<std::string> warnings;
        AnnA a = compile_extended_va(eva, &warnings);
        for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
        auto [s2, root2] = with_end_marker(slp, root);
        EvalResult r = evaluate(a, s2, root2);
        EnumSession s = r.session();
        while (auto ann = s.next()) {
            max_delay = std::max(max_delay, s.last_delay_steps());
            print_map(mapping_of_annotation(*ann));
            if (++outputs > fl.limit) fail("LimitExceeded", "enumeration limit reached");
        }
        if (fl.stats)
            std::cerr << "arena_nodes=" << r.qds->arena.size() << "\n"
                      << "preprocess " << format_ops(r.qds->arena.ops) << "\n"
                      << "outputs=" << outputs << "\n"
                      << "max_delay_steps=" << max_delay << "\n";
        return 0;
    }
    if (qkind == "va") {
        Va va = parse_va(qcontent);
        if (fl.naive) {
            std::set<Mapping> ms;
            for (const Mapping& m : va_oracle_runs(va, expand(slp, root, fl.limit)))
                ms.insert(m);
            for (const Mapping& m : ms) print_map(m), ++outputs;
            if (fl.stats) std::cerr << "outputs=" << outputs << "\n";
            return 0;
        }
        SuccinctAnnA t = compile_va(va);
        auto [s2, root2] = with_end_marker(slp, root);
        EvalResult r = evaluate_succinct(t, s2, root2);
        EnumSession s = r.session();
        while (auto ann = s.next()) {
            max_delay = std::max(max_delay, s.last_delay_steps());
            print_map(mapping_of_annotation(*ann));
            if (++outputs > fl.limit) fail("LimitExceeded", "enumeration limit reached");
        }
        if (fl.stats)
            std::cerr << "arena_nodes=" << r.qds->arena.size() << "\n"
                      << "sers_nodes=" << t.sers->size() << "\n"
                      << "preprocess " << format_ops(r.qds->arena.ops) << "\n"
                      << "outputs=" << outputs << "\n"
                      << "max_delay_steps=" << max_delay << "\n";
        return 0;
    }
    throw UsageError{"query file must be anna, eva, or va format"};
}

inline int cmd_compile_spanner(const std::string& path) {
    std::string content = read_file(path);
    std::string kind = detect_header(content);
    if (kind == "eva") {
        std::vector<std::string> warnings;
        AnnA a = compile_extended_va(parse_eva(content), &warnings);
        for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
        std::cout << serialize_anna(a);
        return 0;
    }
    if (kind == "va") {
        SuccinctAnnA t = compile_va(parse_va(content));
        std::cout << "sanna v1\nstates";
        for (const auto& n : t.state_names) std::cout << " " << n;
        std::cout << "\ninit " << t.state_names[t.trans.init] << "\nfinal";
        for (uint32_t f : t.trans.finals) std::cout << " " << t.state_names[f];
        std::cout << "\n";
        for (const auto& r : t.trans.reads)
            std::cout << "read " << t.state_names[r.p] << " " << text::quote_char(r.a)
                      << " " << t.state_names[r.q] << "\n";
        for (const auto& w : t.trans.writes)
            std::cout << "write " << t.state_names[w.p] << " "
                      << text::quote_char(w.a) << " rep:" << w.rep << " "
                      << t.state_names[w.q] << "\n";
        std::cout << "sers " << t.sers->size() << " nodes\n" << t.sers->dump();
        return 0;
    }
    throw UsageError{"compile-spanner expects an eva or va file"};
}

inline int cmd_determinize(const std::string& path) {
    AnnA a = parse_anna(read_file(path));
    std::cout << serialize_anna(determinize(a));
    return 0;
}

struct QueryBundle {
    std::string path;
    std::string kind;  // anna | eva | va
    AnnA anna;         // compiled for eva; parsed for anna
    SuccinctAnnA succ; // for va
    std::unique_ptr<QueryDataStructure> qds;
    bool spanner() const { return kind != "anna"; }
};

inline int cmd_edit(const std::string& db_path, const std::string& script_path,
                    const std::vector<std::string>& query_paths,
                    const std::string& stream_doc, bool stats, uint64_t limit) {
    DocDatabase db = parse_database(read_file(db_path));

    std::vector<QueryBundle> queries;
    bool any_spanner = false;
    for (const std::string& qp : query_paths) {
        QueryBundle b;
        b.path = qp;
        std::string content = read_file(qp);
        b.kind = detect_header(content);
        if (b.kind == "anna") {
            b.anna = parse_anna(content);
        } else if (b.kind == "eva") {
            std::vector<std::string> warnings;
            b.anna = compile_extended_va(parse_eva(content), &warnings);
            for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
            any_spanner = true;
        } else if (b.kind == "va") {
            b.succ = compile_va(parse_va(content));
            any_spanner = true;
        } else {
            throw UsageError{"query file " + qp + " must be anna, eva, or va format"};
        }
        queries.push_back(std::move(b));
    }
    if (any_spanner) attach_end_marker(db);
    for (QueryBundle& b : queries) {
        b.qds = std::make_unique<QueryDataStructure>();
        if (b.kind == "va") {
            b.qds->trans = b.succ.trans;
            b.qds->sers = b.succ.sers;
        } else {
            b.qds->trans = TransView::from_anna(b.anna);
        }
        // Preprocess every current doc (companions for spanner queries).
        for (const std::string& name : db.doc_order) {
            uint32_t nt = b.spanner() ? db.companions.at(name) : db.docs.at(name);
            ensure_symbol(*b.qds, db.slp, nt);
        }
    }

    // Apply the script, extending every query structure per edit.
    auto script_lines = text::lines_of(read_file(script_path));
    size_t edit_no = 0;
    for (size_t li = 0; li < script_lines.size(); ++li) {
        auto toks = text::split_line(script_lines[li], li + 1);
        if (toks.empty()) continue;
        if (toks[0] == "extract" || toks[0] == "delete" || toks[0] == "insert" ||
            toks[0] == "copy")
            throw UsageError{"edit op '" + toks[0] +
                             "' is out of scope: only concat is implemented "
                             "(balanced-grammar maintenance not included)"};
        if (toks[0] != "concat" || toks.size() != 5 || toks[2] != "=")
            fail("SyntaxError", "script line " + std::to_string(li + 1) +
                                    ": expected: concat <new> = <a> <b>");
        ++edit_no;
        std::vector<uint32_t> fresh = apply_concat(db, toks[1], toks[3], toks[4]);
        std::cout << "edit " << edit_no << ": concat " << toks[1] << " = " << toks[3]
                  << " " << toks[4] << " (" << fresh.size() << " new nonterminals)\n";
        for (size_t qi = 0; qi < queries.size(); ++qi) {
            OpCounts before = queries[qi].qds->arena.ops;
            extend_query_structure(*queries[qi].qds, db.slp, fresh);
            OpCounts after = queries[qi].qds->arena.ops;
            OpCounts delta{after.adds - before.adds, after.shifts - before.shifts,
                           after.unions - before.unions, after.prods - before.prods};
            std::cout << "  query " << qi + 1 << " ops: " << format_ops(delta) << "\n";
        }
    }
    if (edit_no == 0) std::cout << "no edits applied\n";

    if (!stream_doc.empty()) {
        for (size_t qi = 0; qi < queries.size(); ++qi) {
            QueryBundle& b = queries[qi];
            std::cout << "query " << qi + 1 << " results for " << stream_doc << ":\n";
            EnumSession s = query_doc(*b.qds, db, stream_doc, b.spanner());
            uint64_t outputs = 0;
            while (auto ann = s.next()) {
                if (b.spanner())
                    std::cout << format_mapping(mapping_of_annotation(*ann)) << "\n";
                else
                    std::cout << format_annotation(*ann) << "\n";
                std::cout << std::flush;
                if (++outputs > limit)
                    fail("LimitExceeded", "enumeration limit reached");
            }
        }
    }
    if (stats)
        for (size_t qi = 0; qi < queries.size(); ++qi)
            std::cerr << "query " << qi + 1 << " arena_nodes="
                      << queries[qi].qds->arena.size() << " "
                      << format_ops(queries[qi].qds->arena.ops) << "\n";
    return 0;
}

// Benchmark families exercising the complexity claims: doubling grammars
// (linear in grammar size, independent of doc length) and growing automata
// (cubic in state count).
inline Slp doubling_grammar(uint32_t levels) {
    Slp s;
    uint32_t a0 = s.add_nonterminal("A0");
    s.rules[a0] = {Sym::term(U'a'), Sym::term(U'b')};
    uint32_t prev = a0;
    for (uint32_t i = 1; i <= levels; ++i) {
        uint32_t ai = s.add_nonterminal("A" + std::to_string(i));
        s.rules[ai] = {Sym::nonterm(prev), Sym::nonterm(prev)};
        prev = ai;
    }
    s.start = prev;
    validate_slp(s);
    return s;
}

// Complete read automaton on q states over {a,b}: every (p, c, p') edge.
// Dense matrices make every fold cost exactly |Q|^3 products.
inline AnnA complete_read_automaton(uint32_t q) {
    AnnA a;
    for (uint32_t i = 0; i < q; ++i) a.add_state("q" + std::to_string(i));
    a.init = 0;
    a.finals = {0};
    for (uint32_t p = 0; p < q; ++p)
        for (Char c : {U'a', U'b'})
            for (uint32_t t = 0; t < q; ++t) a.reads.push_back({p, c, t});
    return a;
}

inline void bench_row(const Slp& slp, const AnnA& a) {
    auto t0 = std::chrono::steady_clock::now();
    EvalResult r = evaluate(a, slp);
    auto t1 = std::chrono::steady_clock::now();
    uint64_t ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    uint64_t outputs = 0, max_delay = 0;
    EnumSession s = r.session();
    while (auto ann = s.next()) {
        max_delay = std::max(max_delay, s.last_delay_steps());
        ++outputs;
    }
    std::cout << slp.size() << "," << a.n_states() << ","
              << doc_len(slp, *slp.start) << "," << r.qds->arena.ops.total() << ","
              << ms << "," << outputs << "," << max_delay << "\n";
}

inline int cmd_bench(const std::string& family, uint32_t min_n, uint32_t max_n) {
    std::cout << "|S|,|Q|,doc_len,preprocess_ops,preprocess_ms,outputs,max_delay_steps\n";
    if (family == "none") return 0;
    if (family == "doubling") {
        AnnA a = complete_read_automaton(3);
        for (uint32_t n = min_n; n <= max_n; ++n) bench_row(doubling_grammar(n), a);
        return 0;
    }
    if (family == "states") {
        Slp slp = doubling_grammar(min_n);
        for (uint32_t q : {2u, 4u, 8u}) bench_row(slp, complete_read_automaton(q));
        return 0;
    }
    throw UsageError{"unknown bench family " + family};
}

}  // namespace cli

inline int run_cli(int argc, char** argv) {
    CLI::App app{"grammar-compressed query evaluation"};
    app.require_subcommand(1);

    std::string file, slp_path, query_path, root, db_path, script_path, stream_doc;
    std::vector<std::string> query_paths;
    cli::EvalFlags fl;
    bool naive = false, stats = false;
    uint64_t limit = uint64_t{1} << 22;
    std::string format = "plain", family = "doubling";
    uint32_t min_n = 10, max_n = 16;

    auto* c_validate = app.add_subcommand("validate", "parse a file and print a summary");
    c_validate->add_option("file", file)->required();

    auto* c_expand = app.add_subcommand("expand", "print the document of a grammar");
    c_expand->add_option("slp", slp_path)->required();
    c_expand->add_option("--root", root);
    c_expand->add_option("--limit", limit);

    auto* c_eval = app.add_subcommand("eval", "evaluate a query over a compressed doc");
    c_eval->add_option("slp", slp_path)->required();
    c_eval->add_option("query", query_path)->required();
    c_eval->add_option("--root", root);
    c_eval->add_flag("--naive", naive, "decompress and run the reference oracle");
    c_eval->add_flag("--stats", stats, "print op counts and delay to stderr");
    c_eval->add_option("--limit", limit);
    c_eval->add_option("--format", format)->check(CLI::IsMember({"plain", "json-lines"}));

    auto* c_compile = app.add_subcommand("compile-spanner", "compile an eva or va file");
    c_compile->add_option("file", file)->required();

    auto* c_det = app.add_subcommand("determinize", "determinize an annotated automaton");
    c_det->add_option("file", file)->required();

    auto* c_edit = app.add_subcommand("edit", "apply a concat script to a database");
    c_edit->add_option("db", db_path)->required();
    c_edit->add_option("script", script_path)->required();
    c_edit->add_option("queries", query_paths, "query automata to keep extended");
    c_edit->add_option("--query", stream_doc, "stream results for this doc afterwards");
    c_edit->add_flag("--stats", stats);
    c_edit->add_option("--limit", limit);

    auto* c_bench = app.add_subcommand("bench", "emit scaling measurements as CSV");
    c_bench->add_option("--family", family)
        ->check(CLI::IsMember({"doubling", "states", "none"}));
    c_bench->add_option("--min", min_n);
    c_bench->add_option("--max", max_n);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        fl.naive = naive;
        fl.stats = stats;
        fl.format = format;
        fl.limit = limit;
        fl.root = root;
        if (c_validate->parsed()) return cli::cmd_validate(file);
        if (c_expand->parsed()) return cli::cmd_expand(slp_path, root, limit);
        if (c_eval->parsed()) return cli::cmd_eval(slp_path, query_path, fl);
        if (c_compile->parsed()) return cli::cmd_compile_spanner(file);
        if (c_det->parsed()) return cli::cmd_determinize(file);
        if (c_edit->parsed())
            return cli::cmd_edit(db_path, script_path, query_paths, stream_doc, stats,
                                 limit);
        if (c_bench->parsed()) return cli::cmd_bench(family, min_n, max_n);
        return 1;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.msg << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return is_budget_kind(e.kind) ? 3 : 2;
    }
}

}  // namespace gcq
