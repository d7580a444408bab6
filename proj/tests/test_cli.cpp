#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include <sys/wait.h>

namespace {

struct RunResult {
    std::string out;
    int code;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(GCQ_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    std::string out;
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    int st = pclose(p);
    return {out, WIFEXITED(st) ? WEXITSTATUS(st) : -1};
}

std::string data(const std::string& f) {
    return std::string(GCQ_DATA_DIR) + "/" + f;
}

std::set<std::string> lines_of(const std::string& s) {
    std::set<std::string> out;
    size_t pos = 0;
    while (pos < s.size()) {
        size_t nl = s.find('\n', pos);
        if (nl == std::string::npos) nl = s.size();
        if (nl > pos) out.insert(s.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return out;
}

std::string write_temp(const std::string& name, const std::string& content) {
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream f(path);
    f << content;
    f.close();
    return path.string();
}

}  // namespace

TEST_CASE("validate summarizes each file kind") {
    auto slp = run_cli("validate " + data("example.slp"));
    CHECK(slp.code == 0);
    CHECK(slp.out ==
          "slp ok: 3 nonterminals, size 11, start S0, doc_len 15\n");
    auto anna = run_cli("validate " + data("example.anna"));
    CHECK(anna.code == 0);
    CHECK(anna.out ==
          "anna ok: 4 states, 10 reads, 3 writes, 1 outputs, deterministic\n");
    auto eva = run_cli("validate " + data("pairs.eva"));
    CHECK(eva.code == 0);
    CHECK(eva.out == "eva ok: 6 states, 3 letters, 2 set transitions, 2 vars\n");
    auto va = run_cli("validate " + data("single.va"));
    CHECK(va.code == 0);
    CHECK(va.out == "va ok: 4 states, 3 letters, 2 var transitions, 1 vars\n");
    auto db = run_cli("validate " + data("docs.db"));
    CHECK(db.code == 0);
    CHECK(db.out.find("doc u len 2\n") != std::string::npos);
    CHECK(db.out.find("doc w len 2\n") != std::string::npos);
}

TEST_CASE("validate of the binarized example slp") {
    // The example grammar is not CNF; validate still reports it fine.
    auto missing = run_cli("validate /nonexistent/file.slp");
    CHECK(missing.code == 2);
}

TEST_CASE("expand prints the document") {
    auto r = run_cli("expand " + data("example.slp"));
    CHECK(r.code == 0);
    CHECK(r.out == "barbarababaraba\n");
}

TEST_CASE("eval streams the three triples deterministically") {
    std::string cmd = "eval " + data("example.slp") + " " + data("example.anna");
    auto r1 = run_cli(cmd);
    CHECK(r1.code == 0);
    CHECK(lines_of(r1.out) == std::set<std::string>{"mark@1 mark@4 mark@8",
                                                    "mark@4 mark@8 mark@10",
                                                    "mark@8 mark@10 mark@14"});
    auto r2 = run_cli(cmd);
    CHECK(r2.out == r1.out);  // byte-identical on identical inputs
    auto naive = run_cli(cmd + " --naive");
    CHECK(naive.code == 0);
    CHECK(lines_of(naive.out) == lines_of(r1.out));
}

TEST_CASE("eval json-lines mode") {
    auto r = run_cli("eval " + data("example.slp") + " " + data("example.anna") +
                     " --format=json-lines");
    CHECK(r.code == 0);
    CHECK(lines_of(r.out) ==
          std::set<std::string>{
              R"({"pairs":[["mark",1],["mark",4],["mark",8]]})",
              R"({"pairs":[["mark",4],["mark",8],["mark",10]]})",
              R"({"pairs":[["mark",8],["mark",10],["mark",14]]})"});
}

TEST_CASE("eval dispatches spanner queries by header") {
    auto eva = run_cli("eval " + data("aab.slp") + " " + data("pairs.eva"));
    CHECK(eva.code == 0);
    CHECK(eva.out == "x=[2,2) y=[2,4)\n");
    auto naive = run_cli("eval " + data("aab.slp") + " " + data("pairs.eva") +
                         " --naive");
    CHECK(naive.out == eva.out);
    auto va = run_cli("eval " + data("aaa.slp") + " " + data("single.va"));
    CHECK(va.code == 0);
    CHECK(lines_of(va.out) ==
          std::set<std::string>{"x=[1,2)", "x=[2,3)", "x=[3,4)"});
    auto va_naive =
        run_cli("eval " + data("aaa.slp") + " " + data("single.va") + " --naive");
    CHECK(lines_of(va_naive.out) == lines_of(va.out));
}

TEST_CASE("compile-spanner emits a loadable automaton") {
    auto r = run_cli("compile-spanner " + data("pairs.eva"));
    CHECK(r.code == 0);
    CHECK(r.out.rfind("anna v1\n", 0) == 0);
    // The compiled automaton evaluates like the eva itself.
    std::string compiled = write_temp("gcq_compiled.anna", r.out);
    // Evaluating needs the end-marked document; build it by hand.
    std::string slp = write_temp("gcq_aabh.slp",
                                 "slp v1\nstart D\nrule D = 'a' 'a' 'b' '#'\n");
    auto ev = run_cli("eval " + slp + " " + compiled);
    CHECK(ev.code == 0);
    CHECK(ev.out == "close:x,open:x,open:y@2 close:y@4\n");
    auto va = run_cli("compile-spanner " + data("single.va"));
    CHECK(va.code == 0);
    CHECK(va.out.rfind("sanna v1\n", 0) == 0);
    CHECK(va.out.find("sers ") != std::string::npos);
}

TEST_CASE("determinize emits an equivalent deterministic automaton") {
    std::string nd = write_temp("gcq_nd.anna",
                                "anna v1\n"
                                "states p q r\n"
                                "init p\n"
                                "final q r\n"
                                "read p 'a' q\n"
                                "read p 'a' r\n"
                                "read q 'b' q\n");
    auto r = run_cli("determinize " + nd);
    CHECK(r.code == 0);
    std::string det = write_temp("gcq_det.anna", r.out);
    auto v = run_cli("validate " + det);
    CHECK(v.code == 0);
    CHECK(v.out.find("deterministic") != std::string::npos);
    CHECK(v.out.find("nondeterministic") == std::string::npos);
}

TEST_CASE("edit applies a script and reports per-edit ops") {
    auto r = run_cli("edit " + data("docs.db") + " " + data("edits.script") + " " +
                     data("subsets.anna"));
    CHECK(r.code == 0);
    CHECK(r.out.find("edit 1: concat uw = u w (1 new nonterminals)\n") !=
          std::string::npos);
    CHECK(r.out.find("edit 2: concat uwuw = uw uw (1 new nonterminals)\n") !=
          std::string::npos);
    CHECK(r.out.find("query 1 ops:") != std::string::npos);
}

TEST_CASE("edit streams results for a named doc") {
    auto r = run_cli("edit " + data("docs.db") + " " + data("edits.script") + " " +
                     data("subsets.anna") + " --query uwuw");
    CHECK(r.code == 0);
    // doc uwuw = "abbaabba"; subsets of its four a-positions: 16 results.
    auto ls = lines_of(r.out);
    CHECK(ls.count("query 1 results for uwuw:") == 1);
    CHECK(ls.count("()") == 1);
    CHECK(ls.count("hit@1 hit@4 hit@5 hit@8") == 1);
    int results = 0;
    for (const auto& l : ls)
        if (l == "()" || l.rfind("hit@", 0) == 0) ++results;
    CHECK(results == 16);
}

TEST_CASE("edit rejects out-of-scope operations with exit 1") {
    std::string script = write_temp("gcq_bad.script", "extract z = u 1 2\n");
    auto r = run_cli("edit " + data("docs.db") + " " + script);
    CHECK(r.code == 1);
}

TEST_CASE("empty scripts are a no-op") {
    std::string script = write_temp("gcq_empty.script", "# nothing\n");
    auto r = run_cli("edit " + data("docs.db") + " " + script + " " +
                     data("subsets.anna"));
    CHECK(r.code == 0);
    CHECK(r.out == "no edits applied\n");
}

TEST_CASE("exit codes distinguish usage, input, and budget errors") {
    CHECK(run_cli("").code == 1);             // missing subcommand
    CHECK(run_cli("frobnicate x").code == 1); // unknown subcommand
    std::string bad = write_temp("gcq_bad.slp", "slp v1\nrule A = B\n");
    CHECK(run_cli("validate " + bad).code == 2);
    // Enumeration limit exhausted: budget exit code.
    std::string many = write_temp(
        "gcq_many.slp",
        "slp v1\nstart D\nrule D = E E E E\nrule E = 'a' 'a' 'a' 'a'\n");
    auto r = run_cli("eval " + many + " " + data("subsets.anna") + " --limit 10");
    CHECK(r.code == 3);
}

TEST_CASE("bench emits CSV") {
    auto none = run_cli("bench --family none");
    CHECK(none.code == 0);
    CHECK(none.out ==
          "|S|,|Q|,doc_len,preprocess_ops,preprocess_ms,outputs,max_delay_steps\n");
    auto rows = run_cli("bench --family doubling --min 3 --max 5");
    CHECK(rows.code == 0);
    CHECK(lines_of(rows.out).size() == 4);  // header + 3 rows
    auto states = run_cli("bench --family states --min 4 --max 4");
    CHECK(states.code == 0);
    CHECK(lines_of(states.out).size() == 4);  // header + |Q| in {2,4,8}
}

TEST_CASE("eval stats go to stderr, not stdout") {
    auto r = run_cli("eval " + data("example.slp") + " " + data("example.anna") +
                     " --stats");
    CHECK(r.code == 0);
    CHECK(r.out.find("preprocess") == std::string::npos);
    CHECK(lines_of(r.out).size() == 3);
}
