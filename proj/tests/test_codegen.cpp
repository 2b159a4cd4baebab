#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "json.hpp"
#include "lps/codegen.hpp"
#include "lps/interp.hpp"
#include "util.hpp"

using namespace lps;
using namespace lps::testutil;

namespace {

struct Pipeline {
  SourceUnit unit;
  ExecTable xt = default_exec_table();
  EngineConfig cfg;
  AnalysisResult result;
  ResidualProgram residual;

  explicit Pipeline(const std::string& name, EngineKind engine,
                    DomainKind dom = DomainKind::Shfr,
                    UnfoldStrategy unf = UnfoldStrategy::HomEmb,
                    GeneralizeStrategy gen = GeneralizeStrategy::Id)
      : unit(parse_program_file(corpus(name))) {
    cfg.domain = dom;
    cfg.unfold.strategy = unf;
    cfg.unfold.allow_nonleftmost = engine == EngineKind::Apd;
    cfg.generalize = gen;
    result = engine == EngineKind::Analyze
                 ? analyze(unit.program, unit.entries, xt, cfg)
                 : apd(unit.program, unit.entries, xt, cfg);
    residual = generate(result, unit.entries);
  }
};

// structural equality of clause lists modulo variable names and a
// predicate-name bijection
bool equal_modulo_renaming(const Program& p1, const Program& p2) {
  if (p1.size() != p2.size()) return false;
  std::map<std::string, std::string> pmap;
  for (size_t k = 1; k <= p1.size(); ++k) {
    const Clause& c1 = p1.clause(static_cast<int>(k));
    const Clause& c2 = p2.clause(static_cast<int>(k));
    auto preds_align = [&](const Atom& a1, const Atom& a2) {
      if (a1.arity() != a2.arity()) return false;
      auto it = pmap.find(a1.pred);
      if (it == pmap.end()) {
        pmap[a1.pred] = a2.pred;
        return true;
      }
      return it->second == a2.pred;
    };
    if (!preds_align(c1.head, c2.head)) return false;
    if (c1.body.size() != c2.body.size()) return false;
    for (size_t i = 0; i < c1.body.size(); ++i)
      if (!preds_align(c1.body[i], c2.body[i])) return false;
    // variable structure via wrapper variant check
    std::vector<Term> t1, t2;
    auto wrap = [](const Atom& a) {
      return Term::compound("$a", a.args.empty() ? std::vector<Term>{c("e")}
                                                 : a.args);
    };
    t1.push_back(wrap(c1.head));
    t2.push_back(wrap(c2.head));
    for (size_t i = 0; i < c1.body.size(); ++i) {
      t1.push_back(wrap(c1.body[i]));
      t2.push_back(wrap(c2.body[i]));
    }
    if (!variant(at("$c", t1), at("$c", t2))) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("full pipeline on the running example emits the six golden clauses") {
  Pipeline p("running.pl", EngineKind::Analyze);
  const char* golden =
      "sp_main(s(s(s(0))),0).\n"
      "sp_main(s(s(s(s(B)))),A) :- sp_tw(B,C), sp_formula(C,A).\n"
      "sp_tw(0,0).\n"
      "sp_tw(s(A),s(s(B))) :- sp_tw(A,B).\n"
      "sp_formula(0,s(s(s(s(0))))).\n"
      "sp_formula(s(A),s(s(s(s(s(s(B))))))) :- sp_tw(A,B).\n";
  SourceUnit g = parse_program(golden);
  CHECK(equal_modulo_renaming(p.residual.program, g.program));
  CHECK(p.residual.warnings.empty());

  // entry mapping points at the renamed main
  REQUIRE(p.residual.entry_map.size() == 1);
  CHECK(p.residual.entry_map[0].second.pred == "sp_main");
  CHECK(p.residual.entry_map[0].second.args[0] ==
        p.residual.entry_map[0].first.args[0]);

  // the rendered text re-parses to the same program
  SourceUnit reparsed = parse_program(render_residual(p.residual));
  CHECK(equal_modulo_renaming(reparsed.program, g.program));
  REQUIRE(reparsed.entries.size() == 1);
  CHECK(reparsed.entries[0].atom.pred == "sp_main");
}

TEST_CASE("polyvariant-ai preset reproduces the original program") {
  for (const char* name : {"running.pl", "peano_static.pl", "append.pl",
                           "rev_acc.pl", "even_odd.pl", "dbl.pl"}) {
    Pipeline p(name, EngineKind::Analyze, DomainKind::Shfr,
               UnfoldStrategy::OneStep, GeneralizeStrategy::BaseForm);
    INFO(name);
    CHECK(equal_modulo_renaming(p.residual.program, p.unit.program));
  }
}

TEST_CASE("residual of an unreachable entry is flagged") {
  SourceUnit u = parse_program(":- entry p(X) : (ground(X)).\nq(0).\n");
  ExecTable xt = default_exec_table();
  EngineConfig cfg;
  AnalysisResult r = analyze(u.program, u.entries, xt, cfg);
  ResidualProgram rp = generate(r, u.entries);
  // p has no clauses: the residual defines a specialized p with no
  // clauses at all
  CHECK(rp.program.size() == 0);
  CHECK(!rp.warnings.empty());
}

TEST_CASE("reachability: subsumed specializations are dropped") {
  // under apd on running.pl several helper predicates get specialized
  // from the formula expansion; everything emitted must be reachable
  Pipeline p("running.pl", EngineKind::Apd);
  std::set<std::string> defined;
  for (const Clause& cl : p.residual.program.clauses())
    defined.insert(cl.head.pred);
  std::set<std::string> reached{p.residual.entry_map[0].second.pred};
  bool grew = true;
  while (grew) {
    grew = false;
    for (const Clause& cl : p.residual.program.clauses()) {
      if (!reached.count(cl.head.pred)) continue;
      for (const Atom& b : cl.body)
        if (defined.count(b.pred) && reached.insert(b.pred).second)
          grew = true;
    }
  }
  CHECK(reached == defined);
}

TEST_CASE("dot export shows three expanded nodes and two sharing arcs") {
  Pipeline p("running.pl", EngineKind::Analyze);
  std::string dot = export_dot(p.result);
  CHECK(dot.find("digraph") == 0);
  int or_nodes = 0;
  size_t pos = 0;
  while ((pos = dot.find("shape=ellipse", pos)) != std::string::npos) {
    ++or_nodes;
    pos += 1;
  }
  CHECK(or_nodes == 3);
  int shared = 0;
  pos = 0;
  while ((pos = dot.find("style=dashed,constraint=false", pos)) !=
         std::string::npos) {
    ++shared;
    pos += 1;
  }
  CHECK(shared == 2);
  // node labels carry both descriptions
  CHECK(dot.find("^{") != std::string::npos);

  // empty run, empty digraph
  SourceUnit u = parse_program("p(0).\n");
  EngineConfig cfg;
  AnalysisResult empty = analyze(u.program, {}, default_exec_table(), cfg);
  std::string dot2 = export_dot(empty);
  CHECK(dot2.find("shape=ellipse") == std::string::npos);
}

TEST_CASE("json dump: schema, counts and reparse") {
  Pipeline p("running.pl", EngineKind::Analyze);
  std::string text = dump_tables(p.result);
  nlohmann::json j = nlohmann::json::parse(text);
  REQUIRE(j.contains("answers"));
  REQUIRE(j.contains("deps"));
  REQUIRE(j.contains("gen"));
  REQUIRE(j.contains("spec"));
  CHECK(j["answers"].size() == 3);
  CHECK(j["gen"].size() == 3);
  CHECK(j["spec"].size() == 3);
  // all three answers are fully ground success patterns
  for (const auto& a : j["answers"]) {
    REQUIRE(a.contains("ap"));
    CHECK(a["ap"]["sharing"].empty());
  }
  // the dump is stable across two runs of the same pipeline
  Pipeline p2("running.pl", EngineKind::Analyze);
  CHECK(dump_tables(p2.result) == text);

  // empty run: four empty arrays
  SourceUnit u = parse_program("p(0).\n");
  EngineConfig cfg;
  AnalysisResult empty = analyze(u.program, {}, default_exec_table(), cfg);
  nlohmann::json je = nlohmann::json::parse(dump_tables(empty));
  CHECK(je["answers"].empty());
  CHECK(je["deps"].empty());
  CHECK(je["gen"].empty());
  CHECK(je["spec"].empty());
}

TEST_CASE("semantic preservation of the residual on sampled queries") {
  Pipeline p("running.pl", EngineKind::Analyze);
  for (int n = 0; n < 8; ++n) {
    VarId R = 700000;
    Atom q = at("main", {s_n(3, s_n(n, c("0"))), v(R)});
    Atom rq = ren(q, p.residual.entry_map[0].first,
                  p.residual.entry_map[0].second);
    InterpResult orig = solve(p.unit.program, q, 400);
    InterpResult res = solve(p.residual.program, rq, 400);
    REQUIRE(!orig.depth_bound_hit);
    REQUIRE(!res.depth_bound_hit);
    REQUIRE(orig.answers.size() == res.answers.size());
    // strip the predicate names before comparing rendered answers
    auto strip = [](std::vector<std::string> v) {
      for (auto& s : v) s = s.substr(s.find('('));
      return v;
    };
    CHECK(strip(orig.answers) == strip(res.answers));
  }
}
