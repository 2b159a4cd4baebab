#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "lps/codegen.hpp"
#include "lps/engine.hpp"
#include "util.hpp"

using namespace lps;
using namespace lps::testutil;

namespace {

struct Fixture {
  SourceUnit unit;
  ExecTable xt = default_exec_table();
  EngineConfig cfg;

  explicit Fixture(const std::string& name = "running.pl",
                   DomainKind dom = DomainKind::Shfr)
      : unit(parse_program_file(corpus(name))) {
    cfg.domain = dom;
  }

  AnalysisResult analyze_run() {
    return analyze(unit.program, unit.entries, xt, cfg);
  }
  AnalysisResult apd_run() { return apd(unit.program, unit.entries, xt, cfg); }
};

const OrNode* node_by_pred(const AnalysisResult& r, const std::string& pred) {
  for (const auto& key : r.node_order) {
    const OrNode& n = r.nodes.at(key);
    if (n.pattern.atom.pred == pred) return &n;
  }
  return nullptr;
}

// {X/G,...} convenience checks on a description over the atom's vars
bool all_ground(const AbsSubst& l) {
  for (VarId x : l.scope())
    if (!l.is_ground(x)) return false;
  return true;
}

}  // namespace

TEST_CASE("running example: the three answer-table entries of the graph") {
  Fixture fx;
  AnalysisResult r = fx.analyze_run();

  REQUIRE(r.node_order.size() == 3);

  const OrNode* main_n = node_by_pred(r, "main");
  REQUIRE(main_n);
  {
    auto sc = vars_of(main_n->pattern.atom);
    REQUIRE(sc.size() == 2);
    VarId X = sc[0], X2 = sc[1];
    CHECK(main_n->pattern.atom.args[0] == s_n(3, v(X)));
    CHECK(main_n->pattern.cp.is_ground(X));
    CHECK(main_n->pattern.cp.is_free(X2));
    CHECK(all_ground(main_n->answer));  // {X/G, X2/G}
  }

  const OrNode* tw_n = node_by_pred(r, "tw");
  REQUIRE(tw_n);
  {
    auto sc = vars_of(tw_n->pattern.atom);
    REQUIRE(sc.size() == 2);
    CHECK(tw_n->pattern.cp.is_ground(sc[0]));
    CHECK(tw_n->pattern.cp.is_free(sc[1]));
    CHECK(all_ground(tw_n->answer));  // {B/G, C/G}
  }

  const OrNode* f_n = node_by_pred(r, "formula");
  REQUIRE(f_n);
  {
    auto sc = vars_of(f_n->pattern.atom);
    REQUIRE(sc.size() == 2);
    VarId C = sc[0], A = sc[1];
    // the call atom keeps the s^4 structure around the ground variable
    CHECK(f_n->pattern.atom.args[0] == s_n(4, v(C)));
    CHECK(f_n->pattern.atom.args[1] == v(A));
    CHECK(f_n->pattern.cp.is_ground(C));
    CHECK(f_n->pattern.cp.is_free(A));
    CHECK(all_ground(f_n->answer));  // {C/G, A/G}
  }
}

TEST_CASE("running example: the dependency arc into the formula node") {
  Fixture fx;
  AnalysisResult r = fx.analyze_run();
  const OrNode* f_n = node_by_pred(r, "formula");
  const OrNode* main_n = node_by_pred(r, "main");
  REQUIRE(f_n);
  REQUIRE(main_n);

  REQUIRE(f_n->deps.size() == 1);
  const DependencyEntry& d = f_n->deps[0];
  CHECK(!d.entry);
  CHECK(d.i == 2);
  // the dependent node is the main OR-node
  CHECK(r.nodes.at(d.node).pattern.atom.pred == "main");
  // the stored clause-scope description is {B/G, A/V, C/G}: the head of
  // clause d.k is sp_main(s^4(B), A) and the tw literal supplies C
  const Clause& ck = r.program.clause(d.k);
  CHECK(ck.head.pred == main_n->renamed.pred);
  REQUIRE(ck.body.size() == 2);
  VarId B = ck.head.args[0].args()[0].var_id();
  VarId A = ck.head.args[1].var_id();
  VarId C = ck.body[0].args[1].var_id();
  CHECK(d.cp1.is_ground(B));
  CHECK(d.cp1.is_free(A));
  CHECK(d.cp1.is_ground(C));

  // tw is reached from three literals but expanded once: its dependency
  // set holds the expanding arc plus two sharing arcs
  const OrNode* tw_n = node_by_pred(r, "tw");
  REQUIRE(tw_n);
  CHECK(tw_n->deps.size() == 3);

  // the entry node carries its entry marker
  bool has_entry_marker = false;
  for (const DependencyEntry& e : main_n->deps)
    has_entry_marker = has_entry_marker || e.entry;
  CHECK(has_entry_marker);
}

TEST_CASE("running example: no update rounds are needed") {
  Fixture fx;
  AnalysisResult r = fx.analyze_run();
  CHECK(r.stats.updates == 0);
}

TEST_CASE("empty entry list leaves all tables empty") {
  Fixture fx;
  fx.unit.entries.clear();
  AnalysisResult r = fx.analyze_run();
  CHECK(r.nodes.empty());
  CHECK(r.tables.gen_table().empty());
  CHECK(r.tables.spec_table().empty());
  CHECK(r.program.size() == 10);
}

TEST_CASE("fixpoint: reprocessing every clause changes nothing") {
  for (const char* name : {"running.pl", "append.pl", "even_odd.pl",
                           "rev_acc.pl"}) {
    Fixture fx(name);
    if (std::string(name) == "rev_acc.pl")
      fx.cfg.generalize = GeneralizeStrategy::HomEmbMsg;
    AnalysisResult r1 = fx.analyze_run();
    std::string why;
    INFO(name);
    INFO(why);
    CHECK(verify_fixpoint(r1, fx.xt, &why));
    // determinism double-run
    Fixture fx2(name);
    if (std::string(name) == "rev_acc.pl")
      fx2.cfg.generalize = GeneralizeStrategy::HomEmbMsg;
    AnalysisResult r2 = fx2.analyze_run();
    REQUIRE(r1.node_order.size() == r2.node_order.size());
    for (const auto& key : r1.node_order) {
      REQUIRE(r2.nodes.count(key));
      CHECK(canonical_key({r1.nodes.at(key).pattern.atom,
                           r1.nodes.at(key).answer}) ==
            canonical_key({r2.nodes.at(key).pattern.atom,
                           r2.nodes.at(key).answer}));
    }
    CHECK(print_program(r1.program) == print_program(r2.program));
  }
}

TEST_CASE("monotone answers under update storms (rev_acc)") {
  Fixture fx("rev_acc.pl");
  fx.cfg.generalize = GeneralizeStrategy::HomEmbMsg;
  AnalysisResult r = fx.analyze_run();  // throws on non-monotone update
  const OrNode* rev_n = node_by_pred(r, "rev");
  REQUIRE(rev_n);
  CHECK(all_ground(rev_n->answer));
}

TEST_CASE("apd lacks the ground formula pattern that analyze derives") {
  Fixture fx;
  AnalysisResult full = fx.analyze_run();

  Fixture fx2;
  AnalysisResult a = fx2.apd_run();

  auto formula_key_with_ground_first_arg = [](const AnalysisResult& r) {
    for (const auto& [key, ge] : r.tables.gen_table()) {
      const AbstractAtom& k = ge.key;
      if (k.atom.pred != "formula") continue;
      bool ground_first = true;
      for (VarId x : vars_of(k.atom.args[0]))
        ground_first = ground_first && k.cp.is_ground(x);
      if (!vars_of(k.atom.args[0]).empty() && ground_first) return true;
    }
    return false;
  };
  CHECK(formula_key_with_ground_first_arg(full));
  CHECK(!formula_key_with_ground_first_arg(a));

  // under apd the second formula literal keeps a free first argument
  bool found_free = false;
  for (const auto& [key, ge] : a.tables.gen_table()) {
    if (ge.key.atom.pred != "formula") continue;
    for (VarId x : vars_of(ge.key.atom.args[0]))
      found_free = found_free || ge.key.cp.is_free(x);
  }
  CHECK(found_free);
}

TEST_CASE("apd with the pd domain terminates and memoizes (classical PD)") {
  Fixture fx("running.pl", DomainKind::Pd);
  fx.cfg.generalize = GeneralizeStrategy::HomEmbMsg;
  fx.cfg.unfold.allow_nonleftmost = true;
  AnalysisResult r = fx.apd_run();
  CHECK(!r.tables.spec_table().empty());
  // residual clauses keep the mode tests somewhere
  bool tests_survive = false;
  for (int k = r.original_clause_count + 1;
       k <= static_cast<int>(r.program.size()); ++k)
    for (const Atom& b : r.program.clause(k).body)
      tests_survive =
          tests_survive || b.pred == "ground" || b.pred == "var";
  CHECK(tests_survive);
}

TEST_CASE("a fully pruned definition keeps a bottom answer") {
  SourceUnit u = parse_program(
      ":- entry p(X) : (ground(X)).\n"
      "p(X) :- q(X).\n"
      "q(s(_Y)) :- fail.\n");
  ExecTable xt = default_exec_table();
  EngineConfig cfg;
  AnalysisResult r = analyze(u.program, u.entries, xt, cfg);
  const OrNode* p = node_by_pred(r, "p");
  REQUIRE(p);
  CHECK(p->answer.is_bottom());
}

TEST_CASE("update fuse guards against runaway reprocessing") {
  Fixture fx;
  fx.cfg.update_fuse = 3;
  CHECK_THROWS_AS(fx.analyze_run(), internal_error);
}
