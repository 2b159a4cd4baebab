#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <fstream>

#include "doctest.h"
#include "lps/parser.hpp"
#include "util.hpp"

using namespace lps;
using namespace lps::testutil;

TEST_CASE("running example parses to ten numbered clauses") {
  SourceUnit u = parse_program_file(corpus("running.pl"));
  CHECK(u.program.size() == 10);
  CHECK(u.module_name == "_");
  REQUIRE(u.exports.size() == 1);
  CHECK(u.exports[0] == PredKey{"main", 1});
  REQUIRE(u.entries.size() == 1);
  CHECK(u.entries[0].atom.pred == "main");
  CHECK(u.entries[0].props.size() == 2);

  // the predicates of the running example
  CHECK(u.program.defines({"main", 2}));
  CHECK(u.program.defines({"formula", 2}));
  CHECK(u.program.defines({"two", 1}));
  CHECK(u.program.defines({"minus", 3}));
  CHECK(u.program.defines({"twice", 2}));
  CHECK(u.program.defines({"tw", 2}));

  // positions follow textual order: the recursive minus call is (5,1)
  auto b = u.program.get_body(5, 1);
  REQUIRE(b.size() == 1);
  CHECK(b[0].pred == "minus");
  // two_{2,3}: suffix of formula's body from position 3
  auto suffix = u.program.get_body(2, 3);
  REQUIRE(suffix.size() == 3);
  CHECK(suffix[0].pred == "two");
  CHECK(suffix[1].pred == "minus");
  CHECK(suffix[2].pred == "twice");
}

TEST_CASE("facts, bodies and positions") {
  SourceUnit u = parse_program("p.\nq :- p, r.\n");
  CHECK(u.program.size() == 2);
  CHECK(u.program.clause(1).is_fact());
  CHECK(u.program.get_body(2, 1)[0].pred == "p");
  CHECK(u.program.get_body(2, 2)[0].pred == "r");
  CHECK(u.entries.empty());
}

TEST_CASE("syntax errors carry positions; unknown declarations are skipped") {
  CHECK_THROWS_AS(parse_program("p :- .\n"), parse_error);
  CHECK_THROWS_AS(parse_program("p(X"), parse_error);
  SourceUnit u = parse_program(":- use_module(library(lists)).\np.\n");
  CHECK(u.program.size() == 1);
  REQUIRE(u.warnings.size() >= 1);
  CHECK(u.warnings[0].find("use_module") != std::string::npos);
}

TEST_CASE("entry validation") {
  CHECK_THROWS_AS(parse_program(":- entry p(X) : (ground(Y)).\np(0).\n"),
                  parse_error);
  CHECK_THROWS_AS(
      parse_program(":- entry p(X) : (ground(X),var(X)).\np(0).\n"),
      parse_error);
  CHECK_THROWS_AS(
      parse_program(":- entry p(X) : (list(X)).\np(0).\n"), parse_error);
  // entry without properties is fine
  SourceUnit u = parse_program(":- entry p(X).\np(0).\n");
  CHECK(u.entries.size() == 1);
  CHECK(u.entries[0].props.empty());
}

TEST_CASE("anonymous variables are fresh per occurrence") {
  SourceUnit u = parse_program("p(_,_).\n");
  const Clause& c = u.program.clause(1);
  REQUIRE(c.head.args.size() == 2);
  CHECK(c.head.args[0].is_var());
  CHECK(c.head.args[1].is_var());
  CHECK(c.head.args[0].var_id() != c.head.args[1].var_id());
}

TEST_CASE("round-trip: parse(print(P)) is structurally equal") {
  for (const char* name : {"running.pl", "peano_static.pl", "append.pl",
                           "rev_acc.pl", "even_odd.pl", "dbl.pl"}) {
    SourceUnit u = parse_program_file(corpus(name));
    std::string printed = print_program(u.program);
    SourceUnit u2 = parse_program(printed);
    REQUIRE(u2.program.size() == u.program.size());
    for (size_t k = 1; k <= u.program.size(); ++k) {
      const Clause& c1 = u.program.clause(static_cast<int>(k));
      const Clause& c2 = u2.program.clause(static_cast<int>(k));
      CHECK(c1.head.pred == c2.head.pred);
      REQUIRE(c1.body.size() == c2.body.size());
      // variant check across the whole clause via a wrapper atom
      std::vector<Term> args1{Term::compound("$h", c1.head.args.empty()
                                                       ? std::vector<Term>{c("x")}
                                                       : c1.head.args)};
      std::vector<Term> args2{Term::compound("$h", c2.head.args.empty()
                                                       ? std::vector<Term>{c("x")}
                                                       : c2.head.args)};
      for (size_t i = 0; i < c1.body.size(); ++i) {
        args1.push_back(Term::compound("$b", c1.body[i].args.empty()
                                                 ? std::vector<Term>{c(c1.body[i].pred)}
                                                 : c1.body[i].args));
        args2.push_back(Term::compound("$b", c2.body[i].args.empty()
                                                 ? std::vector<Term>{c(c2.body[i].pred)}
                                                 : c2.body[i].args));
      }
      CHECK(variant(at("$c", args1), at("$c", args2)));
    }
  }
  CHECK(print_program(Program{}).empty());
}

TEST_CASE("default exec table holds the four mode entries") {
  ExecTable xt = default_exec_table();
  CHECK(xt.is_external({"ground", 1}));
  CHECK(xt.is_external({"var", 1}));
  CHECK(xt.is_external({"true", 0}));
  CHECK(!xt.is_external({"tw", 2}));
  auto g = xt.entries_for({"ground", 1});
  REQUIRE(g.size() == 2);
  CHECK(g[0]->kind == ExecTableEntry::Replacement::True);
  CHECK(g[0]->guard[0].first == EntryProp::Ground);
  CHECK(g[1]->kind == ExecTableEntry::Replacement::False);
  CHECK(g[1]->guard[0].first == EntryProp::Var);
  auto vv = xt.entries_for({"var", 1});
  REQUIRE(vv.size() == 2);
  CHECK(vv[0]->kind == ExecTableEntry::Replacement::True);
  CHECK(vv[0]->guard[0].first == EntryProp::Var);
  CHECK(vv[1]->kind == ExecTableEntry::Replacement::False);
  CHECK(vv[1]->guard[0].first == EntryProp::Ground);
}

TEST_CASE("user exec-table files shadow defaults") {
  std::string path = "/tmp/lps_exec_test.tbl";
  {
    std::ofstream f(path);
    f << "% user entries\n";
    f << "ground(X) : g(X) ~> false.\n";
    f << "mylen(X,N) : (g(X), f(N)) ~> true.\n";
    f << "wrap(X) : g(X) ~> unwrapped(X).\n";
  }
  ExecTable xt = default_exec_table();
  VarGen gen;
  gen.reserve_up_to(1000);
  parse_exec_table_file(path, xt, gen);
  auto g = xt.entries_for({"ground", 1});
  REQUIRE(g.size() == 3);
  CHECK(g[0]->kind == ExecTableEntry::Replacement::False);  // user first
  CHECK(xt.is_external({"mylen", 2}));
  auto w = xt.entries_for({"wrap", 1});
  REQUIRE(w.size() == 1);
  CHECK(w[0]->kind == ExecTableEntry::Replacement::Atom);
  CHECK(w[0]->replacement.pred == "unwrapped");
}

TEST_CASE("entry_to_abstract_atom encodings") {
  SourceUnit u = parse_program_file(corpus("running.pl"));
  const EntryDecl& e = u.entries[0];

  AbstractAtom shfr = entry_to_abstract_atom(e, DomainKind::Shfr);
  auto scope = vars_of(shfr.atom);
  REQUIRE(scope.size() == 2);
  VarId L = scope[0], R = scope[1];
  CHECK(shfr.cp.is_ground(L));
  CHECK(shfr.cp.is_free(R));
  CHECK(shfr.cp.sharing() == std::set<std::set<VarId>>{{R}});

  // by the membership oracle: L bound to ground, R unbound
  ConcreteState ok{{L, s_n(2, c("0"))}, {R, v(500)}};
  CHECK(concrete_satisfies(shfr.cp, ok));
  ConcreteState bad{{L, v(501)}, {R, v(500)}};
  CHECK(!concrete_satisfies(shfr.cp, bad));
  ConcreteState bad2{{L, c("0")}, {R, c("0")}};
  CHECK(!concrete_satisfies(shfr.cp, bad2));

  AbstractAtom pd = entry_to_abstract_atom(e, DomainKind::Pd);
  CHECK(pd.cp.domain() == DomainKind::Pd);
  CHECK(!pd.cp.is_bottom());

  // no properties: unknown, pairwise-possibly-sharing
  SourceUnit u2 = parse_program(":- entry p(X,Y).\np(0,0).\n");
  AbstractAtom top = entry_to_abstract_atom(u2.entries[0], DomainKind::Shfr);
  CHECK(top.cp.sharing().size() == 3);  // {X},{Y},{X,Y}
  CHECK(top.cp.free_vars().empty());
}
