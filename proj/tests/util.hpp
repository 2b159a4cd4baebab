#pragma once

#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lps/domain.hpp"
#include "lps/parser.hpp"
#include "lps/term.hpp"

// Shared pieces for the test suites: tiny term builders, brute-force
// oracles kept independent of the library implementations they check,
// and a sampler for the concretization of shfr values.

namespace lps::testutil {

inline std::string corpus(const std::string& name) {
  return std::string(CORPUS_DIR) + "/" + name;
}

// terse builders for hand-written expectations
inline Term v(VarId id) { return Term::var(id); }
inline Term c(const std::string& s) { return Term::constant(s); }
inline Term f(const std::string& s, std::vector<Term> args) {
  return Term::compound(s, std::move(args));
}
inline Term s_n(int n, Term inner) {
  Term t = std::move(inner);
  for (int i = 0; i < n; ++i) t = f("s", {t});
  return t;
}
inline Atom at(const std::string& p, std::vector<Term> args) {
  return Atom{p, std::move(args)};
}

// --- brute-force unifier (oracle for mgu) --------------------------------
//
// Enumerates substitutions over a small universe and keeps those that
// make both terms syntactically equal. Only usable for tiny scopes.

inline std::vector<Term> enumerate_terms(int depth,
                                         const std::vector<VarId>& vars) {
  std::vector<Term> out;
  out.push_back(c("a"));
  out.push_back(c("b"));
  if (depth > 0) {
    for (const Term& t : enumerate_terms(depth - 1, vars))
      out.push_back(f("s", {t}));
  }
  for (VarId x : vars) out.push_back(v(x));
  return out;
}

// Does some substitution over the enumerated universe unify t1 and t2?
inline bool brute_unifiable(const Term& t1, const Term& t2) {
  std::vector<VarId> vars;
  for (VarId x : vars_of(t1)) vars.push_back(x);
  for (VarId x : vars_of(t2)) vars.push_back(x);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  std::vector<Term> univ = enumerate_terms(2, {});
  size_t n = vars.size();
  std::vector<size_t> idx(n, 0);
  while (true) {
    Substitution s;
    for (size_t i = 0; i < n; ++i) s.bind(vars[i], univ[idx[i]]);
    if (s(t1) == s(t2)) return true;
    size_t i = 0;
    for (; i < n; ++i) {
      if (++idx[i] < univ.size()) break;
      idx[i] = 0;
    }
    if (i == n) return false;
  }
}

// --- random shfr values and their concretizations --------------------------

struct ShfrSample {
  std::vector<VarId> scope;
  AbsSubst value;
};

inline ShfrSample random_shfr(int nvars, std::mt19937_64& rng) {
  std::vector<VarId> scope;
  for (int i = 0; i < nvars; ++i) scope.push_back(i);
  std::set<std::set<VarId>> sh;
  size_t subsets = size_t{1} << nvars;
  for (size_t mask = 1; mask < subsets; ++mask) {
    if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) {
      std::set<VarId> g;
      for (int i = 0; i < nvars; ++i)
        if (mask & (size_t{1} << i)) g.insert(scope[static_cast<size_t>(i)]);
      sh.insert(std::move(g));
    }
  }
  std::set<VarId> fr;
  for (VarId x : scope) {
    bool covered = false;
    for (const auto& g : sh) covered = covered || g.count(x);
    if (covered && std::uniform_int_distribution<int>(0, 2)(rng) == 0)
      fr.insert(x);
  }
  ShfrSample out;
  out.scope = scope;
  out.value = AbsSubst::shfr(scope, std::move(sh), std::move(fr));
  return out;
}

// A concrete state over the 3-constant / 1-functor universe with up to
// four runtime variables. Rejection sampling against γ-membership is
// done by the caller.
inline ConcreteState random_state(const std::vector<VarId>& scope,
                                  std::mt19937_64& rng) {
  // runtime variables use ids 1000+ so they never collide with the scope
  auto rand_term = [&](auto&& self, int depth) -> Term {
    int pick = std::uniform_int_distribution<int>(0, depth > 0 ? 5 : 4)(rng);
    switch (pick) {
      case 0:
        return c("a");
      case 1:
        return c("b");
      case 2:
        return c("k");
      case 3:
      case 4:
        return v(1000 + std::uniform_int_distribution<int>(0, 3)(rng));
      default: {
        Term l = self(self, depth - 1);
        Term r = self(self, depth - 1);
        return f("g", {l, r});
      }
    }
  };
  ConcreteState st;
  for (VarId x : scope) st[x] = rand_term(rand_term, 2);
  return st;
}

// The concrete counterpart of a solved unification under a state: apply
// the state to both terms, unify, and push the unifier back through.
inline std::optional<ConcreteState> concrete_unify(const ConcreteState& st,
                                                   const Term& t1,
                                                   const Term& t2) {
  Substitution s;
  for (const auto& [x, t] : st) s.bind(x, t);
  auto u = mgu(s(t1), s(t2));
  if (!u) return std::nullopt;
  ConcreteState out;
  for (const auto& [x, t] : st) out[x] = (*u)(t);
  return out;
}

}  // namespace lps::testutil
