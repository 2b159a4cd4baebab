#include "lps/interp.hpp"

#include <algorithm>
#include <set>

namespace lps {

namespace {

struct Solver {
  const Program& p;
  int depth_bound = 0;
  bool bound_hit = false;
  std::vector<Substitution> answers{};
  Atom query{};
  VarGen gen{};

  void run() {
    // solving works on fresh ids above everything in the program
    VarId top = 0;
    for (const Clause& c : p.clauses())
      for (VarId v : vars_of(c)) top = std::max(top, v + 1);
    for (VarId v : vars_of(query)) top = std::max(top, v + 1);
    gen.reserve_up_to(top);
    Substitution empty;
    std::vector<Atom> goal{query};
    step(goal, empty, 0);
  }

  bool builtin(const Atom& a) const {
    PredKey pk = pred_key(a);
    return pk == PredKey{"true", 0} || pk == PredKey{"false", 0} ||
           pk == PredKey{"fail", 0} || pk == PredKey{"ground", 1} ||
           pk == PredKey{"var", 1};
  }

  void step(const std::vector<Atom>& goal, const Substitution& theta,
            int depth) {
    if (goal.empty()) {
      Substitution ans;
      for (VarId v : vars_of(query)) {
        Term t = theta(Term::var(v));
        if (!(t == Term::var(v))) ans.bind(v, t);
      }
      answers.push_back(std::move(ans));
      return;
    }
    if (depth >= depth_bound) {
      bound_hit = true;
      return;
    }
    Atom sel = theta(goal.front());
    std::vector<Atom> rest(goal.begin() + 1, goal.end());

    if (builtin(sel)) {
      PredKey pk = pred_key(sel);
      bool ok;
      if (pk == PredKey{"true", 0})
        ok = true;
      else if (pk == PredKey{"ground", 1})
        ok = is_ground(sel.args[0]);
      else if (pk == PredKey{"var", 1})
        ok = sel.args[0].is_var();
      else
        ok = false;  // false / fail
      if (ok) step(rest, theta, depth + 1);
      return;
    }

    for (int k : p.clauses_for(pred_key(sel))) {
      Clause c = rename_apart(p.clause(k), gen);
      auto u = mgu(sel, c.head);
      if (!u) continue;
      Substitution theta2 = theta;
      theta2.compose(*u);
      std::vector<Atom> next;
      next.reserve(c.body.size() + rest.size());
      for (const Atom& b : c.body) next.push_back(b);
      for (const Atom& a : rest) next.push_back(a);
      step(next, theta2, depth + 1);
    }
  }
};

}  // namespace

RawAnswers solve_raw(const Program& p, const Atom& query, int depth_bound) {
  Solver s{p, depth_bound};
  s.query = query;
  s.run();
  return {std::move(s.answers), s.bound_hit};
}

InterpResult solve(const Program& p, const Atom& query, int depth_bound) {
  RawAnswers raw = solve_raw(p, query, depth_bound);
  InterpResult out;
  out.depth_bound_hit = raw.depth_bound_hit;
  for (const Substitution& s : raw.answers)
    out.answers.push_back(to_string(canonical_atom(s(query))));
  std::sort(out.answers.begin(), out.answers.end());
  return out;
}

// --- signatures and sampling -------------------------------------------------

namespace {
void collect_symbols(const Term& t, std::set<std::string>& consts,
                     std::set<std::pair<std::string, size_t>>& functors) {
  switch (t.kind()) {
    case TermKind::Var:
      return;
    case TermKind::Const:
      consts.insert(t.symbol());
      return;
    case TermKind::Compound:
      functors.insert({t.symbol(), t.arity()});
      for (const Term& a : t.args()) collect_symbols(a, consts, functors);
      return;
  }
}
}  // namespace

Signature program_signature(const Program& p) {
  std::set<std::string> consts;
  std::set<std::pair<std::string, size_t>> functors;
  for (const Clause& c : p.clauses()) {
    for (const Term& t : c.head.args) collect_symbols(t, consts, functors);
    for (const Atom& a : c.body)
      for (const Term& t : a.args) collect_symbols(t, consts, functors);
  }
  if (consts.empty()) consts.insert("0");
  Signature sig;
  sig.constants.assign(consts.begin(), consts.end());
  sig.functors.assign(functors.begin(), functors.end());
  return sig;
}

Term random_ground_term(const Signature& sig, int max_depth,
                        std::mt19937_64& rng) {
  if (max_depth <= 0 || sig.functors.empty()) {
    std::uniform_int_distribution<size_t> d(0, sig.constants.size() - 1);
    return Term::constant(sig.constants[d(rng)]);
  }
  std::uniform_int_distribution<size_t> pick(
      0, sig.constants.size() + sig.functors.size() - 1);
  size_t i = pick(rng);
  if (i < sig.constants.size()) return Term::constant(sig.constants[i]);
  const auto& [f, n] = sig.functors[i - sig.constants.size()];
  std::vector<Term> args;
  for (size_t j = 0; j < n; ++j)
    args.push_back(random_ground_term(sig, max_depth - 1, rng));
  return Term::compound(f, std::move(args));
}

std::vector<Atom> sample_queries(const EntryDecl& e, const Signature& sig,
                                 int count, int max_depth, VarGen& gen,
                                 std::mt19937_64& rng) {
  std::map<VarId, EntryProp> declared;
  for (const auto& [prop, v] : e.props) declared[v] = prop;
  std::vector<Atom> out;
  std::set<std::string> seen;
  for (int n = 0; n < count; ++n) {
    Substitution s;
    for (VarId v : vars_of(e.atom)) {
      auto it = declared.find(v);
      bool make_ground;
      if (it == declared.end())
        make_ground = std::uniform_int_distribution<int>(0, 1)(rng) == 0;
      else
        make_ground = it->second == EntryProp::Ground;
      if (make_ground)
        s.bind(v, random_ground_term(sig, max_depth, rng));
      else
        s.bind(v, Term::var(gen.fresh()));
    }
    Atom q = s(e.atom);
    if (seen.insert(to_string(canonical_atom(q))).second)
      out.push_back(std::move(q));
  }
  return out;
}

}  // namespace lps
