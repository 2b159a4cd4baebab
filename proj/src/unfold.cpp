#include "lps/unfold.hpp"

#include <deque>

namespace lps {

std::string to_string(UnfoldStrategy s) {
  switch (s) {
    case UnfoldStrategy::HomEmb:
      return "hom-emb";
    case UnfoldStrategy::OneStep:
      return "one-step";
    case UnfoldStrategy::DeriveThenAexec:
      return "derive-then-aexec";
  }
  return "?";
}

bool Unfolder::is_external(const Atom& a) const {
  return xt_.is_external(pred_key(a));
}

// --- derivation step ------------------------------------------------------

std::optional<AbstractGoal> Unfolder::derive_step(const AbstractGoal& g,
                                                  size_t selected,
                                                  const Clause& clause) const {
  const Atom& ar = g.atoms[selected].atom;
  auto theta = mgu(ar, clause.head);
  if (!theta) return std::nullopt;

  const Substitution& th = *theta;
  Clause ctheta = th(clause);
  AbsSubst ext = aextend(g.cp, vars_of(ctheta));
  AbsSubst cpu = aunif(ar, th(clause.head), ext);
  if (cpu.is_bottom()) return std::nullopt;

  AbstractGoal out;
  out.answer = g.answer;
  out.answer.compose(th);

  std::vector<Atom> chain = g.atoms[selected].ancestors;
  chain.push_back(ar);  // snapshot at selection time
  std::vector<Atom> plain;
  for (size_t i = 0; i < g.atoms.size(); ++i) {
    if (i == selected) {
      for (const Atom& b : ctheta.body) out.atoms.push_back({b, chain});
    } else {
      out.atoms.push_back({th(g.atoms[i].atom), g.atoms[i].ancestors});
    }
  }
  for (const GoalAtom& ga : out.atoms) plain.push_back(ga.atom);
  out.cp = arestrict(cpu, vars_of(plain));
  return out;
}

// --- abstract execution ------------------------------------------------------

bool Unfolder::guard_holds(const ExecTableEntry& e, const Substitution& theta,
                           const AbsSubst& cp) const {
  for (const auto& [prop, v] : e.guard) {
    Term arg = theta(Term::var(v));
    if (prop == EntryProp::Ground) {
      if (is_ground(arg)) continue;
      bool all = true;
      for (VarId w : vars_of(arg))
        if (!entails_ground(cp, w)) {
          all = false;
          break;
        }
      if (!all) return false;
    } else {  // Var
      if (!arg.is_var() || !entails_free(cp, arg.var_id())) return false;
    }
  }
  return true;
}

Unfolder::ExecOutcome Unfolder::abstract_execute(AbstractGoal& g,
                                                 size_t selected) const {
  const Atom ar = g.atoms[selected].atom;
  PredKey pk = pred_key(ar);
  auto goal_vars = [](const AbstractGoal& gg) {
    std::vector<Atom> plain;
    for (const GoalAtom& ga : gg.atoms) plain.push_back(ga.atom);
    return vars_of(plain);
  };
  if (pk == PredKey{"true", 0}) {
    g.atoms.erase(g.atoms.begin() + static_cast<long>(selected));
    g.cp = arestrict(g.cp, goal_vars(g));
    return ExecOutcome::Executed;
  }
  if (pk == PredKey{"false", 0} || pk == PredKey{"fail", 0})
    return ExecOutcome::Failed;

  for (const ExecTableEntry* e : xt_.entries_for(pk)) {
    auto theta = match(e->pattern, ar);
    if (!theta) continue;
    AbsSubst cp_a = arestrict(g.cp, ar);
    if (!guard_holds(*e, *theta, cp_a)) continue;
    emit(TraceEvent::Kind::Exec, 0, to_string(ar));
    switch (e->kind) {
      case ExecTableEntry::Replacement::False:
        return ExecOutcome::Failed;
      case ExecTableEntry::Replacement::True: {
        g.atoms.erase(g.atoms.begin() + static_cast<long>(selected));
        break;
      }
      case ExecTableEntry::Replacement::Atom: {
        g.atoms[selected].atom = (*theta)(e->replacement);
        break;
      }
    }
    g.cp = arestrict(g.cp, goal_vars(g));
    return ExecOutcome::Executed;
  }
  return ExecOutcome::NotApplicable;
}

// --- control -------------------------------------------------------------------

bool Unfolder::stop_criterion(const std::vector<Atom>& ancestors,
                              const Atom& candidate) {
  for (const Atom& a : ancestors)
    if (homeomorphic_embeds(a, candidate)) return true;
  return false;
}

std::optional<size_t> Unfolder::select_atom(const AbstractGoal& g) const {
  if (g.atoms.empty()) return std::nullopt;
  const Atom& first = g.atoms[0].atom;
  if (!is_external(first) && !stop_criterion(g.atoms[0].ancestors, first))
    return 0;
  if (!cfg_.allow_nonleftmost) return std::nullopt;
  for (size_t i = 1; i < g.atoms.size(); ++i) {
    if (is_external(g.atoms[i - 1].atom)) break;  // impure to the left
    const Atom& a = g.atoms[i].atom;
    if (is_external(a)) continue;
    if (!stop_criterion(g.atoms[i].ancestors, a)) return i;
  }
  return std::nullopt;
}

// --- tree construction ------------------------------------------------------------

namespace {
Resultant make_resultant(const Atom& root_atom, const AbstractGoal& g) {
  Resultant r;
  r.head = g.answer(root_atom);
  for (const GoalAtom& ga : g.atoms) r.body.push_back(ga.atom);
  r.leaf_cp = g.cp;
  return r;
}
}  // namespace

std::vector<Resultant> Unfolder::unfold_hom_emb(const AbstractGoal& root_goal,
                                                const Atom& root_atom) {
  std::vector<Resultant> out;
  std::deque<AbstractGoal> work{root_goal};
  int steps = 0;
  while (!work.empty()) {
    AbstractGoal g = std::move(work.front());
    work.pop_front();
    if (++steps > cfg_.max_steps)
      throw internal_error("aunfold: step fuse tripped (control bug)");

    if (g.atoms.empty()) {
      emit(TraceEvent::Kind::Leaf, 0, "success");
      out.push_back(make_resultant(root_atom, g));
      continue;
    }

    // abstract execution is attempted before derivation; non-leftmost
    // positions only when the domain is downwards closed
    bool progressed = false;
    {
      size_t limit = downwards_closed(g.cp.domain()) ? g.atoms.size() : 1;
      for (size_t i = 0; i < limit && i < g.atoms.size(); ++i) {
        if (!is_external(g.atoms[i].atom)) continue;
        ExecOutcome o = abstract_execute(g, i);
        if (o == ExecOutcome::Failed) {
          emit(TraceEvent::Kind::Fail, 0, "abstract execution to false");
          progressed = true;
          break;
        }
        if (o == ExecOutcome::Executed) {
          work.push_front(std::move(g));
          progressed = true;
          break;
        }
      }
    }
    if (progressed) continue;

    std::optional<size_t> sel = select_atom(g);
    if (!sel) {
      if (!g.atoms.empty() &&
          stop_criterion(g.atoms[0].ancestors, g.atoms[0].atom))
        emit(TraceEvent::Kind::Stop, 0, to_string(g.atoms[0].atom));
      emit(TraceEvent::Kind::Leaf, 0, "stopped");
      out.push_back(make_resultant(root_atom, g));
      continue;
    }
    const Atom& ar = g.atoms[*sel].atom;
    PredKey pk = pred_key(ar);
    bool any_child = false;
    std::vector<AbstractGoal> children;
    for (int k : prog_.clauses_for(pk)) {
      Clause rc = rename_apart(prog_.clause(k), prog_.vars());
      auto child = derive_step(g, *sel, rc);
      if (child) {
        emit(TraceEvent::Kind::Derive, k, to_string(ar));
        children.push_back(std::move(*child));
        any_child = true;
      }
    }
    if (!any_child) {
      emit(TraceEvent::Kind::Fail, 0, "no clause for " + to_string(ar));
      continue;  // failed branch contributes nothing
    }
    for (auto it = children.rbegin(); it != children.rend(); ++it)
      work.push_front(std::move(*it));
  }
  return out;
}

std::vector<Resultant> Unfolder::unfold_one_step(const AbstractGoal& root_goal,
                                                 const Atom& root_atom,
                                                 bool then_aexec) {
  std::vector<Resultant> out;
  PredKey pk = pred_key(root_atom);
  for (int k : prog_.clauses_for(pk)) {
    Clause rc = rename_apart(prog_.clause(k), prog_.vars());
    auto child = derive_step(root_goal, 0, rc);
    if (!child) continue;
    emit(TraceEvent::Kind::Derive, k, to_string(root_atom));
    if (then_aexec) {
      bool failed = false;
      while (!child->atoms.empty() && is_external(child->atoms[0].atom)) {
        ExecOutcome o = abstract_execute(*child, 0);
        if (o == ExecOutcome::Failed) {
          failed = true;
          break;
        }
        if (o == ExecOutcome::NotApplicable) break;
      }
      if (failed) {
        emit(TraceEvent::Kind::Fail, 0, "abstract execution to false");
        continue;
      }
    }
    out.push_back(make_resultant(root_atom, *child));
  }
  return out;
}

std::vector<Resultant> Unfolder::aunfold(const AbstractAtom& root) {
  AbstractGoal g;
  g.atoms.push_back({root.atom, {}});
  g.cp = arestrict(root.cp, root.atom);
  switch (cfg_.strategy) {
    case UnfoldStrategy::HomEmb:
      return unfold_hom_emb(g, root.atom);
    case UnfoldStrategy::OneStep:
      return unfold_one_step(g, root.atom, false);
    case UnfoldStrategy::DeriveThenAexec:
      return unfold_one_step(g, root.atom, true);
  }
  return {};
}

}  // namespace lps
