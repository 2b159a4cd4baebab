#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lps/domain.hpp"
#include "lps/parser.hpp"
#include "lps/term.hpp"

// Abstract SLD: derivation steps carrying abstract substitutions,
// abstract executability against the exec table, embedding-based local
// control and resultant extraction.

namespace lps {

enum class UnfoldStrategy { HomEmb, OneStep, DeriveThenAexec };

std::string to_string(UnfoldStrategy s);

struct UnfoldConfig {
  UnfoldStrategy strategy = UnfoldStrategy::HomEmb;
  // non-leftmost derivation steps; classical PD turns this on
  bool allow_nonleftmost = false;
  // hard fuse; tripping it means broken control, not big input
  int max_steps = 10000;
};

// A goal atom carries its covering ancestors: the chain of selected
// atoms (snapshotted at selection time) whose resolution introduced it.
// The embedding whistle compares a candidate against its own chain.
struct GoalAtom {
  Atom atom;
  std::vector<Atom> ancestors;
};

struct AbstractGoal {
  std::vector<GoalAtom> atoms;
  AbsSubst cp;          // scope is exactly vars of the goal
  Substitution answer;  // accumulated from the derivation root
};

struct Resultant {
  Atom head;               // θ(A) for root atom A
  std::vector<Atom> body;  // leaf goal, left to right
  AbsSubst leaf_cp;
};

struct TraceEvent {
  enum class Kind { Derive, Exec, Stop, Fail, Leaf } kind;
  int clause = 0;  // rule number for Derive
  std::string detail;
};

using TraceFn = std::function<void(const TraceEvent&)>;

class Unfolder {
 public:
  Unfolder(const Program& p, const ExecTable& xt, UnfoldConfig cfg,
           TraceFn trace = nullptr)
      : prog_(p), xt_(xt), cfg_(cfg), trace_(std::move(trace)) {}

  // Resultants of a finite abstract SLD tree rooted at ⟨A⟩:CP.
  std::vector<Resultant> aunfold(const AbstractAtom& root);

  // One derivation step at `selected` with `clause` (renamed apart);
  // nullopt when the head does not unify or the description collapses.
  std::optional<AbstractGoal> derive_step(const AbstractGoal& g,
                                          size_t selected,
                                          const Clause& clause) const;

  enum class ExecOutcome { NotApplicable, Executed, Failed };
  // Abstract execution of the atom at `selected` against the table.
  ExecOutcome abstract_execute(AbstractGoal& g, size_t selected) const;

  // Stop when some same-predicate ancestor embeds into the candidate.
  static bool stop_criterion(const std::vector<Atom>& ancestors,
                             const Atom& candidate);

  // Index of the atom to derive next, or nullopt to stop unfolding.
  std::optional<size_t> select_atom(const AbstractGoal& g) const;

  bool is_external(const Atom& a) const;

 private:
  bool guard_holds(const ExecTableEntry& e, const Substitution& theta,
                   const AbsSubst& cp) const;
  std::vector<Resultant> unfold_hom_emb(const AbstractGoal& root_goal,
                                        const Atom& root_atom);
  std::vector<Resultant> unfold_one_step(const AbstractGoal& root_goal,
                                         const Atom& root_atom,
                                         bool then_aexec);
  void emit(TraceEvent::Kind k, int clause, const std::string& d) const {
    if (trace_) trace_({k, clause, d});
  }

  const Program& prog_;
  const ExecTable& xt_;
  UnfoldConfig cfg_;
  TraceFn trace_;
};

}  // namespace lps
