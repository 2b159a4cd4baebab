#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "lps/term.hpp"

// Abstract substitutions over a variable scope, with two domains behind
// one interface: sharing-freeness (shfr) and the trivial single-value
// domain (pd) where every description is top and atoms are compared by
// instance ordering.

namespace lps {

enum class DomainKind { Shfr, Pd };

std::string to_string(DomainKind d);

// Freeness is not preserved under instantiation, so shfr is not
// downwards closed; this gates non-leftmost abstract execution.
bool downwards_closed(DomainKind d);

class AbsSubst {
 public:
  AbsSubst() = default;

  static AbsSubst bottom(DomainKind dom);
  static AbsSubst top(DomainKind dom, const std::vector<VarId>& scope);
  // shfr value from explicit parts; groups and free set are clipped to
  // the scope and normalized.
  static AbsSubst shfr(const std::vector<VarId>& scope,
                       std::set<std::set<VarId>> sharing,
                       std::set<VarId> free);

  DomainKind domain() const { return dom_; }
  bool is_bottom() const { return bottom_; }
  const std::vector<VarId>& scope() const { return scope_; }  // sorted
  bool in_scope(VarId v) const;

  const std::set<std::set<VarId>>& sharing() const { return sharing_; }
  const std::set<VarId>& free_vars() const { return free_; }

  bool is_ground(VarId v) const;  // in no sharing group
  bool is_free(VarId v) const;

  bool operator==(const AbsSubst& o) const;
  bool operator!=(const AbsSubst& o) const { return !(*this == o); }

 private:
  friend AbsSubst arestrict(const AbsSubst&, const std::vector<VarId>&);
  friend AbsSubst aextend(const AbsSubst&, const std::vector<VarId>&);
  friend AbsSubst aunif(const Term&, const Term&, const AbsSubst&);
  friend AbsSubst aconj(const AbsSubst&, const AbsSubst&);
  friend AbsSubst alub(const AbsSubst&, const AbsSubst&);
  friend bool leq(const AbsSubst&, const AbsSubst&);

  DomainKind dom_ = DomainKind::Shfr;
  bool bottom_ = false;
  std::vector<VarId> scope_;
  // shfr payload; unused for pd
  std::set<std::set<VarId>> sharing_;
  std::set<VarId> free_;

  void normalize();
};

// An atom paired with a description over exactly its variables.
struct AbstractAtom {
  Atom atom;
  AbsSubst cp;
};

// --- the domain operations -------------------------------------------

// Projection onto vars; requires vars ⊆ scope.
AbsSubst arestrict(const AbsSubst& l, const std::vector<VarId>& vars);
AbsSubst arestrict(const AbsSubst& l, const Atom& a);
AbsSubst arestrict(const AbsSubst& l, const std::vector<Atom>& goal);

// New variables enter as free and independent.
AbsSubst aextend(const AbsSubst& l, const std::vector<VarId>& vars);

// Adds the abstraction of t1 = t2; bottom when the terms do not unify.
AbsSubst aunif(const Term& t1, const Term& t2, const AbsSubst& l);
AbsSubst aunif(const Atom& a1, const Atom& a2, const AbsSubst& l);

// Greatest lower bound / least upper bound; equal scopes required.
AbsSubst aconj(const AbsSubst& l1, const AbsSubst& l2);
AbsSubst alub(const AbsSubst& l1, const AbsSubst& l2);

// Adapts and projects A:CP onto the variables of clause H ← B:
// arestrict(aunif(A, H, aextend(CP, C)), C). Tolerates scope(CP) ⊇ vars(A).
AbsSubst atranslate(const AbstractAtom& a, const Clause& c);

// Combines a success pattern (over the called literal's variables) with
// the description at the program point before the call, yielding the
// description after it. Sharing groups touching the call survive only
// if their projection is allowed by the answer; freeness of untouched
// variables survives only when no aliasing path through the call could
// have bound them.
AbsSubst extend_success(const AbsSubst& answer, const AbsSubst& call);

// Domain order on descriptions over the same scope.
bool leq(const AbsSubst& l1, const AbsSubst& l2);

// Instance-and-description preorder on abstract atoms.
bool abstract_atom_leq(const AbstractAtom& a1, const AbstractAtom& a2);

// Call widening; identity for both bundled domains (they are finite for
// a fixed scope), kept as the hook point for infinite ones.
AbsSubst widen_call(const std::vector<AbstractAtom>& table_keys,
                    const AbstractAtom& a);

// Definite per-variable facts used for abstract executability guards.
bool entails_ground(const AbsSubst& l, VarId v);
bool entails_free(const AbsSubst& l, VarId v);

// --- γ-membership test oracle ------------------------------------------

// A concrete state: each scope variable mapped to a term whose variables
// stand for distinct runtime cells (an unbound variable is a Var term).
using ConcreteState = std::map<VarId, Term>;

bool concrete_satisfies(const AbsSubst& l, const ConcreteState& s);

// --- keys & rendering ----------------------------------------------------

// Variant-stable key: variables renumbered by first occurrence in the atom.
std::string canonical_key(const AbstractAtom& a);
// Same renumbering, materialized with fresh variables from `gen`.
AbstractAtom canonicalize(const AbstractAtom& a, VarGen& gen);

// {X/G, Y/V, Z/A} style rendering; names taken from `nm`.
std::string to_string(const AbsSubst& l, VarNamer& nm);
std::string to_string(const AbstractAtom& a);
std::string to_string(const AbstractAtom& a, VarNamer& nm);

}  // namespace lps
