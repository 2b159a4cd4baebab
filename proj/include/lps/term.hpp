#pragma once

#include <atomic>
#include <cassert>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

// Concrete term language: terms, atoms, clauses and programs with stable
// (rule, position) addressing, plus the syntactic operations everything
// else is built on: unification (with occurs check), renaming apart,
// anti-unification and homeomorphic embedding.

namespace lps {

struct internal_error : std::logic_error {
  using std::logic_error::logic_error;
};

using VarId = int;

class VarGen {
 public:
  VarId fresh() { return next_.fetch_add(1, std::memory_order_relaxed); }
  // Reserves all ids below `bound`, so parser-assigned ids never collide.
  void reserve_up_to(VarId bound) {
    VarId cur = next_.load(std::memory_order_relaxed);
    while (cur < bound && !next_.compare_exchange_weak(cur, bound)) {
    }
  }

 private:
  std::atomic<VarId> next_{0};
};

enum class TermKind { Var, Const, Compound };

class Term {
 public:
  Term() : Term(constant("0")) {}

  static Term var(VarId id);
  static Term constant(std::string symbol);
  static Term compound(std::string functor, std::vector<Term> args);

  TermKind kind() const { return node_->kind; }
  bool is_var() const { return node_->kind == TermKind::Var; }
  bool is_const() const { return node_->kind == TermKind::Const; }
  bool is_compound() const { return node_->kind == TermKind::Compound; }

  VarId var_id() const {
    assert(is_var());
    return node_->var;
  }
  const std::string& symbol() const {
    assert(!is_var());
    return node_->sym;
  }
  std::span<const Term> args() const { return node_->args; }
  size_t arity() const { return node_->args.size(); }

  bool operator==(const Term& o) const;
  bool operator!=(const Term& o) const { return !(*this == o); }

 private:
  struct Node {
    TermKind kind;
    VarId var = -1;
    std::string sym;
    std::vector<Term> args;
  };
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Atom {
  std::string pred;
  std::vector<Term> args;

  size_t arity() const { return args.size(); }
  bool operator==(const Atom& o) const;
  bool operator!=(const Atom& o) const { return !(*this == o); }
};

// Functor or predicate name paired with its arity.
struct PredKey {
  std::string name;
  size_t arity;
  auto operator<=>(const PredKey&) const = default;
};

inline PredKey pred_key(const Atom& a) { return {a.pred, a.arity()}; }

struct Clause {
  int number = 0;  // rule number k, 1-based, unique in its program
  Atom head;
  std::vector<Atom> body;  // empty = fact

  bool is_fact() const { return body.empty(); }
};

class Program {
 public:
  Program() : vars_(std::make_shared<VarGen>()) {}

  int add_clause(Atom head, std::vector<Atom> body);
  const Clause& clause(int k) const;
  const std::vector<Clause>& clauses() const { return clauses_; }
  size_t size() const { return clauses_.size(); }

  const std::vector<int>& clauses_for(const PredKey& p) const;
  bool defines(const PredKey& p) const { return index_.count(p) > 0; }

  // Goal suffix starting at body literal (k, i); i == len+1 gives the
  // empty goal.
  std::vector<Atom> get_body(int k, int i) const;

  VarGen& vars() const { return *vars_; }
  std::shared_ptr<VarGen> vars_ptr() const { return vars_; }

 private:
  std::vector<Clause> clauses_;
  std::map<PredKey, std::vector<int>> index_;
  std::shared_ptr<VarGen> vars_;  // shared by copies of the same run
};

// --- substitutions ---------------------------------------------------

class Substitution {
 public:
  Substitution() = default;

  bool empty() const { return map_.empty(); }
  size_t size() const { return map_.size(); }
  bool binds(VarId v) const { return map_.count(v) > 0; }
  const Term* lookup(VarId v) const;
  void bind(VarId v, Term t) { map_[v] = std::move(t); }

  Term operator()(const Term& t) const;
  Atom operator()(const Atom& a) const;
  std::vector<Atom> operator()(const std::vector<Atom>& g) const;
  Clause operator()(const Clause& c) const;

  // this := other ∘ this (apply `this` first, then `other`).
  void compose(const Substitution& other);

  const std::map<VarId, Term>& bindings() const { return map_; }

 private:
  std::map<VarId, Term> map_;
};

// --- free variables ---------------------------------------------------

void collect_vars(const Term& t, std::vector<VarId>& out);
void collect_vars(const Atom& a, std::vector<VarId>& out);
std::vector<VarId> vars_of(const Term& t);
std::vector<VarId> vars_of(const Atom& a);
std::vector<VarId> vars_of(const std::vector<Atom>& goal);
std::vector<VarId> vars_of(const Clause& c);
std::set<VarId> var_set(const Atom& a);

// --- unification ------------------------------------------------------

// Most general unifier in idempotent form; occurs check on. nullopt when
// no unifier exists.
std::optional<Substitution> mgu(const Term& t1, const Term& t2);
std::optional<Substitution> mgu(const Atom& a1, const Atom& a2);

// One-way matching: θ with θ(general) == instance, binding only
// variables of `general`.
std::optional<Substitution> match(const Atom& general, const Atom& instance);

bool is_ground(const Term& t);
bool is_ground(const Atom& a);

// --- renaming ---------------------------------------------------------

Clause rename_apart(const Clause& c, VarGen& gen);
Atom rename_apart(const Atom& a, VarGen& gen);

// Variables renumbered to 0,1,... in first-occurrence order; used for
// variant-stable table keys.
Atom canonical_atom(const Atom& a);
bool variant(const Term& t1, const Term& t2);
bool variant(const Atom& a1, const Atom& a2);

// --- most specific generalization (anti-unification) -------------------

Term msg(const Term& t1, const Term& t2, VarGen& gen);
// nullopt when the atoms disagree on predicate or arity.
std::optional<Atom> msg(const Atom& a1, const Atom& a2, VarGen& gen);

// --- homeomorphic embedding --------------------------------------------

// t_old ⊴ t_new under: variables embed into variables, diving, coupling.
bool homeomorphic_embeds(const Term& t_old, const Term& t_new);
bool homeomorphic_embeds(const Atom& a_old, const Atom& a_new);
// ⊴ and not a variant; the flag used by generalization control.
bool strictly_embeds(const Atom& a_old, const Atom& a_new);

// --- printing ----------------------------------------------------------

// Stable letter names (A, B, ..., A1, ...) assigned per printing scope.
class VarNamer {
 public:
  std::string name(VarId v);

 private:
  std::map<VarId, std::string> names_;
};

std::string to_string(const Term& t, VarNamer& nm);
std::string to_string(const Atom& a, VarNamer& nm);
std::string to_string(const Term& t);
std::string to_string(const Atom& a);
std::string to_string(const Clause& c);

}  // namespace lps
