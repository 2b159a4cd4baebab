#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "lps/domain.hpp"
#include "lps/unfold.hpp"

// Global control: generalization strategies, the generalization and
// specialization tables, fresh-name filtering, head renaming, and the
// shared specialized-definition routine that extends the program online.

namespace lps {

enum class GeneralizeStrategy { Id, HomEmbMsg, BaseForm };

std::string to_string(GeneralizeStrategy s);

struct GenEntry {
  AbstractAtom key;
  AbstractAtom value;  // key ⊑ value always holds
};

struct SpecEntry {
  AbstractAtom key;
  Atom renamed;        // fresh sp_ predicate; the link to its clauses
  int order;           // creation order, used for stable output
};

class GlobalTables {
 public:
  explicit GlobalTables(std::set<std::string> entry_preds = {})
      : entry_preds_(std::move(entry_preds)) {}

  const std::map<std::string, GenEntry>& gen_table() const { return gt_; }
  const std::map<std::string, SpecEntry>& spec_table() const { return st_; }
  const std::vector<std::string>& spec_order() const { return st_order_; }

  const GenEntry* gen_lookup(const AbstractAtom& a) const;
  const SpecEntry* spec_lookup(const AbstractAtom& a) const;

  void gen_insert(const AbstractAtom& key, const AbstractAtom& value);
  const SpecEntry& spec_insert(const AbstractAtom& key, Atom renamed);

  // Fresh head for A': variables of A' in first-occurrence order, with
  // constants and structure filtered out -- except for entry predicates,
  // whose argument vector is kept so the exported interface survives.
  Atom new_filter(const Atom& a_prime);

  bool is_entry_pred(const std::string& p) const {
    return entry_preds_.count(p) > 0;
  }

  // Which specialized predicate belongs to which spec-table entry.
  const std::map<std::string, std::string>& owner_of_pred() const {
    return pred_owner_;
  }

 private:
  std::map<std::string, GenEntry> gt_;
  std::map<std::string, SpecEntry> st_;
  std::vector<std::string> st_order_;
  std::map<std::string, std::string> pred_owner_;  // sp pred -> st key
  std::set<std::string> entry_preds_;
  int next_name_ = 1;
};

// θ(B') where θ = mgu(A, B); a missing unifier means a broken
// generalization/specialization chain.
Atom ren(const Atom& a, const Atom& b, const Atom& b_prime);

// A' : CP' with A:CP ⊑ A':CP'.
AbstractAtom ageneralize(const GlobalTables& tables, const AbstractAtom& a,
                         GeneralizeStrategy strategy, VarGen& gen);

// The online specialization step: generalize, memoize, unfold, rename
// heads and extend the program. Returns (A', A'').
std::pair<AbstractAtom, Atom> specialized_definition(
    Program& p, const AbstractAtom& a, GeneralizeStrategy strategy,
    const ExecTable& xt, const UnfoldConfig& ucfg, GlobalTables& tables,
    const TraceFn& trace = nullptr);

}  // namespace lps
