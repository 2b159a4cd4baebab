#include "lps/global_control.hpp"

#include <algorithm>

namespace lps {

std::string to_string(GeneralizeStrategy s) {
  switch (s) {
    case GeneralizeStrategy::Id:
      return "id";
    case GeneralizeStrategy::HomEmbMsg:
      return "hom-emb-msg";
    case GeneralizeStrategy::BaseForm:
      return "base-form";
  }
  return "?";
}

const GenEntry* GlobalTables::gen_lookup(const AbstractAtom& a) const {
  auto it = gt_.find(canonical_key(a));
  return it == gt_.end() ? nullptr : &it->second;
}

const SpecEntry* GlobalTables::spec_lookup(const AbstractAtom& a) const {
  auto it = st_.find(canonical_key(a));
  return it == st_.end() ? nullptr : &it->second;
}

void GlobalTables::gen_insert(const AbstractAtom& key,
                              const AbstractAtom& value) {
  if (!abstract_atom_leq(key, value))
    throw internal_error("generalization table: key not covered by value");
  gt_[canonical_key(key)] = GenEntry{key, value};
}

const SpecEntry& GlobalTables::spec_insert(const AbstractAtom& key,
                                           Atom renamed) {
  std::string k = canonical_key(key);
  auto [it, fresh] = st_.emplace(
      k, SpecEntry{key, std::move(renamed), static_cast<int>(st_order_.size())});
  if (!fresh) throw internal_error("specialization table: duplicate key");
  st_order_.push_back(k);
  pred_owner_[it->second.renamed.pred] = k;
  return it->second;
}

Atom GlobalTables::new_filter(const Atom& a_prime) {
  Atom out;
  out.pred = "sp_" + a_prime.pred + "_" + std::to_string(next_name_++);
  if (is_entry_pred(a_prime.pred)) {
    out.args = a_prime.args;
    return out;
  }
  for (VarId v : vars_of(a_prime)) out.args.push_back(Term::var(v));
  return out;
}

Atom ren(const Atom& a, const Atom& b, const Atom& b_prime) {
  // a is an instance of b, so the unifier binds only b's variables;
  // one-way matching keeps a's variables intact in the result
  auto theta = match(b, a);
  if (!theta)
    throw internal_error("ren: " + to_string(a) + " is not an instance of " +
                         to_string(b));
  return (*theta)(b_prime);
}

// --- generalization -----------------------------------------------------------

namespace {

// Base form: p(V1,...,Vn) over fresh variables. Everything tied to term
// structure is forgotten, groundness included, so one table key serves
// all call patterns of a predicate that agree on freeness. Freeness of
// plain variable arguments is the one thing kept: it cannot be encoded
// in the atom and the unfolder needs it for abstract execution.
AbstractAtom base_form(const AbstractAtom& a, VarGen& gen) {
  AbstractAtom out;
  out.atom.pred = a.atom.pred;
  std::vector<VarId> fresh;
  std::set<VarId> fr;
  for (const Term& t : a.atom.args) {
    VarId v = gen.fresh();
    fresh.push_back(v);
    out.atom.args.push_back(Term::var(v));
    if (t.is_var() && a.cp.is_free(t.var_id())) fr.insert(v);
  }
  if (a.cp.domain() == DomainKind::Pd) {
    out.cp = AbsSubst::top(DomainKind::Pd, fresh);
    return out;
  }
  size_t n = fresh.size();
  std::set<std::set<VarId>> sh;
  if (n > 20) throw internal_error("base form: too many arguments");
  for (size_t mask = 1; mask < (size_t{1} << n); ++mask) {
    std::set<VarId> g;
    for (size_t i = 0; i < n; ++i)
      if (mask & (size_t{1} << i)) g.insert(fresh[i]);
    sh.insert(std::move(g));
  }
  out.cp = AbsSubst::shfr(fresh, std::move(sh), std::move(fr));
  return out;
}

// Description for msg(A, B) variables: lub of both descriptions pushed
// through the instance substitutions.
AbsSubst msg_description(const AbstractAtom& a, const AbstractAtom& b,
                         const Atom& m) {
  Clause c;
  c.head = m;
  AbsSubst ta = atranslate(a, c);
  AbsSubst tb = atranslate(b, c);
  return alub(ta, tb);
}

}  // namespace

AbstractAtom ageneralize(const GlobalTables& tables, const AbstractAtom& a,
                         GeneralizeStrategy strategy, VarGen& gen) {
  switch (strategy) {
    case GeneralizeStrategy::Id: {
      const SpecEntry* hit = tables.spec_lookup(a);
      return hit ? hit->key : a;
    }
    case GeneralizeStrategy::BaseForm: {
      AbstractAtom bf = base_form(a, gen);
      const SpecEntry* hit = tables.spec_lookup(bf);
      return hit ? hit->key : bf;
    }
    case GeneralizeStrategy::HomEmbMsg: {
      AbstractAtom cur = a;
      for (int rounds = 0; rounds < 64; ++rounds) {
        const SpecEntry* hit = tables.spec_lookup(cur);
        if (hit) return hit->key;
        const SpecEntry* embedded = nullptr;
        for (const auto& k : tables.spec_order()) {
          const SpecEntry& e = tables.spec_table().at(k);
          if (e.key.atom.pred != cur.atom.pred ||
              e.key.atom.arity() != cur.atom.arity())
            continue;
          if (strictly_embeds(e.key.atom, cur.atom)) {
            embedded = &e;
            break;
          }
        }
        if (!embedded) return cur;
        // carry the stored key over to a renamed-apart copy
        AbstractAtom key_ra;
        key_ra.atom = rename_apart(embedded->key.atom, gen);
        Clause transfer;
        transfer.head = key_ra.atom;
        key_ra.cp = atranslate(embedded->key, transfer);
        auto m = msg(cur.atom, key_ra.atom, gen);
        if (!m) return cur;
        AbstractAtom next;
        next.atom = *m;
        next.cp = msg_description(cur, key_ra, *m);
        if (canonical_key(next) == canonical_key(cur)) return cur;  // stable
        cur = std::move(next);
      }
      throw internal_error("ageneralize: msg iteration failed to stabilize");
    }
  }
  return a;
}

// --- specialized definitions -------------------------------------------------------

std::pair<AbstractAtom, Atom> specialized_definition(
    Program& p, const AbstractAtom& a, GeneralizeStrategy strategy,
    const ExecTable& xt, const UnfoldConfig& ucfg, GlobalTables& tables,
    const TraceFn& trace) {
  AbstractAtom a_prime = ageneralize(tables, a, strategy, p.vars());
  tables.gen_insert(a, a_prime);
  if (const SpecEntry* hit = tables.spec_lookup(a_prime))
    return {hit->key, hit->renamed};

  Unfolder unfolder(p, xt, ucfg, trace);
  std::vector<Resultant> def = unfolder.aunfold(a_prime);
  Atom a_second = tables.new_filter(a_prime.atom);
  const SpecEntry& entry = tables.spec_insert(a_prime, a_second);
  for (const Resultant& r : def) {
    Atom renamed_head = ren(r.head, a_prime.atom, a_second);
    p.add_clause(std::move(renamed_head), r.body);  // bodies stay original
  }
  return {entry.key, entry.renamed};
}

}  // namespace lps
