#include "lps/domain.hpp"

#include <algorithm>
#include <sstream>

namespace lps {

std::string to_string(DomainKind d) {
  return d == DomainKind::Shfr ? "shfr" : "pd";
}

bool downwards_closed(DomainKind d) { return d == DomainKind::Pd; }

bool AbsSubst::in_scope(VarId v) const {
  return std::binary_search(scope_.begin(), scope_.end(), v);
}

void AbsSubst::normalize() {
  if (dom_ != DomainKind::Shfr || bottom_) {
    sharing_.clear();
    free_.clear();
    return;
  }
  std::set<std::set<VarId>> sh;
  for (const auto& g : sharing_) {
    std::set<VarId> clipped;
    for (VarId v : g)
      if (in_scope(v)) clipped.insert(v);
    if (!clipped.empty()) sh.insert(std::move(clipped));
  }
  sharing_ = std::move(sh);
  std::set<VarId> fr;
  for (VarId v : free_)
    if (in_scope(v) && !is_ground(v)) fr.insert(v);
  free_ = std::move(fr);
}

AbsSubst AbsSubst::bottom(DomainKind dom) {
  AbsSubst l;
  l.dom_ = dom;
  l.bottom_ = true;
  return l;
}

AbsSubst AbsSubst::top(DomainKind dom, const std::vector<VarId>& scope) {
  AbsSubst l;
  l.dom_ = dom;
  l.scope_ = scope;
  std::sort(l.scope_.begin(), l.scope_.end());
  l.scope_.erase(std::unique(l.scope_.begin(), l.scope_.end()),
                 l.scope_.end());
  if (dom == DomainKind::Shfr) {
    // all nonempty subsets of the scope may share; nothing is free
    size_t n = l.scope_.size();
    if (n > 20) throw internal_error("shfr top: scope too large");
    for (size_t mask = 1; mask < (size_t{1} << n); ++mask) {
      std::set<VarId> g;
      for (size_t i = 0; i < n; ++i)
        if (mask & (size_t{1} << i)) g.insert(l.scope_[i]);
      l.sharing_.insert(std::move(g));
    }
  }
  return l;
}

AbsSubst AbsSubst::shfr(const std::vector<VarId>& scope,
                        std::set<std::set<VarId>> sharing,
                        std::set<VarId> free) {
  AbsSubst l;
  l.dom_ = DomainKind::Shfr;
  l.scope_ = scope;
  std::sort(l.scope_.begin(), l.scope_.end());
  l.scope_.erase(std::unique(l.scope_.begin(), l.scope_.end()),
                 l.scope_.end());
  l.sharing_ = std::move(sharing);
  l.free_ = std::move(free);
  l.normalize();
  return l;
}

bool AbsSubst::is_ground(VarId v) const {
  if (bottom_) return true;
  if (dom_ == DomainKind::Pd) return false;
  for (const auto& g : sharing_)
    if (g.count(v)) return false;
  return true;
}

bool AbsSubst::is_free(VarId v) const {
  return !bottom_ && dom_ == DomainKind::Shfr && free_.count(v) > 0;
}

bool AbsSubst::operator==(const AbsSubst& o) const {
  if (dom_ != o.dom_ || bottom_ != o.bottom_) return false;
  if (bottom_) return true;
  return scope_ == o.scope_ && sharing_ == o.sharing_ && free_ == o.free_;
}

// --- restriction / extension -------------------------------------------

AbsSubst arestrict(const AbsSubst& l, const std::vector<VarId>& vars) {
  if (l.is_bottom()) return l;
  for (VarId v : vars)
    if (!l.in_scope(v))
      throw internal_error("arestrict: variable out of scope");
  AbsSubst out;
  out.dom_ = l.dom_;
  out.scope_ = vars;
  std::sort(out.scope_.begin(), out.scope_.end());
  out.scope_.erase(std::unique(out.scope_.begin(), out.scope_.end()),
                   out.scope_.end());
  if (l.dom_ == DomainKind::Shfr) {
    out.sharing_ = l.sharing_;
    out.free_ = l.free_;
    out.normalize();
  }
  return out;
}

AbsSubst arestrict(const AbsSubst& l, const Atom& a) {
  return arestrict(l, vars_of(a));
}

AbsSubst arestrict(const AbsSubst& l, const std::vector<Atom>& goal) {
  return arestrict(l, vars_of(goal));
}

AbsSubst aextend(const AbsSubst& l, const std::vector<VarId>& vars) {
  if (l.is_bottom()) return l;
  AbsSubst out = l;
  for (VarId v : vars) {
    if (out.in_scope(v)) continue;
    out.scope_.insert(
        std::upper_bound(out.scope_.begin(), out.scope_.end(), v), v);
    if (l.dom_ == DomainKind::Shfr) {
      out.sharing_.insert({v});
      out.free_.insert(v);
    }
  }
  return out;
}

// --- abstract unification -------------------------------------------------

namespace {

using Group = std::set<VarId>;
using GroupSet = std::set<Group>;

GroupSet relevant(const GroupSet& sh, const std::set<VarId>& vs) {
  GroupSet out;
  for (const auto& g : sh)
    for (VarId v : vs)
      if (g.count(v)) {
        out.insert(g);
        break;
      }
  return out;
}

// Closure under union of nonempty subsets.
GroupSet star(const GroupSet& s) {
  std::vector<Group> base(s.begin(), s.end());
  GroupSet out;
  size_t n = base.size();
  if (n > 16) {
    // grow iteratively instead of enumerating subsets
    out = s;
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<Group> cur(out.begin(), out.end());
      for (size_t i = 0; i < cur.size(); ++i)
        for (size_t j = i + 1; j < cur.size(); ++j) {
          Group u = cur[i];
          u.insert(cur[j].begin(), cur[j].end());
          if (out.insert(std::move(u)).second) changed = true;
        }
    }
    return out;
  }
  for (size_t mask = 1; mask < (size_t{1} << n); ++mask) {
    Group u;
    for (size_t i = 0; i < n; ++i)
      if (mask & (size_t{1} << i)) u.insert(base[i].begin(), base[i].end());
    out.insert(std::move(u));
  }
  return out;
}

GroupSet bin(const GroupSet& a, const GroupSet& b) {
  GroupSet out;
  for (const auto& x : a)
    for (const auto& y : b) {
      Group u = x;
      u.insert(y.begin(), y.end());
      out.insert(std::move(u));
    }
  return out;
}

// One solved-form binding x = t applied to a shfr value, in place.
void amgu_step(VarId x, const Term& t, std::set<std::set<VarId>>& sharing,
               std::set<VarId>& free) {
  std::set<VarId> xs{x};
  std::set<VarId> ts;
  for (VarId v : vars_of(t)) ts.insert(v);

  GroupSet rel_x = relevant(sharing, xs);
  GroupSet rel_t = relevant(sharing, ts);

  bool x_free = free.count(x) > 0;
  bool t_free_var = t.is_var() && free.count(t.var_id()) > 0;

  GroupSet next;
  for (const auto& g : sharing)
    if (!rel_x.count(g) && !rel_t.count(g)) next.insert(g);
  if (!rel_x.empty() && !rel_t.empty()) {
    // a free side binds a single cell, so no transitive aliasing can
    // arise through it and the star closure is not needed
    GroupSet merged = (x_free || t_free_var)
                          ? bin(rel_x, rel_t)
                          : bin(star(rel_x), star(rel_t));
    for (auto& g : merged) next.insert(g);
  }

  std::set<VarId> lose;
  auto touched_by = [&](const GroupSet& rel) {
    for (const auto& g : rel)
      for (VarId v : g)
        if (free.count(v)) lose.insert(v);
  };
  if (x_free && t_free_var) {
    // pure aliasing of two unbound variables binds nothing
  } else if (x_free) {
    touched_by(rel_x);
  } else if (t_free_var) {
    touched_by(rel_t);
  } else {
    touched_by(rel_x);
    touched_by(rel_t);
  }
  for (VarId v : lose) free.erase(v);

  sharing = std::move(next);
}

}  // namespace

AbsSubst aunif(const Term& t1, const Term& t2, const AbsSubst& l) {
  if (l.is_bottom()) return l;
  auto theta = mgu(t1, t2);
  if (!theta) return AbsSubst::bottom(l.domain());
  if (l.domain() == DomainKind::Pd) return l;

  AbsSubst out = l;
  for (const auto& [v, t] : theta->bindings()) {
    if (!out.in_scope(v))
      throw internal_error("aunif: binding variable out of scope");
    for (VarId w : vars_of(t))
      if (!out.in_scope(w))
        throw internal_error("aunif: bound term out of scope");
    amgu_step(v, t, out.sharing_, out.free_);
  }
  out.normalize();
  return out;
}

AbsSubst aunif(const Atom& a1, const Atom& a2, const AbsSubst& l) {
  if (l.is_bottom()) return l;
  if (a1.arity() != a2.arity()) return AbsSubst::bottom(l.domain());
  // unify the argument vectors; the predicate symbols may legitimately
  // differ (renamed heads keep the original argument shapes)
  Term t1 = Term::compound("$args", a1.args);
  Term t2 = Term::compound("$args", a2.args);
  if (a1.args.empty()) return l;
  return aunif(t1, t2, l);
}

// --- meet / join --------------------------------------------------------------

AbsSubst aconj(const AbsSubst& l1, const AbsSubst& l2) {
  if (l1.is_bottom()) return l1;
  if (l2.is_bottom()) return l2;
  if (l1.domain() != l2.domain() || l1.scope() != l2.scope())
    throw internal_error("aconj: scope or domain mismatch");
  if (l1.domain() == DomainKind::Pd) return l1;
  AbsSubst out = l1;
  GroupSet sh;
  for (const auto& g : l1.sharing_)
    if (l2.sharing_.count(g)) sh.insert(g);
  out.sharing_ = std::move(sh);
  std::set<VarId> fr = l1.free_;
  fr.insert(l2.free_.begin(), l2.free_.end());
  out.free_ = std::move(fr);
  out.normalize();  // drops free marks on now-ground vars
  return out;
}

AbsSubst alub(const AbsSubst& l1, const AbsSubst& l2) {
  if (l1.is_bottom()) return l2;
  if (l2.is_bottom()) return l1;
  if (l1.domain() != l2.domain() || l1.scope() != l2.scope())
    throw internal_error("alub: scope or domain mismatch");
  if (l1.domain() == DomainKind::Pd) return l1;
  AbsSubst out = l1;
  out.sharing_.insert(l2.sharing_.begin(), l2.sharing_.end());
  std::set<VarId> fr;
  for (VarId v : l1.free_)
    if (l2.free_.count(v)) fr.insert(v);
  out.free_ = std::move(fr);
  out.normalize();
  return out;
}

AbsSubst atranslate(const AbstractAtom& a, const Clause& c) {
  if (a.cp.is_bottom()) return a.cp;
  AbsSubst ext = aextend(a.cp, vars_of(c));
  AbsSubst u = aunif(a.atom, c.head, ext);
  if (u.is_bottom()) return AbsSubst::bottom(a.cp.domain());
  return arestrict(u, vars_of(c));
}

AbsSubst extend_success(const AbsSubst& answer, const AbsSubst& call) {
  if (answer.is_bottom() || call.is_bottom())
    return AbsSubst::bottom(call.domain());
  if (call.domain() == DomainKind::Pd) return call;
  for (VarId v : answer.scope())
    if (!call.in_scope(v))
      throw internal_error("extend_success: answer variable out of scope");
  const std::vector<VarId>& lit = answer.scope();
  auto in_lit = [&](VarId v) {
    return std::binary_search(lit.begin(), lit.end(), v);
  };

  GroupSet rel, irrel;
  for (const auto& g : call.sharing()) {
    bool touches = false;
    for (VarId v : g) touches = touches || in_lit(v);
    (touches ? rel : irrel).insert(g);
  }
  GroupSet sh = irrel;
  for (const auto& g : star(rel)) {
    Group proj;
    for (VarId v : g)
      if (in_lit(v)) proj.insert(v);
    if (answer.sharing().count(proj)) sh.insert(g);
  }

  std::set<VarId> fr = answer.free_vars();
  for (VarId v : call.free_vars()) {
    if (in_lit(v)) continue;
    bool safe = true;
    for (const auto& g : call.sharing()) {
      if (!g.count(v)) continue;
      for (VarId w : g)
        if (in_lit(w) && !answer.is_free(w)) safe = false;
    }
    if (safe) fr.insert(v);
  }
  return AbsSubst::shfr(call.scope(), std::move(sh), std::move(fr));
}

bool leq(const AbsSubst& l1, const AbsSubst& l2) {
  if (l1.is_bottom()) return true;
  if (l2.is_bottom()) return false;
  if (l1.domain() != l2.domain() || l1.scope() != l2.scope())
    throw internal_error("leq: scope or domain mismatch");
  if (l1.domain() == DomainKind::Pd) return true;
  for (const auto& g : l1.sharing_)
    if (!l2.sharing_.count(g)) return false;
  for (VarId v : l2.free_)
    if (!l1.free_.count(v)) return false;
  return true;
}

bool abstract_atom_leq(const AbstractAtom& a1, const AbstractAtom& a2) {
  auto theta = match(a2.atom, a1.atom);
  if (!theta) return false;
  if (a1.cp.domain() == DomainKind::Pd) return true;
  // express CP2 on a1's variables and compare pointwise
  Clause c;
  c.head = a1.atom;
  AbsSubst translated = atranslate({a2.atom, a2.cp}, c);
  AbsSubst cp1 = arestrict(a1.cp, vars_of(a1.atom));
  return leq(cp1, translated);
}

AbsSubst widen_call(const std::vector<AbstractAtom>&, const AbstractAtom& a) {
  return a.cp;
}

bool entails_ground(const AbsSubst& l, VarId v) {
  if (l.is_bottom()) return true;
  if (l.domain() == DomainKind::Pd) return false;
  return l.is_ground(v);
}

bool entails_free(const AbsSubst& l, VarId v) {
  if (l.is_bottom()) return true;
  if (l.domain() == DomainKind::Pd) return false;
  return l.is_free(v);
}

// --- concretization membership --------------------------------------------------

bool concrete_satisfies(const AbsSubst& l, const ConcreteState& s) {
  if (l.is_bottom()) return false;
  if (l.domain() == DomainKind::Pd) return true;
  // occurrence groups: for each runtime variable u, the set of scope
  // variables whose image contains u must be one of the sharing groups
  std::map<VarId, std::set<VarId>> occ;
  for (VarId v : l.scope()) {
    auto it = s.find(v);
    if (it == s.end()) throw internal_error("concrete state misses a variable");
    for (VarId u : vars_of(it->second)) occ[u].insert(v);
    if (l.is_ground(v) && !is_ground(it->second)) return false;
    if (l.is_free(v) && !it->second.is_var()) return false;
  }
  for (const auto& [u, group] : occ)
    if (!l.sharing().count(group)) return false;
  return true;
}

// --- canonicalization & rendering -----------------------------------------------

namespace {
std::map<VarId, int> first_occurrence_index(const Atom& a) {
  std::map<VarId, int> idx;
  int next = 0;
  for (VarId v : vars_of(a)) idx.emplace(v, next++);
  return idx;
}
}  // namespace

std::string canonical_key(const AbstractAtom& a) {
  auto idx = first_occurrence_index(a.atom);
  Substitution s;
  for (const auto& [v, i] : idx) s.bind(v, Term::var(i));
  std::ostringstream os;
  VarNamer nm;
  os << to_string(s(a.atom));
  os << "|" << to_string(a.cp.domain()) << "|";
  if (a.cp.is_bottom()) {
    os << "bottom";
    return os.str();
  }
  if (a.cp.domain() == DomainKind::Pd) {
    os << "top";
    return os.str();
  }
  std::set<std::set<int>> sh;
  for (const auto& g : a.cp.sharing()) {
    std::set<int> gg;
    for (VarId v : g) gg.insert(idx.at(v));
    sh.insert(std::move(gg));
  }
  os << "sh{";
  for (const auto& g : sh) {
    os << "{";
    for (int v : g) os << v << ",";
    os << "}";
  }
  os << "}fr{";
  std::set<int> fr;
  for (VarId v : a.cp.free_vars()) fr.insert(idx.at(v));
  for (int v : fr) os << v << ",";
  os << "}";
  return os.str();
}

AbstractAtom canonicalize(const AbstractAtom& a, VarGen& gen) {
  Substitution s;
  std::map<VarId, VarId> remap;
  for (VarId v : vars_of(a.atom)) {
    VarId f = gen.fresh();
    remap[v] = f;
    s.bind(v, Term::var(f));
  }
  AbstractAtom out;
  out.atom = s(a.atom);
  if (a.cp.is_bottom() || a.cp.domain() == DomainKind::Pd) {
    std::vector<VarId> scope;
    for (const auto& [o, f] : remap) scope.push_back(f);
    out.cp = a.cp.is_bottom() ? AbsSubst::bottom(a.cp.domain())
                              : AbsSubst::top(a.cp.domain(), scope);
    return out;
  }
  std::vector<VarId> scope;
  std::set<std::set<VarId>> sh;
  std::set<VarId> fr;
  for (const auto& [o, f] : remap) scope.push_back(f);
  for (const auto& g : a.cp.sharing()) {
    std::set<VarId> gg;
    for (VarId v : g) gg.insert(remap.at(v));
    sh.insert(std::move(gg));
  }
  for (VarId v : a.cp.free_vars()) fr.insert(remap.at(v));
  out.cp = AbsSubst::shfr(scope, std::move(sh), std::move(fr));
  return out;
}

std::string to_string(const AbsSubst& l, VarNamer& nm) {
  if (l.is_bottom()) return "bottom";
  if (l.domain() == DomainKind::Pd) return "top";
  std::string s = "{";
  bool first = true;
  for (VarId v : l.scope()) {
    if (!first) s += ",";
    first = false;
    s += nm.name(v);
    s += l.is_ground(v) ? "/G" : (l.is_free(v) ? "/V" : "/A");
  }
  return s + "}";
}

std::string to_string(const AbstractAtom& a, VarNamer& nm) {
  return to_string(a.atom, nm) + ":" + to_string(a.cp, nm);
}

std::string to_string(const AbstractAtom& a) {
  VarNamer nm;
  return to_string(a, nm);
}

}  // namespace lps
