#include "lps/term.hpp"

#include <algorithm>
#include <sstream>

namespace lps {

Term Term::var(VarId id) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::Var;
  n->var = id;
  return Term(std::move(n));
}

Term Term::constant(std::string symbol) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::Const;
  n->sym = std::move(symbol);
  return Term(std::move(n));
}

Term Term::compound(std::string functor, std::vector<Term> args) {
  if (args.empty()) return constant(std::move(functor));
  auto n = std::make_shared<Node>();
  n->kind = TermKind::Compound;
  n->sym = std::move(functor);
  n->args = std::move(args);
  return Term(std::move(n));
}

bool Term::operator==(const Term& o) const {
  if (node_ == o.node_) return true;
  if (node_->kind != o.node_->kind) return false;
  switch (node_->kind) {
    case TermKind::Var:
      return node_->var == o.node_->var;
    case TermKind::Const:
      return node_->sym == o.node_->sym;
    case TermKind::Compound:
      if (node_->sym != o.node_->sym ||
          node_->args.size() != o.node_->args.size())
        return false;
      for (size_t i = 0; i < node_->args.size(); ++i)
        if (!(node_->args[i] == o.node_->args[i])) return false;
      return true;
  }
  return false;
}

bool Atom::operator==(const Atom& o) const {
  if (pred != o.pred || args.size() != o.args.size()) return false;
  for (size_t i = 0; i < args.size(); ++i)
    if (!(args[i] == o.args[i])) return false;
  return true;
}

// --- Program -----------------------------------------------------------

int Program::add_clause(Atom head, std::vector<Atom> body) {
  Clause c;
  c.number = static_cast<int>(clauses_.size()) + 1;
  c.head = std::move(head);
  c.body = std::move(body);
  index_[pred_key(c.head)].push_back(c.number);
  clauses_.push_back(std::move(c));
  return clauses_.back().number;
}

const Clause& Program::clause(int k) const {
  if (k < 1 || k > static_cast<int>(clauses_.size()))
    throw internal_error("program: unknown rule number " + std::to_string(k));
  return clauses_[static_cast<size_t>(k - 1)];
}

const std::vector<int>& Program::clauses_for(const PredKey& p) const {
  static const std::vector<int> none;
  auto it = index_.find(p);
  return it == index_.end() ? none : it->second;
}

std::vector<Atom> Program::get_body(int k, int i) const {
  const Clause& c = clause(k);
  int len = static_cast<int>(c.body.size());
  if (i < 1 || i > len + 1)
    throw internal_error("get_body: position (" + std::to_string(k) + "," +
                         std::to_string(i) + ") out of range");
  return std::vector<Atom>(c.body.begin() + (i - 1), c.body.end());
}

// --- Substitution ------------------------------------------------------

const Term* Substitution::lookup(VarId v) const {
  auto it = map_.find(v);
  return it == map_.end() ? nullptr : &it->second;
}

Term Substitution::operator()(const Term& t) const {
  if (map_.empty()) return t;
  switch (t.kind()) {
    case TermKind::Var: {
      const Term* b = lookup(t.var_id());
      return b ? *b : t;
    }
    case TermKind::Const:
      return t;
    case TermKind::Compound: {
      std::vector<Term> args;
      args.reserve(t.arity());
      bool changed = false;
      for (const Term& a : t.args()) {
        args.push_back((*this)(a));
        if (!(args.back() == a)) changed = true;
      }
      if (!changed) return t;
      return Term::compound(t.symbol(), std::move(args));
    }
  }
  return t;
}

Atom Substitution::operator()(const Atom& a) const {
  Atom out;
  out.pred = a.pred;
  out.args.reserve(a.args.size());
  for (const Term& t : a.args) out.args.push_back((*this)(t));
  return out;
}

std::vector<Atom> Substitution::operator()(const std::vector<Atom>& g) const {
  std::vector<Atom> out;
  out.reserve(g.size());
  for (const Atom& a : g) out.push_back((*this)(a));
  return out;
}

Clause Substitution::operator()(const Clause& c) const {
  Clause out;
  out.number = c.number;
  out.head = (*this)(c.head);
  out.body = (*this)(c.body);
  return out;
}

void Substitution::compose(const Substitution& other) {
  if (other.empty()) return;
  for (auto& [v, t] : map_) t = other(t);
  for (const auto& [v, t] : other.map_)
    if (!map_.count(v)) map_[v] = t;
}

// --- variables ----------------------------------------------------------

void collect_vars(const Term& t, std::vector<VarId>& out) {
  switch (t.kind()) {
    case TermKind::Var:
      out.push_back(t.var_id());
      break;
    case TermKind::Const:
      break;
    case TermKind::Compound:
      for (const Term& a : t.args()) collect_vars(a, out);
      break;
  }
}

void collect_vars(const Atom& a, std::vector<VarId>& out) {
  for (const Term& t : a.args) collect_vars(t, out);
}

static std::vector<VarId> dedup_keep_order(std::vector<VarId> v) {
  std::vector<VarId> out;
  std::set<VarId> seen;
  for (VarId x : v)
    if (seen.insert(x).second) out.push_back(x);
  return out;
}

std::vector<VarId> vars_of(const Term& t) {
  std::vector<VarId> v;
  collect_vars(t, v);
  return dedup_keep_order(std::move(v));
}

std::vector<VarId> vars_of(const Atom& a) {
  std::vector<VarId> v;
  collect_vars(a, v);
  return dedup_keep_order(std::move(v));
}

std::vector<VarId> vars_of(const std::vector<Atom>& goal) {
  std::vector<VarId> v;
  for (const Atom& a : goal) collect_vars(a, v);
  return dedup_keep_order(std::move(v));
}

std::vector<VarId> vars_of(const Clause& c) {
  std::vector<VarId> v;
  collect_vars(c.head, v);
  for (const Atom& a : c.body) collect_vars(a, v);
  return dedup_keep_order(std::move(v));
}

std::set<VarId> var_set(const Atom& a) {
  std::vector<VarId> v;
  collect_vars(a, v);
  return std::set<VarId>(v.begin(), v.end());
}

// --- unification ---------------------------------------------------------

namespace {

Term walk(const Term& t, const std::map<VarId, Term>& bind) {
  Term cur = t;
  while (cur.is_var()) {
    auto it = bind.find(cur.var_id());
    if (it == bind.end()) return cur;
    cur = it->second;
  }
  return cur;
}

bool occurs(VarId v, const Term& t, const std::map<VarId, Term>& bind) {
  Term w = walk(t, bind);
  if (w.is_var()) return w.var_id() == v;
  for (const Term& a : w.args())
    if (occurs(v, a, bind)) return true;
  return false;
}

bool unify_rec(const Term& a, const Term& b, std::map<VarId, Term>& bind) {
  Term x = walk(a, bind);
  Term y = walk(b, bind);
  if (x.is_var() && y.is_var() && x.var_id() == y.var_id()) return true;
  if (x.is_var()) {
    if (occurs(x.var_id(), y, bind)) return false;
    bind.emplace(x.var_id(), y);
    return true;
  }
  if (y.is_var()) {
    if (occurs(y.var_id(), x, bind)) return false;
    bind.emplace(y.var_id(), x);
    return true;
  }
  if (x.kind() != y.kind() || x.symbol() != y.symbol() ||
      x.arity() != y.arity())
    return false;
  for (size_t i = 0; i < x.arity(); ++i)
    if (!unify_rec(x.args()[i], y.args()[i], bind)) return false;
  return true;
}

Term resolve(const Term& t, const std::map<VarId, Term>& bind) {
  Term w = walk(t, bind);
  if (w.is_var() || w.is_const()) return w;
  std::vector<Term> args;
  args.reserve(w.arity());
  for (const Term& a : w.args()) args.push_back(resolve(a, bind));
  return Term::compound(w.symbol(), std::move(args));
}

}  // namespace

std::optional<Substitution> mgu(const Term& t1, const Term& t2) {
  std::map<VarId, Term> bind;
  if (!unify_rec(t1, t2, bind)) return std::nullopt;
  Substitution out;
  for (const auto& [v, t] : bind) out.bind(v, resolve(t, bind));
  return out;
}

std::optional<Substitution> mgu(const Atom& a1, const Atom& a2) {
  if (a1.pred != a2.pred || a1.arity() != a2.arity()) return std::nullopt;
  std::map<VarId, Term> bind;
  for (size_t i = 0; i < a1.args.size(); ++i)
    if (!unify_rec(a1.args[i], a2.args[i], bind)) return std::nullopt;
  Substitution out;
  for (const auto& [v, t] : bind) out.bind(v, resolve(t, bind));
  return out;
}

namespace {
bool match_rec(const Term& pat, const Term& t, std::map<VarId, Term>& bind) {
  if (pat.is_var()) {
    auto it = bind.find(pat.var_id());
    if (it != bind.end()) return it->second == t;
    bind.emplace(pat.var_id(), t);
    return true;
  }
  if (t.is_var() || pat.kind() != t.kind() || pat.symbol() != t.symbol() ||
      pat.arity() != t.arity())
    return false;
  for (size_t i = 0; i < pat.arity(); ++i)
    if (!match_rec(pat.args()[i], t.args()[i], bind)) return false;
  return true;
}
}  // namespace

std::optional<Substitution> match(const Atom& general, const Atom& instance) {
  if (general.pred != instance.pred || general.arity() != instance.arity())
    return std::nullopt;
  std::map<VarId, Term> bind;
  for (size_t i = 0; i < general.args.size(); ++i)
    if (!match_rec(general.args[i], instance.args[i], bind))
      return std::nullopt;
  Substitution out;
  for (const auto& [v, t] : bind) out.bind(v, t);
  return out;
}

bool is_ground(const Term& t) {
  switch (t.kind()) {
    case TermKind::Var:
      return false;
    case TermKind::Const:
      return true;
    case TermKind::Compound:
      for (const Term& a : t.args())
        if (!is_ground(a)) return false;
      return true;
  }
  return false;
}

bool is_ground(const Atom& a) {
  for (const Term& t : a.args)
    if (!is_ground(t)) return false;
  return true;
}

// --- renaming -------------------------------------------------------------

Clause rename_apart(const Clause& c, VarGen& gen) {
  Substitution s;
  for (VarId v : vars_of(c)) s.bind(v, Term::var(gen.fresh()));
  return s(c);
}

Atom rename_apart(const Atom& a, VarGen& gen) {
  Substitution s;
  for (VarId v : vars_of(a)) s.bind(v, Term::var(gen.fresh()));
  return s(a);
}

Atom canonical_atom(const Atom& a) {
  Substitution s;
  int next = 0;
  for (VarId v : vars_of(a)) s.bind(v, Term::var(next++));
  return s(a);
}

bool variant(const Atom& a1, const Atom& a2) {
  return canonical_atom(a1) == canonical_atom(a2);
}

bool variant(const Term& t1, const Term& t2) {
  Atom w1{"$t", {t1}}, w2{"$t", {t2}};
  return variant(w1, w2);
}

// --- msg --------------------------------------------------------------------

namespace {
struct MsgCtx {
  VarGen* gen;
  // Consistent replacement: the same (t1, t2) mismatch maps to one
  // variable, so msg(f(a,a), f(b,b)) = f(X,X).
  std::vector<std::pair<std::pair<Term, Term>, Term>> cache;

  Term var_for(const Term& a, const Term& b) {
    for (const auto& [k, v] : cache)
      if (k.first == a && k.second == b) return v;
    Term v = Term::var(gen->fresh());
    cache.push_back({{a, b}, v});
    return v;
  }
};

Term msg_rec(const Term& a, const Term& b, MsgCtx& ctx) {
  if (a == b) return a;
  if (!a.is_var() && !b.is_var() && a.kind() == b.kind() &&
      a.symbol() == b.symbol() && a.arity() == b.arity() && a.is_compound()) {
    std::vector<Term> args;
    args.reserve(a.arity());
    for (size_t i = 0; i < a.arity(); ++i)
      args.push_back(msg_rec(a.args()[i], b.args()[i], ctx));
    return Term::compound(a.symbol(), std::move(args));
  }
  return ctx.var_for(a, b);
}
}  // namespace

Term msg(const Term& t1, const Term& t2, VarGen& gen) {
  MsgCtx ctx{&gen, {}};
  return msg_rec(t1, t2, ctx);
}

std::optional<Atom> msg(const Atom& a1, const Atom& a2, VarGen& gen) {
  if (a1.pred != a2.pred || a1.arity() != a2.arity()) return std::nullopt;
  MsgCtx ctx{&gen, {}};
  Atom out;
  out.pred = a1.pred;
  out.args.reserve(a1.args.size());
  for (size_t i = 0; i < a1.args.size(); ++i)
    out.args.push_back(msg_rec(a1.args[i], a2.args[i], ctx));
  return out;
}

// --- homeomorphic embedding ---------------------------------------------------

bool homeomorphic_embeds(const Term& t_old, const Term& t_new) {
  if (t_old.is_var() && t_new.is_var()) return true;
  if (t_new.is_compound()) {
    for (const Term& s : t_new.args())  // diving
      if (homeomorphic_embeds(t_old, s)) return true;
  }
  if (t_old.kind() == t_new.kind() && !t_old.is_var() &&
      t_old.symbol() == t_new.symbol() && t_old.arity() == t_new.arity()) {
    for (size_t i = 0; i < t_old.arity(); ++i)  // coupling
      if (!homeomorphic_embeds(t_old.args()[i], t_new.args()[i])) return false;
    return true;
  }
  return false;
}

bool homeomorphic_embeds(const Atom& a_old, const Atom& a_new) {
  if (a_old.pred != a_new.pred || a_old.arity() != a_new.arity()) return false;
  for (size_t i = 0; i < a_old.args.size(); ++i)
    if (!homeomorphic_embeds(a_old.args[i], a_new.args[i])) return false;
  return true;
}

bool strictly_embeds(const Atom& a_old, const Atom& a_new) {
  return homeomorphic_embeds(a_old, a_new) && !variant(a_old, a_new);
}

// --- printing ------------------------------------------------------------------

std::string VarNamer::name(VarId v) {
  auto it = names_.find(v);
  if (it != names_.end()) return it->second;
  size_t n = names_.size();
  std::string s(1, static_cast<char>('A' + n % 26));
  if (n >= 26) s += std::to_string(n / 26);
  names_.emplace(v, s);
  return s;
}

std::string to_string(const Term& t, VarNamer& nm) {
  switch (t.kind()) {
    case TermKind::Var:
      return nm.name(t.var_id());
    case TermKind::Const:
      return t.symbol();
    case TermKind::Compound: {
      std::string s = t.symbol() + "(";
      for (size_t i = 0; i < t.arity(); ++i) {
        if (i) s += ",";
        s += to_string(t.args()[i], nm);
      }
      return s + ")";
    }
  }
  return "?";
}

std::string to_string(const Atom& a, VarNamer& nm) {
  if (a.args.empty()) return a.pred;
  std::string s = a.pred + "(";
  for (size_t i = 0; i < a.args.size(); ++i) {
    if (i) s += ",";
    s += to_string(a.args[i], nm);
  }
  return s + ")";
}

std::string to_string(const Term& t) {
  VarNamer nm;
  return to_string(t, nm);
}

std::string to_string(const Atom& a) {
  VarNamer nm;
  return to_string(a, nm);
}

std::string to_string(const Clause& c) {
  VarNamer nm;
  std::string s = to_string(c.head, nm);
  if (!c.body.empty()) {
    s += " :- ";
    for (size_t i = 0; i < c.body.size(); ++i) {
      if (i) s += ", ";
      s += to_string(c.body[i], nm);
    }
  }
  return s + ".";
}

}  // namespace lps
