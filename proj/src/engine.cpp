#include "lps/engine.hpp"

#include <algorithm>

namespace lps {

std::string to_string(EngineKind e) {
  return e == EngineKind::Analyze ? "analyze" : "apd";
}

const OrNode* AnalysisResult::node_for(const AbstractAtom& a) const {
  auto it = nodes.find(canonical_key(a));
  return it == nodes.end() ? nullptr : &it->second;
}

namespace {

class Engine {
 public:
  Engine(const Program& p, const std::vector<EntryDecl>& entry_decls,
         const ExecTable& xt, const EngineConfig& cfg, EngineKind kind)
      : xt_(xt), cfg_(cfg), kind_(kind) {
    res_.program = p;
    res_.original_clause_count = static_cast<int>(p.size());
    res_.domain = cfg.domain;
    res_.engine = kind;
    std::set<std::string> entry_preds;
    for (const EntryDecl& e : entry_decls) entry_preds.insert(e.atom.pred);
    res_.tables = GlobalTables(std::move(entry_preds));
    for (const EntryDecl& e : entry_decls)
      res_.entries.push_back(entry_to_abstract_atom(e, cfg.domain));
  }

  AnalysisResult run() {
    for (size_t j = 0; j < res_.entries.size(); ++j) {
      const AbstractAtom& a = res_.entries[j];
      if (kind_ == EngineKind::Apd) {
        apd_call_pattern(a);
        continue;
      }
      DependencyEntry parent;
      parent.node = canonical_key(a);
      parent.k = static_cast<int>(j) + 1;
      parent.entry = true;
      parent.cp1 = a.cp;
      process_call_pattern(a, parent);
    }
    return std::move(res_);
  }

 private:
  VarGen& vars() { return res_.program.vars(); }

  AbsSubst process_call_pattern(const AbstractAtom& a,
                                const DependencyEntry& parent) {
    std::vector<AbstractAtom> keys;
    keys.reserve(res_.node_order.size());
    for (const auto& kk : res_.node_order)
      keys.push_back(res_.nodes.at(kk).pattern);
    AbstractAtom widened{a.atom, widen_call(keys, a)};
    std::string key = canonical_key(widened);

    auto it = res_.nodes.find(key);
    if (it == res_.nodes.end()) {
      OrNode node;
      node.pattern = canonicalize(widened, vars());
      node.answer = AbsSubst::bottom(cfg_.domain);
      node.order = static_cast<int>(res_.node_order.size());
      it = res_.nodes.emplace(key, std::move(node)).first;
      res_.node_order.push_back(key);

      OrNode& n = it->second;
      auto [a_prime, a_second] = specialized_definition(
          res_.program, n.pattern, cfg_.generalize, xt_, cfg_.unfold,
          res_.tables, cfg_.trace);
      n.renamed = ren(n.pattern.atom, a_prime.atom, a_second);

      Atom renamed = n.renamed;
      AbsSubst cp_c = n.pattern.cp;
      std::vector<int> ks = res_.program.clauses_for(pred_key(renamed));
      for (int k : ks) {
        if (!mgu(res_.program.clause(k).head, renamed)) continue;
        AbstractAtom head_pattern{renamed, cp_c};
        AbsSubst cpk = atranslate(head_pattern, res_.program.clause(k));
        process_clause(key, k, 1, cpk);
      }
      it = res_.nodes.find(key);
    }
    // record the arc (dedup keeps the table readable and idempotent)
    bool seen = false;
    for (const DependencyEntry& d : it->second.deps)
      if (d.node == parent.node && d.k == parent.k && d.i == parent.i &&
          d.entry == parent.entry) {
        seen = true;
        break;
      }
    if (!seen) it->second.deps.push_back(parent);
    // the stored answer ranges over the canonical node atom; hand it
    // back in the caller's variable space
    Clause back;
    back.head = a.atom;
    return atranslate({it->second.pattern.atom, it->second.answer}, back);
  }

  // Success propagation along the body suffix of clause k starting at i.
  void process_clause(const std::string& node_key, int k, int i,
                      const AbsSubst& cp1) {
    if (cp1.is_bottom()) return;
    if (++res_.stats.clause_visits > cfg_.update_fuse)
      throw internal_error("engine: update fuse tripped");

    // copy: the clause vector may reallocate while literals are processed
    int len = static_cast<int>(res_.program.clause(k).body.size());
    if (i > len) {
      finalize_clause(node_key, k, cp1);
      return;
    }
    Atom lit = res_.program.clause(k).body[static_cast<size_t>(i - 1)];
    if (xt_.is_external(pred_key(lit))) {
      // tests and control bind nothing: success keeps the call state,
      // definite failure kills the suffix
      PredKey pk = pred_key(lit);
      if (pk == PredKey{"false", 0} || pk == PredKey{"fail", 0}) return;
      process_clause(node_key, k, i + 1, cp1);
      return;
    }
    AbsSubst cp2 = arestrict(cp1, lit);
    AbstractAtom pattern{lit, cp2};
    res_.literal_resolution[{k, i}] = canonical_key(pattern);
    if (kind_ == EngineKind::Apd) {
      apd_call_pattern(pattern);
      process_clause(node_key, k, i + 1, cp1);  // same CP to the right
      return;
    }
    DependencyEntry dep;
    dep.node = node_key;
    dep.k = k;
    dep.i = i;
    dep.cp1 = cp1;
    AbsSubst ap0 = process_call_pattern(pattern, dep);
    AbsSubst cp3 = extend_success(ap0, cp1);
    process_clause(node_key, k, i + 1, cp3);
  }

  void finalize_clause(const std::string& node_key, int k,
                       const AbsSubst& cp3) {
    if (kind_ == EngineKind::Apd) return;
    OrNode& n = res_.nodes.at(node_key);
    Clause back;
    back.head = n.renamed;
    AbstractAtom exit{res_.program.clause(k).head, cp3};
    AbsSubst ap1 = atranslate(exit, back);
    AbsSubst ap2 = n.answer;
    AbsSubst ap3 = alub(ap1, ap2);
    if (ap3 == ap2) return;
    if (!leq(ap2, ap3))
      throw internal_error("answer table: non-monotone update");
    n.answer = ap3;
    ++res_.stats.answer_changes;
    std::vector<DependencyEntry> deps = n.deps;  // snapshot
    process_update(deps);
  }

  void process_update(const std::vector<DependencyEntry>& deps) {
    for (const DependencyEntry& d : deps) {
      if (d.entry) continue;
      ++res_.stats.updates;
      remove_previous_deps(d.node, d.k, d.i);
      process_clause(d.node, d.k, d.i, d.cp1);
    }
  }

  void remove_previous_deps(const std::string& node_key, int k, int i) {
    for (auto& [key, node] : res_.nodes) {
      auto& ds = node.deps;
      ds.erase(std::remove_if(ds.begin(), ds.end(),
                              [&](const DependencyEntry& d) {
                                return !d.entry && d.node == node_key &&
                                       d.k == k && d.i >= i;
                              }),
               ds.end());
    }
  }

  // Call propagation only: memoized on the generalization table,
  // no answers kept.
  void apd_call_pattern(const AbstractAtom& a) {
    std::string key = canonical_key(a);
    if (res_.nodes.count(key)) return;
    OrNode node;
    node.pattern = canonicalize(a, vars());
    node.answer = AbsSubst::bottom(cfg_.domain);
    node.order = static_cast<int>(res_.node_order.size());
    res_.nodes.emplace(key, std::move(node));
    res_.node_order.push_back(key);

    OrNode& n = res_.nodes.at(key);
    auto [a_prime, a_second] = specialized_definition(
        res_.program, n.pattern, cfg_.generalize, xt_, cfg_.unfold,
        res_.tables, cfg_.trace);
    n.renamed = ren(n.pattern.atom, a_prime.atom, a_second);

    const GenEntry* ge = res_.tables.gen_lookup(n.pattern);
    if (!ge) throw internal_error("apd: missing generalization entry");
    AbstractAtom gen_pattern{a_second, ge->value.cp};

    for (int k : res_.program.clauses_for(pred_key(a_second))) {
      auto theta = mgu(res_.program.clause(k).head, a_second);
      if (!theta) continue;
      AbsSubst cpk = atranslate(gen_pattern, res_.program.clause(k));
      process_clause(key, k, 1, cpk);
    }
  }

  const ExecTable& xt_;
  const EngineConfig& cfg_;
  EngineKind kind_;
  AnalysisResult res_;
};

}  // namespace

AnalysisResult analyze(const Program& p, const std::vector<EntryDecl>& entries,
                       const ExecTable& xt, const EngineConfig& cfg) {
  Engine e(p, entries, xt, cfg, EngineKind::Analyze);
  return e.run();
}

AnalysisResult apd(const Program& p, const std::vector<EntryDecl>& entries,
                   const ExecTable& xt, const EngineConfig& cfg) {
  Engine e(p, entries, xt, cfg, EngineKind::Apd);
  return e.run();
}

bool verify_fixpoint(const AnalysisResult& r, const ExecTable& xt,
                     std::string* why) {
  if (r.engine != EngineKind::Analyze) return true;
  for (const auto& key : r.node_order) {
    const OrNode& n = r.nodes.at(key);
    for (int k : r.program.clauses_for(pred_key(n.renamed))) {
      const Clause& clause = r.program.clause(k);
      if (!mgu(clause.head, n.renamed)) continue;
      AbsSubst cp = atranslate({n.renamed, n.pattern.cp}, clause);
      bool dead = false;
      for (const Atom& lit : clause.body) {
        if (cp.is_bottom()) {
          dead = true;
          break;
        }
        PredKey pk = pred_key(lit);
        if (xt.is_external(pk)) {
          if (pk == PredKey{"false", 0} || pk == PredKey{"fail", 0}) {
            dead = true;
            break;
          }
          continue;
        }
        AbsSubst cp2 = arestrict(cp, lit);
        const OrNode* callee = r.node_for({lit, cp2});
        if (!callee) {
          if (why)
            *why = "literal " + to_string(lit) + " in clause " +
                   std::to_string(k) + " resolves to no node";
          return false;
        }
        Clause back;
        back.head = lit;
        AbsSubst ap0 =
            atranslate({callee->pattern.atom, callee->answer}, back);
        cp = extend_success(ap0, cp);
      }
      if (dead || cp.is_bottom()) continue;
      Clause exit;
      exit.head = n.renamed;
      AbsSubst ap1 = atranslate({clause.head, cp}, exit);
      if (!leq(ap1, n.answer)) {
        if (why)
          *why = "clause " + std::to_string(k) +
                 " still grows the answer of " + to_string(n.pattern.atom);
        return false;
      }
    }
  }
  return true;
}

}  // namespace lps
