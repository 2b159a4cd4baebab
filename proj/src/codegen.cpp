#include "lps/codegen.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "lps/parser.hpp"

namespace lps {

namespace {

// Resolve a body literal to the specialized atom that replaces it.
// Prefers the exact key recorded during the run; falls back to an
// instance-covered table key (possible under apd when a clause suffix
// was never visited with a live description).
std::optional<Atom> resolve_literal(const AnalysisResult& r, int k, int i,
                                    const Atom& lit,
                                    std::vector<std::string>& warnings) {
  const GenEntry* ge = nullptr;
  auto lr = r.literal_resolution.find({k, i});
  if (lr != r.literal_resolution.end()) {
    auto git = r.tables.gen_table().find(lr->second);
    if (git != r.tables.gen_table().end()) ge = &git->second;
  }
  if (!ge) {
    for (const auto& [key, entry] : r.tables.gen_table()) {
      if (entry.key.atom.pred != lit.pred ||
          entry.key.atom.arity() != lit.arity())
        continue;
      if (match(entry.key.atom, lit)) {
        ge = &entry;
        break;
      }
    }
  }
  if (!ge) {
    warnings.push_back("closedness violation: literal " + to_string(lit) +
                       " at (" + std::to_string(k) + "," + std::to_string(i) +
                       ") is not covered by any specialized definition");
    return std::nullopt;
  }
  const SpecEntry* se = r.tables.spec_lookup(ge->value);
  if (!se)
    throw internal_error("codegen: generalization without specialization");
  return ren(lit, ge->value.atom, se->renamed);
}

}  // namespace

ResidualProgram generate(const AnalysisResult& r,
                         const std::vector<EntryDecl>& entries) {
  ResidualProgram out;

  // entry images
  std::set<std::string> seed_preds;
  for (const EntryDecl& e : entries) {
    AbstractAtom ea = entry_to_abstract_atom(e, r.domain);
    const GenEntry* ge = nullptr;
    auto git = r.tables.gen_table().find(canonical_key(ea));
    if (git != r.tables.gen_table().end()) ge = &git->second;
    if (!ge) {
      out.warnings.push_back("entry " + to_string(e.atom) +
                             " was never analyzed");
      continue;
    }
    const SpecEntry* se = r.tables.spec_lookup(ge->value);
    if (!se) throw internal_error("codegen: entry without specialization");
    Atom renamed_call = ren(e.atom, ge->value.atom, se->renamed);
    out.entry_map.push_back({e.atom, renamed_call});
    EntryDecl renamed_entry = e;
    renamed_entry.atom = renamed_call;
    out.entry_decls.push_back(std::move(renamed_entry));
    seed_preds.insert(renamed_call.pred);
  }

  // specialized clauses, in creation order
  struct Emit {
    int k;
    Atom head;
    std::vector<Atom> body;
  };
  std::vector<Emit> emitted;
  std::set<std::string> reachable = seed_preds;
  bool grew = true;
  std::map<std::string, std::vector<int>> sp_clauses;
  for (int k = r.original_clause_count + 1;
       k <= static_cast<int>(r.program.size()); ++k)
    sp_clauses[r.program.clause(k).head.pred].push_back(k);

  std::set<int> visited;
  while (grew) {
    grew = false;
    for (const auto& pred : std::vector<std::string>(reachable.begin(),
                                                     reachable.end())) {
      auto it = sp_clauses.find(pred);
      if (it == sp_clauses.end()) continue;
      for (int k : it->second) {
        if (visited.count(k)) continue;
        visited.insert(k);
        const Clause& c = r.program.clause(k);
        Emit e;
        e.k = k;
        e.head = c.head;
        bool ok = true;
        for (size_t j = 0; j < c.body.size(); ++j) {
          const Atom& lit = c.body[j];
          int pos = static_cast<int>(j) + 1;
          // a literal without a recorded resolution that has no clauses
          // is an external test/builtin and stays as written
          if (!r.literal_resolution.count({k, pos}) &&
              !r.program.defines(pred_key(lit))) {
            e.body.push_back(lit);
            continue;
          }
          auto resolved = resolve_literal(r, k, pos, lit, out.warnings);
          if (!resolved) {
            ok = false;
            break;
          }
          e.body.push_back(*resolved);
          std::string p2 = resolved->pred;
          if (!reachable.count(p2)) {
            reachable.insert(p2);
            grew = true;
          }
        }
        if (ok) {
          emitted.push_back(std::move(e));
          grew = true;
        }
      }
    }
  }
  std::sort(emitted.begin(), emitted.end(),
            [](const Emit& a, const Emit& b) { return a.k < b.k; });

  // collapse sp_<pred>_<n> to sp_<pred> when unambiguous
  std::map<std::string, std::string> base_of;
  std::map<std::string, int> base_count;
  for (const auto& [pred, key] : r.tables.owner_of_pred()) {
    std::string base = pred;
    auto pos = base.rfind('_');
    if (pos != std::string::npos) base = base.substr(0, pos);
    base_of[pred] = base;
    if (reachable.count(pred)) base_count[base]++;
  }
  auto display = [&](const std::string& pred) -> std::string {
    auto it = base_of.find(pred);
    if (it == base_of.end()) return pred;
    return base_count[it->second] == 1 ? it->second : pred;
  };
  auto rename_atom = [&](const Atom& a) {
    Atom out_a = a;
    out_a.pred = display(a.pred);
    return out_a;
  };

  for (const Emit& e : emitted) {
    std::vector<Atom> body;
    for (const Atom& b : e.body) body.push_back(rename_atom(b));
    out.program.add_clause(rename_atom(e.head), std::move(body));
  }
  for (auto& [orig, renamed] : out.entry_map) renamed = rename_atom(renamed);
  for (auto& e : out.entry_decls) e.atom = rename_atom(e.atom);

  if (out.program.size() == 0)
    out.warnings.push_back("residual program is empty");
  return out;
}

std::string render_residual(const ResidualProgram& rp) {
  std::ostringstream os;
  std::set<std::string> exported;
  os << ":- module(sp, [";
  bool first = true;
  for (const auto& [orig, renamed] : rp.entry_map) {
    std::string sig = renamed.pred + "/" + std::to_string(renamed.arity());
    if (!exported.insert(sig).second) continue;
    if (!first) os << ",";
    first = false;
    os << sig;
  }
  os << "], []).\n";
  for (const EntryDecl& e : rp.entry_decls) {
    VarNamer nm;
    os << ":- entry " << to_string(e.atom, nm);
    if (!e.props.empty()) {
      os << " : (";
      for (size_t i = 0; i < e.props.size(); ++i) {
        if (i) os << ",";
        os << (e.props[i].first == EntryProp::Ground ? "ground(" : "var(")
           << nm.name(e.props[i].second) << ")";
      }
      os << ")";
    }
    os << ".\n";
  }
  os << "\n" << print_program(rp.program);
  return os.str();
}

// --- graph export -----------------------------------------------------------

std::string export_dot(const AnalysisResult& r) {
  std::ostringstream os;
  os << "digraph analysis {\n  rankdir=TB;\n  node [fontname=\"monospace\"];\n";
  std::map<std::string, int> node_id;
  for (size_t i = 0; i < r.node_order.size(); ++i) {
    const OrNode& n = r.nodes.at(r.node_order[i]);
    node_id[r.node_order[i]] = static_cast<int>(i);
    VarNamer nm;
    std::string cp = to_string(n.pattern.cp, nm);
    std::string atom = to_string(n.pattern.atom, nm);
    std::string ap = to_string(n.answer, nm);
    os << "  or" << i << " [shape=ellipse,label=\"^" << cp << " " << atom
       << " ^" << ap << "\"];\n";
  }
  // one box per specialized clause, linked to the node it was built for
  for (int k = r.original_clause_count + 1;
       k <= static_cast<int>(r.program.size()); ++k) {
    const Clause& c = r.program.clause(k);
    VarNamer nm;
    os << "  and" << k << " [shape=box,style=dashed,label=\""
       << to_string(c.head, nm) << "\"];\n";
    // expansion arc from the OR-node whose renamed atom matches this pred
    for (size_t i = 0; i < r.node_order.size(); ++i) {
      const OrNode& n = r.nodes.at(r.node_order[i]);
      if (n.renamed.pred == c.head.pred) {
        os << "  or" << i << " -> and" << k << ";\n";
        break;
      }
    }
  }
  // literal arcs: first visit solid, later visits (shared) dashed
  std::set<std::string> expanded;
  for (const auto& key : r.node_order) {
    const OrNode& n = r.nodes.at(key);
    for (size_t d = 0; d < n.deps.size(); ++d) {
      const DependencyEntry& dep = n.deps[d];
      if (dep.entry) continue;
      bool shared = d > 0;
      os << "  and" << dep.k << " -> or" << node_id.at(key) << " [label=\"("
         << dep.k << "," << dep.i << ")\"";
      if (shared) os << ",style=dashed,constraint=false";
      os << "];\n";
    }
  }
  os << "}\n";
  return os.str();
}

// --- table dumps ---------------------------------------------------------------

std::string dump_tables(const AnalysisResult& r) {
  nlohmann::json j;
  j["answers"] = nlohmann::json::array();
  j["deps"] = nlohmann::json::array();
  j["gen"] = nlohmann::json::array();
  j["spec"] = nlohmann::json::array();

  auto render_subst = [](const AbsSubst& l, VarNamer& nm) -> nlohmann::json {
    if (l.is_bottom()) return "bottom";
    if (l.domain() == DomainKind::Pd) return "top";
    nlohmann::json out;
    out["scope"] = nlohmann::json::array();
    for (VarId v : l.scope()) out["scope"].push_back(nm.name(v));
    out["sharing"] = nlohmann::json::array();
    for (const auto& g : l.sharing()) {
      nlohmann::json gg = nlohmann::json::array();
      for (VarId v : g) gg.push_back(nm.name(v));
      out["sharing"].push_back(gg);
    }
    out["free"] = nlohmann::json::array();
    for (VarId v : l.free_vars()) out["free"].push_back(nm.name(v));
    return out;
  };

  for (const auto& key : r.node_order) {
    const OrNode& n = r.nodes.at(key);
    VarNamer nm;
    nlohmann::json a;
    a["atom"] = to_string(n.pattern.atom, nm);
    a["cp"] = render_subst(n.pattern.cp, nm);
    a["ap"] = render_subst(n.answer, nm);
    j["answers"].push_back(a);
    for (const DependencyEntry& d : n.deps) {
      nlohmann::json dj;
      dj["node"] = to_string(n.pattern.atom, nm);
      if (d.entry) {
        dj["parent"] = "entry";
      } else {
        const OrNode& from = r.nodes.at(d.node);
        VarNamer nm2;
        dj["parent"] = to_string(from.pattern.atom, nm2);
        VarNamer nm3;
        dj["head"] = to_string(r.program.clause(d.k).head, nm3);
        dj["head_cp"] = render_subst(d.cp1, nm3);
      }
      dj["k"] = d.k;
      dj["i"] = d.entry ? nlohmann::json("entry") : nlohmann::json(d.i);
      j["deps"].push_back(dj);
    }
  }
  for (const auto& [key, e] : r.tables.gen_table()) {
    VarNamer nm;
    nlohmann::json g;
    g["key_atom"] = to_string(e.key.atom, nm);
    g["key_cp"] = render_subst(e.key.cp, nm);
    VarNamer nm2;
    g["gen_atom"] = to_string(e.value.atom, nm2);
    g["gen_cp"] = render_subst(e.value.cp, nm2);
    j["gen"].push_back(g);
  }
  for (const auto& key : r.tables.spec_order()) {
    const SpecEntry& e = r.tables.spec_table().at(key);
    VarNamer nm;
    nlohmann::json s;
    s["atom"] = to_string(e.key.atom, nm);
    s["cp"] = render_subst(e.key.cp, nm);
    s["renamed"] = to_string(e.renamed, nm);
    j["spec"].push_back(s);
  }
  return j.dump(2) + "\n";
}

}  // namespace lps
