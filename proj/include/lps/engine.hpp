#pragma once

#include <map>
#include <string>
#include <vector>

#include "lps/global_control.hpp"

// The two drivers: abstract partial deduction (call propagation only)
// and abstract interpretation with specialized definitions (success
// propagation over an answer/dependency table fixpoint).

namespace lps {

enum class EngineKind { Analyze, Apd };

std::string to_string(EngineKind e);

// Backward dependency arc: the OR-node `node` depends on the keyed node
// through body literal (k, i); cp1 is the clause-scope description just
// before that literal. Entry markers record initial queries and are
// never reprocessed.
struct DependencyEntry {
  std::string node;  // canonical key of the dependent OR-node
  int k = 0;
  int i = 0;
  bool entry = false;
  AbsSubst cp1;
};

struct OrNode {
  AbstractAtom pattern;   // canonicalized call pattern (the AT key)
  Atom renamed;           // ren(A, {A'/A''}); head space of its clauses
  AbsSubst answer;        // grows monotonically
  std::vector<DependencyEntry> deps;  // insertion order kept
  int order = 0;
};

struct EngineStats {
  long clause_visits = 0;
  long updates = 0;        // dependency arcs reprocessed
  long answer_changes = 0;
};

struct AnalysisResult {
  Program program;  // original clauses plus specialized definitions
  int original_clause_count = 0;
  DomainKind domain = DomainKind::Shfr;
  EngineKind engine = EngineKind::Analyze;

  std::map<std::string, OrNode> nodes;  // answer + dependency tables
  std::vector<std::string> node_order;
  GlobalTables tables;

  // body literal (k, i) -> canonical key used at that position
  std::map<std::pair<int, int>, std::string> literal_resolution;

  std::vector<AbstractAtom> entries;  // as handed to the engine
  EngineStats stats;

  const OrNode* node_for(const AbstractAtom& a) const;
};

struct EngineConfig {
  DomainKind domain = DomainKind::Shfr;
  UnfoldConfig unfold;
  GeneralizeStrategy generalize = GeneralizeStrategy::Id;
  long update_fuse = 1000000;
  TraceFn trace;
};

// Global fixpoint with left-to-right success propagation.
AnalysisResult analyze(const Program& p, const std::vector<EntryDecl>& entries,
                       const ExecTable& xt, const EngineConfig& cfg);

// Abstract partial deduction: no success propagation; the
// atoms right of a literal are processed with the same call pattern.
AnalysisResult apd(const Program& p, const std::vector<EntryDecl>& entries,
                   const ExecTable& xt, const EngineConfig& cfg);

// Read-only fixpoint audit: recomputing every clause contribution from
// the stored answers must not grow any answer, and every live literal
// must resolve to an existing node. Test hook.
bool verify_fixpoint(const AnalysisResult& r, const ExecTable& xt,
                     std::string* why = nullptr);

}  // namespace lps
