#pragma once

#include <optional>
#include <string>

#include "lps/codegen.hpp"
#include "lps/engine.hpp"
#include "lps/interp.hpp"

// Run configurations, the named presets, and the end-to-end pipeline the
// command line drives.

namespace lps {

struct RunConfig {
  std::string input_path;
  DomainKind domain = DomainKind::Shfr;
  UnfoldStrategy unfold = UnfoldStrategy::HomEmb;
  GeneralizeStrategy generalize = GeneralizeStrategy::Id;
  std::string widen = "id";
  EngineKind engine = EngineKind::Analyze;
  std::optional<std::string> preset;

  std::string residual_path;  // -o
  std::string dot_path;
  std::string json_path;
  std::string exec_table_path;

  int check_samples = 0;  // 0 = no oracle check
  int check_depth = 400;
  unsigned long long seed = 1;
  bool trace = false;
  bool print_config = false;
};

// Expands cfg.preset into the parameter tuple; throws on unknown names.
void apply_preset(RunConfig& cfg);
std::string config_line(const RunConfig& cfg);

struct RunOutcome {
  int exit_code = 0;  // 0 ok, 1 parse, 2 internal, 3 oracle mismatch
  std::string summary;
  std::string residual_text;
  AnalysisResult analysis;
  ResidualProgram residual;
  std::vector<std::string> oracle_failures;
};

// exit codes: 1 parse error, 2 internal invariant violation, 3 oracle
// mismatch; messages go to `err`.
RunOutcome run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// The oracle comparison used by --check, exposed for the test suites:
// answer multisets of original vs. residual program, plus γ-membership
// of concrete successes in the computed answer pattern.
struct OracleReport {
  int queries = 0;
  int inconclusive = 0;  // depth bound hit on either side
  std::vector<std::string> mismatches;
  std::vector<std::string> soundness_violations;
};

OracleReport oracle_check(const Program& original,
                          const std::vector<EntryDecl>& entries,
                          const AnalysisResult& analysis,
                          const ResidualProgram& residual, int samples,
                          int depth, unsigned long long seed);

}  // namespace lps
