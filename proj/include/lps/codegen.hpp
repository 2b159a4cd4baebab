#pragma once

#include <string>
#include <vector>

#include "lps/engine.hpp"

// Residual program emission: renames body literals through the
// generalization/specialization chain, drops unreachable clauses, maps
// entry points, and exports the tables and the analysis graph.

namespace lps {

struct ResidualProgram {
  Program program;
  // original entry atom -> renamed initial call
  std::vector<std::pair<Atom, Atom>> entry_map;
  std::vector<EntryDecl> entry_decls;  // regenerated, renamed entries
  std::vector<std::string> warnings;   // closedness violations etc.
};

ResidualProgram generate(const AnalysisResult& r,
                         const std::vector<EntryDecl>& entries);

// Residual text in input syntax, with module and entry declarations.
std::string render_residual(const ResidualProgram& rp);

// Fig-4 style analysis graph: OR-nodes annotated with call and answer
// patterns, one box per specialized clause, solid arcs for expansion,
// dashed arcs for reuse of an already-expanded node.
std::string export_dot(const AnalysisResult& r);

// {answers, deps, gen, spec} with stable ordering.
std::string dump_tables(const AnalysisResult& r);

}  // namespace lps
