#pragma once

#include <random>
#include <string>
#include <vector>

#include "lps/parser.hpp"
#include "lps/term.hpp"

// Depth-bounded leftmost SLD interpreter with the concrete semantics of
// the supported builtins (ground/1, var/1, true, fail, false). Test
// oracle only; the analyzers never call into it.

namespace lps {

struct InterpResult {
  // canonically rendered θ(query) per successful derivation, sorted
  std::vector<std::string> answers;
  bool depth_bound_hit = false;
};

InterpResult solve(const Program& p, const Atom& query, int depth_bound);

// Computed answers as substitutions over the query variables.
struct RawAnswers {
  std::vector<Substitution> answers;
  bool depth_bound_hit = false;
};
RawAnswers solve_raw(const Program& p, const Atom& query, int depth_bound);

// Function symbols occurring in the program's clauses.
struct Signature {
  std::vector<std::string> constants;
  std::vector<std::pair<std::string, size_t>> functors;
};
Signature program_signature(const Program& p);

Term random_ground_term(const Signature& sig, int max_depth,
                        std::mt19937_64& rng);

// Queries within the entry description: ground-declared variables get
// random ground terms, var-declared stay fresh, undeclared flip a coin.
std::vector<Atom> sample_queries(const EntryDecl& e, const Signature& sig,
                                 int count, int max_depth, VarGen& gen,
                                 std::mt19937_64& rng);

}  // namespace lps
