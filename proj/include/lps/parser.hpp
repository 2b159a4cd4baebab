#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lps/domain.hpp"
#include "lps/term.hpp"

// Prolog-subset frontend: clause parsing, entry declarations, the
// abstract executability table and pretty printing.

namespace lps {

struct parse_error : std::runtime_error {
  int line, column;
  parse_error(std::string msg, int l, int c)
      : std::runtime_error(std::move(msg) + " at " + std::to_string(l) + ":" +
                           std::to_string(c)),
        line(l),
        column(c) {}
};

enum class EntryProp { Ground, Var };

struct EntryDecl {
  Atom atom;
  std::vector<std::pair<EntryProp, VarId>> props;
};

// T : guard ~> T'. Guard properties refer to variables of the pattern;
// the replacement is true, false or an atom over the pattern variables.
struct ExecTableEntry {
  Atom pattern;
  std::vector<std::pair<EntryProp, VarId>> guard;
  enum class Replacement { True, False, Atom } kind;
  Atom replacement;  // meaningful when kind == Atom
};

class ExecTable {
 public:
  void add(ExecTableEntry e) { user_.push_back(std::move(e)); }
  void add_default(ExecTableEntry e) { defaults_.push_back(std::move(e)); }

  // User entries shadow defaults; within each block, first match wins.
  std::vector<const ExecTableEntry*> entries_for(const PredKey& p) const;
  bool is_external(const PredKey& p) const;

  const std::vector<ExecTableEntry>& user_entries() const { return user_; }
  const std::vector<ExecTableEntry>& default_entries() const {
    return defaults_;
  }

 private:
  std::vector<ExecTableEntry> user_;
  std::vector<ExecTableEntry> defaults_;
};

// ground/var entries over the four supported cases.
ExecTable default_exec_table();

struct SourceUnit {
  std::string module_name;
  std::vector<PredKey> exports;  // informative only
  Program program;
  std::vector<EntryDecl> entries;
  std::vector<std::string> warnings;
};

SourceUnit parse_program(const std::string& text);
SourceUnit parse_program_file(const std::string& path);

// Parses `Pattern : Guard ~> Replacement.` lines into user entries of `xt`.
void parse_exec_table_file(const std::string& path, ExecTable& xt,
                           VarGen& gen);

// Description for an initial query: ground-declared variables ground,
// var-declared free and unaliased, the rest unknown.
AbstractAtom entry_to_abstract_atom(const EntryDecl& e, DomainKind d);

std::string print_program(const Program& p);
std::string print_clause(const Clause& c);

}  // namespace lps
