#include "lps/parser.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace lps {

// --- tokenizer ----------------------------------------------------------

namespace {

enum class Tok {
  AtomName,  // lowercase identifier or integer
  VarName,   // uppercase/underscore identifier
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Dot,
  Neck,       // :-
  Colon,      // :
  Tilde,      // ~>
  Slash,
  End
};

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : s_(text) {}

  Token next() {
    skip_ws();
    int l = line_, c = col_;
    if (pos_ >= s_.size()) return {Tok::End, "", l, c};
    char ch = s_[pos_];
    if (ch == '(') return take(Tok::LParen, 1, l, c);
    if (ch == ')') return take(Tok::RParen, 1, l, c);
    if (ch == '[') return take(Tok::LBracket, 1, l, c);
    if (ch == ']') return take(Tok::RBracket, 1, l, c);
    if (ch == ',') return take(Tok::Comma, 1, l, c);
    if (ch == '/') return take(Tok::Slash, 1, l, c);
    if (ch == '.') {
      // a dot ends a clause only when followed by layout or EOF
      if (pos_ + 1 >= s_.size() || std::isspace(s_[pos_ + 1]) ||
          s_[pos_ + 1] == '%')
        return take(Tok::Dot, 1, l, c);
      throw parse_error("unexpected '.'", l, c);
    }
    if (ch == ':') {
      if (pos_ + 1 < s_.size() && s_[pos_ + 1] == '-')
        return take(Tok::Neck, 2, l, c);
      return take(Tok::Colon, 1, l, c);
    }
    if (ch == '~') {
      if (pos_ + 1 < s_.size() && s_[pos_ + 1] == '>')
        return take(Tok::Tilde, 2, l, c);
      throw parse_error("expected '~>'", l, c);
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      size_t start = pos_;
      while (pos_ < s_.size() &&
             std::isdigit(static_cast<unsigned char>(s_[pos_])))
        advance();
      return {Tok::AtomName, s_.substr(start, pos_ - start), l, c};
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
              s_[pos_] == '_'))
        advance();
      std::string w = s_.substr(start, pos_ - start);
      bool var = std::isupper(static_cast<unsigned char>(w[0])) || w[0] == '_';
      return {var ? Tok::VarName : Tok::AtomName, w, l, c};
    }
    throw parse_error(std::string("unexpected character '") + ch + "'", l, c);
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size()) {
      char ch = s_[pos_];
      if (ch == '%') {
        while (pos_ < s_.size() && s_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        advance();
      } else {
        break;
      }
    }
  }
  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  Token take(Tok k, int len, int l, int c) {
    std::string t = s_.substr(pos_, static_cast<size_t>(len));
    for (int i = 0; i < len; ++i) advance();
    return {k, t, l, c};
  }

  const std::string& s_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

class Parser {
 public:
  Parser(const std::string& text, VarGen& gen) : lex_(text), gen_(gen) {
    shift();
  }

  void parse_unit(SourceUnit& u) {
    while (cur_.kind != Tok::End) {
      if (cur_.kind == Tok::Neck) {
        shift();
        parse_declaration(u);
      } else {
        clause_vars_.clear();
        Atom head = parse_atom();
        std::vector<Atom> body;
        if (cur_.kind == Tok::Neck) {
          shift();
          body = parse_conjunction();
        }
        expect(Tok::Dot, "'.'");
        u.program.add_clause(std::move(head), std::move(body));
      }
    }
    validate(u);
  }

  // `Pattern : Guard ~> Replacement.` entries, appended to `xt`.
  void parse_exec_entries(ExecTable& xt) {
    while (cur_.kind != Tok::End) {
      clause_vars_.clear();
      ExecTableEntry e;
      e.pattern = parse_atom();
      expect(Tok::Colon, "':'");
      for (auto& [prop, v] : parse_guard_props()) e.guard.push_back({prop, v});
      expect(Tok::Tilde, "'~>'");
      Atom r = parse_atom();
      if (r.pred == "true" && r.args.empty()) {
        e.kind = ExecTableEntry::Replacement::True;
      } else if (r.pred == "false" && r.args.empty()) {
        e.kind = ExecTableEntry::Replacement::False;
      } else {
        e.kind = ExecTableEntry::Replacement::Atom;
        e.replacement = r;
      }
      expect(Tok::Dot, "'.'");
      auto pat_vars = var_set(e.pattern);
      for (const auto& [prop, v] : e.guard)
        if (!pat_vars.count(v))
          throw parse_error("guard variable not in pattern", cur_.line,
                            cur_.col);
      if (e.kind == ExecTableEntry::Replacement::Atom)
        for (VarId v : vars_of(e.replacement))
          if (!pat_vars.count(v))
            throw parse_error("replacement variable not in pattern",
                              cur_.line, cur_.col);
      xt.add(std::move(e));
    }
  }

 private:
  void shift() { cur_ = lex_.next(); }

  void expect(Tok k, const char* what) {
    if (cur_.kind != k)
      throw parse_error(std::string("expected ") + what, cur_.line, cur_.col);
    shift();
  }

  Term var_term(const std::string& name) {
    if (name == "_") return Term::var(gen_.fresh());  // each `_` is fresh
    auto it = clause_vars_.find(name);
    if (it != clause_vars_.end()) return Term::var(it->second);
    VarId v = gen_.fresh();
    clause_vars_.emplace(name, v);
    return Term::var(v);
  }

  Term parse_term() {
    if (cur_.kind == Tok::VarName) {
      std::string n = cur_.text;
      shift();
      return var_term(n);
    }
    if (cur_.kind != Tok::AtomName)
      throw parse_error("expected term", cur_.line, cur_.col);
    std::string f = cur_.text;
    shift();
    if (cur_.kind != Tok::LParen) return Term::constant(f);
    shift();
    std::vector<Term> args;
    args.push_back(parse_term());
    while (cur_.kind == Tok::Comma) {
      shift();
      args.push_back(parse_term());
    }
    expect(Tok::RParen, "')'");
    return Term::compound(f, std::move(args));
  }

  Atom parse_atom() {
    if (cur_.kind != Tok::AtomName)
      throw parse_error("expected atom", cur_.line, cur_.col);
    Term t = parse_term();
    Atom a;
    if (t.is_const()) {
      a.pred = t.symbol();
    } else {
      a.pred = t.symbol();
      a.args.assign(t.args().begin(), t.args().end());
    }
    return a;
  }

  std::vector<Atom> parse_conjunction() {
    std::vector<Atom> out;
    out.push_back(parse_atom());
    while (cur_.kind == Tok::Comma) {
      shift();
      out.push_back(parse_atom());
    }
    return out;
  }

  std::vector<std::pair<EntryProp, VarId>> parse_guard_props() {
    std::vector<std::pair<EntryProp, VarId>> out;
    bool paren = cur_.kind == Tok::LParen;
    if (paren) shift();
    while (true) {
      Atom p = parse_atom();
      EntryProp prop;
      if ((p.pred == "ground" || p.pred == "g") && p.arity() == 1)
        prop = EntryProp::Ground;
      else if ((p.pred == "var" || p.pred == "f") && p.arity() == 1)
        prop = EntryProp::Var;
      else
        throw parse_error("unsupported property '" + p.pred +
                              "' (only ground/1 and var/1)",
                          cur_.line, cur_.col);
      if (!p.args[0].is_var())
        throw parse_error("property argument must be a variable", cur_.line,
                          cur_.col);
      out.push_back({prop, p.args[0].var_id()});
      if (cur_.kind != Tok::Comma) break;
      shift();
    }
    if (paren) expect(Tok::RParen, "')'");
    return out;
  }

  void parse_declaration(SourceUnit& u) {
    if (cur_.kind != Tok::AtomName && cur_.kind != Tok::VarName)
      throw parse_error("expected declaration name", cur_.line, cur_.col);
    std::string kind = cur_.text;
    if (kind == "module") {
      shift();
      expect(Tok::LParen, "'('");
      if (cur_.kind == Tok::VarName) {
        u.module_name = "_";
        shift();
      } else if (cur_.kind == Tok::AtomName) {
        u.module_name = cur_.text;
        shift();
      } else {
        throw parse_error("expected module name", cur_.line, cur_.col);
      }
      expect(Tok::Comma, "','");
      expect(Tok::LBracket, "'['");
      if (cur_.kind != Tok::RBracket) {
        while (true) {
          if (cur_.kind != Tok::AtomName)
            throw parse_error("expected exported predicate", cur_.line,
                              cur_.col);
          std::string name = cur_.text;
          shift();
          expect(Tok::Slash, "'/'");
          if (cur_.kind != Tok::AtomName)
            throw parse_error("expected arity", cur_.line, cur_.col);
          u.exports.push_back({name, std::stoul(cur_.text)});
          shift();
          if (cur_.kind != Tok::Comma) break;
          shift();
        }
      }
      expect(Tok::RBracket, "']'");
      // optional flag list, ignored
      if (cur_.kind == Tok::Comma) {
        shift();
        skip_balanced_until_rparen();
      }
      expect(Tok::RParen, "')'");
      expect(Tok::Dot, "'.'");
    } else if (kind == "entry") {
      shift();
      clause_vars_.clear();
      EntryDecl e;
      e.atom = parse_atom();
      if (cur_.kind == Tok::Colon) {
        shift();
        e.props = parse_guard_props();
      }
      expect(Tok::Dot, "'.'");
      u.entries.push_back(std::move(e));
    } else {
      u.warnings.push_back("skipping unknown declaration ':- " + kind + "'");
      while (cur_.kind != Tok::Dot && cur_.kind != Tok::End) shift();
      if (cur_.kind == Tok::Dot) shift();
    }
  }

  void skip_balanced_until_rparen() {
    int depth = 0;
    while (cur_.kind != Tok::End) {
      if (cur_.kind == Tok::LParen || cur_.kind == Tok::LBracket) ++depth;
      if (cur_.kind == Tok::RParen || cur_.kind == Tok::RBracket) {
        if (depth == 0 && cur_.kind == Tok::RParen) return;
        --depth;
      }
      shift();
    }
  }

  void validate(SourceUnit& u) {
    for (const EntryDecl& e : u.entries) {
      auto vs = var_set(e.atom);
      std::set<VarId> seen;
      for (const auto& [prop, v] : e.props) {
        if (!vs.count(v))
          throw parse_error("entry property variable not in entry atom", 0, 0);
        if (!seen.insert(v).second)
          throw parse_error("duplicate entry property for a variable", 0, 0);
      }
      PredKey pk = pred_key(e.atom);
      if (!u.program.defines(pk))
        u.warnings.push_back("entry predicate " + pk.name + "/" +
                             std::to_string(pk.arity) + " has no clauses");
    }
  }

  Lexer lex_;
  Token cur_{Tok::End, "", 0, 0};
  VarGen& gen_;
  std::map<std::string, VarId> clause_vars_;
};

}  // namespace

SourceUnit parse_program(const std::string& text) {
  SourceUnit u;
  Parser ps(text, u.program.vars());
  ps.parse_unit(u);
  return u;
}

SourceUnit parse_program_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open " + path, 0, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_program(ss.str());
}

void parse_exec_table_file(const std::string& path, ExecTable& xt,
                           VarGen& gen) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open " + path, 0, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  Parser ps(text, gen);
  ps.parse_exec_entries(xt);
}

// --- exec table ----------------------------------------------------------

std::vector<const ExecTableEntry*> ExecTable::entries_for(
    const PredKey& p) const {
  std::vector<const ExecTableEntry*> out;
  for (const auto& e : user_)
    if (pred_key(e.pattern) == p) out.push_back(&e);
  for (const auto& e : defaults_)
    if (pred_key(e.pattern) == p) out.push_back(&e);
  return out;
}

bool ExecTable::is_external(const PredKey& p) const {
  if (p == PredKey{"true", 0} || p == PredKey{"false", 0} ||
      p == PredKey{"fail", 0})
    return true;
  return !entries_for(p).empty();
}

ExecTable default_exec_table() {
  ExecTable xt;
  auto entry = [](EntryProp prop, ExecTableEntry::Replacement rep,
                  const std::string& pred) {
    ExecTableEntry e;
    e.pattern = Atom{pred, {Term::var(0)}};
    e.guard = {{prop, 0}};
    e.kind = rep;
    return e;
  };
  xt.add_default(
      entry(EntryProp::Ground, ExecTableEntry::Replacement::True, "ground"));
  xt.add_default(
      entry(EntryProp::Var, ExecTableEntry::Replacement::False, "ground"));
  xt.add_default(
      entry(EntryProp::Var, ExecTableEntry::Replacement::True, "var"));
  xt.add_default(
      entry(EntryProp::Ground, ExecTableEntry::Replacement::False, "var"));
  return xt;
}

// --- entry descriptions -----------------------------------------------------

AbstractAtom entry_to_abstract_atom(const EntryDecl& e, DomainKind d) {
  AbstractAtom out;
  out.atom = e.atom;
  std::vector<VarId> scope = vars_of(e.atom);
  if (d == DomainKind::Pd) {
    out.cp = AbsSubst::top(DomainKind::Pd, scope);
    return out;
  }
  std::set<VarId> ground, free;
  for (const auto& [prop, v] : e.props)
    (prop == EntryProp::Ground ? ground : free).insert(v);
  std::vector<VarId> unknown;
  for (VarId v : scope)
    if (!ground.count(v) && !free.count(v)) unknown.push_back(v);

  std::set<std::set<VarId>> sh;
  for (VarId v : free) sh.insert({v});  // free and unaliased
  size_t n = unknown.size();
  if (n > 20) throw internal_error("entry: too many unconstrained variables");
  for (size_t mask = 1; mask < (size_t{1} << n); ++mask) {
    std::set<VarId> g;
    for (size_t i = 0; i < n; ++i)
      if (mask & (size_t{1} << i)) g.insert(unknown[i]);
    sh.insert(std::move(g));
  }
  out.cp = AbsSubst::shfr(scope, std::move(sh), std::move(free));
  return out;
}

// --- printing -----------------------------------------------------------------

std::string print_clause(const Clause& c) { return to_string(c); }

std::string print_program(const Program& p) {
  std::string out;
  for (const Clause& c : p.clauses()) {
    out += to_string(c);
    out += "\n";
  }
  return out;
}

}  // namespace lps
