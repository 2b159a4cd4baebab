#include "lps/driver.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

namespace lps {

void apply_preset(RunConfig& cfg) {
  if (!cfg.preset) return;
  const std::string& p = *cfg.preset;
  if (p == "full") {
    cfg.domain = DomainKind::Shfr;
    cfg.unfold = UnfoldStrategy::HomEmb;
    cfg.generalize = GeneralizeStrategy::Id;
    cfg.engine = EngineKind::Analyze;
  } else if (p == "polyvariant-ai") {
    cfg.domain = DomainKind::Shfr;
    cfg.unfold = UnfoldStrategy::OneStep;
    cfg.generalize = GeneralizeStrategy::BaseForm;
    cfg.engine = EngineKind::Analyze;
  } else if (p == "abstract-spec") {
    cfg.domain = DomainKind::Shfr;
    cfg.unfold = UnfoldStrategy::DeriveThenAexec;
    cfg.generalize = GeneralizeStrategy::BaseForm;
    cfg.engine = EngineKind::Analyze;
  } else if (p == "classical-pd") {
    cfg.domain = DomainKind::Pd;
    cfg.unfold = UnfoldStrategy::HomEmb;
    cfg.generalize = GeneralizeStrategy::HomEmbMsg;
    cfg.engine = EngineKind::Apd;
  } else {
    throw std::runtime_error("unknown preset '" + p + "'");
  }
  cfg.widen = "id";
}

std::string config_line(const RunConfig& cfg) {
  std::ostringstream os;
  os << "domain=" << to_string(cfg.domain)
     << " unfold=" << to_string(cfg.unfold)
     << " generalize=" << to_string(cfg.generalize) << " widen=" << cfg.widen
     << " engine=" << to_string(cfg.engine);
  return os.str();
}

// --- oracle ---------------------------------------------------------------

namespace {

// Maps a concrete query (an instance of the original entry atom) to the
// corresponding call into the residual program.
std::optional<Atom> residual_query(const ResidualProgram& rp,
                                   const Atom& query) {
  for (const auto& [orig, renamed] : rp.entry_map) {
    auto theta = match(orig, query);
    if (theta) return (*theta)(renamed);
  }
  return std::nullopt;
}

}  // namespace

OracleReport oracle_check(const Program& original,
                          const std::vector<EntryDecl>& entries,
                          const AnalysisResult& analysis,
                          const ResidualProgram& residual, int samples,
                          int depth, unsigned long long seed) {
  OracleReport rep;
  std::mt19937_64 rng(seed);
  Signature sig = program_signature(original);
  VarGen qgen;
  qgen.reserve_up_to(1000000);  // query variables, clear of program ids

  for (const EntryDecl& e : entries) {
    std::vector<Atom> queries =
        sample_queries(e, sig, samples, 6, qgen, rng);
    AbstractAtom entry_pattern = entry_to_abstract_atom(e, analysis.domain);
    const OrNode* node = analysis.node_for(entry_pattern);

    for (const Atom& q : queries) {
      ++rep.queries;
      InterpResult orig_res = solve(original, q, depth);
      auto rq = residual_query(residual, q);
      if (!rq) {
        rep.mismatches.push_back("no residual entry covers " + to_string(q));
        continue;
      }
      // compare on the original-space rendering: instantiate the entry
      // atom the same way on both sides
      RawAnswers orig_raw = solve_raw(original, q, depth);
      RawAnswers res_raw = solve_raw(residual.program, *rq, depth);
      if (orig_raw.depth_bound_hit || res_raw.depth_bound_hit) {
        ++rep.inconclusive;
        continue;
      }
      std::vector<std::string> a1, a2;
      for (const Substitution& s : orig_raw.answers)
        a1.push_back(to_string(canonical_atom(s(q))));
      for (const Substitution& s : res_raw.answers)
        a2.push_back(to_string(canonical_atom(s(*rq))));
      // the entry atom may carry structure the filtered name dropped; use
      // the query instantiations of the respective atoms but compare the
      // variable bindings positionally via the entry pair
      std::sort(a1.begin(), a1.end());
      std::sort(a2.begin(), a2.end());
      // strip predicate names before comparing
      auto strip = [](std::vector<std::string>& v) {
        for (std::string& s : v) {
          auto p = s.find('(');
          if (p != std::string::npos) s = s.substr(p);
        }
      };
      strip(a1);
      strip(a2);
      if (a1 != a2) {
        std::ostringstream os;
        os << "answer mismatch for " << to_string(q) << ": original "
           << a1.size() << " vs residual " << a2.size();
        rep.mismatches.push_back(os.str());
      }
      (void)orig_res;

      // soundness of the answer pattern against concrete successes
      if (node && analysis.engine == EngineKind::Analyze &&
          !node->answer.is_bottom()) {
        auto theta_entry = match(e.atom, q);
        if (!theta_entry) continue;
        for (const Substitution& s : orig_raw.answers) {
          ConcreteState st;
          for (VarId v : vars_of(node->pattern.atom)) st[v] = Term::var(v);
          // map node pattern vars through entry vars to the concrete answer
          auto theta_node = match(node->pattern.atom, e.atom);
          if (!theta_node) break;
          for (VarId v : vars_of(node->pattern.atom)) {
            Term via_entry = (*theta_node)(Term::var(v));
            Term concrete = s((*theta_entry)(via_entry));
            st[v] = concrete;
          }
          if (!concrete_satisfies(node->answer, st)) {
            rep.soundness_violations.push_back(
                "success of " + to_string(q) +
                " violates the computed answer pattern");
          }
        }
      }
    }
  }
  return rep;
}

// --- pipeline -------------------------------------------------------------------

RunOutcome run(const RunConfig& cfg_in, std::ostream& out, std::ostream& err) {
  RunConfig cfg = cfg_in;
  RunOutcome outcome;
  try {
    apply_preset(cfg);
    if (cfg.print_config) {
      out << config_line(cfg) << "\n";
      return outcome;
    }
    auto t0 = std::chrono::steady_clock::now();
    SourceUnit unit = parse_program_file(cfg.input_path);
    for (const std::string& w : unit.warnings) err << "warning: " << w << "\n";

    ExecTable xt = default_exec_table();
    if (!cfg.exec_table_path.empty())
      parse_exec_table_file(cfg.exec_table_path, xt, unit.program.vars());

    EngineConfig ecfg;
    ecfg.domain = cfg.domain;
    ecfg.unfold.strategy = cfg.unfold;
    // classical PD may take non-leftmost derivation steps (guarded by
    // the impure-wall rule); the analysis presets stay leftmost
    ecfg.unfold.allow_nonleftmost = cfg.engine == EngineKind::Apd;
    ecfg.generalize = cfg.generalize;
    if (cfg.trace)
      ecfg.trace = [&err](const TraceEvent& e) {
        const char* k = e.kind == TraceEvent::Kind::Derive  ? "derive"
                        : e.kind == TraceEvent::Kind::Exec  ? "exec"
                        : e.kind == TraceEvent::Kind::Stop  ? "stop"
                        : e.kind == TraceEvent::Kind::Fail  ? "fail"
                                                            : "leaf";
        err << "[" << k << "] ";
        if (e.clause) err << "clause " << e.clause << " ";
        err << e.detail << "\n";
      };

    outcome.analysis =
        cfg.engine == EngineKind::Analyze
            ? analyze(unit.program, unit.entries, xt, ecfg)
            : apd(unit.program, unit.entries, xt, ecfg);
    outcome.residual = generate(outcome.analysis, unit.entries);
    outcome.residual_text = render_residual(outcome.residual);
    for (const std::string& w : outcome.residual.warnings)
      err << "warning: " << w << "\n";

    auto t1 = std::chrono::steady_clock::now();
    double ms =
        std::chrono::duration<double, std::milli>(t1 - t0).count();

    if (!cfg.residual_path.empty()) {
      std::ofstream f(cfg.residual_path);
      f << outcome.residual_text;
    }
    if (!cfg.dot_path.empty()) {
      std::ofstream f(cfg.dot_path);
      f << export_dot(outcome.analysis);
    }
    if (!cfg.json_path.empty()) {
      std::ofstream f(cfg.json_path);
      f << dump_tables(outcome.analysis);
    }

    std::ostringstream sum;
    sum << "answers: " << outcome.analysis.node_order.size()
        << "  specs: " << outcome.analysis.tables.spec_order().size()
        << "  updates: " << outcome.analysis.stats.updates
        << "  residual clauses: " << outcome.residual.program.size()
        << "  time: " << static_cast<long>(ms + 0.5) << " ms";
    outcome.summary = sum.str();
    out << outcome.summary << "\n";

    if (cfg.check_samples > 0) {
      OracleReport rep =
          oracle_check(unit.program, unit.entries, outcome.analysis,
                       outcome.residual, cfg.check_samples, cfg.check_depth,
                       cfg.seed);
      out << "oracle: " << rep.queries << " queries, " << rep.inconclusive
          << " inconclusive, " << rep.mismatches.size() << " mismatches, "
          << rep.soundness_violations.size() << " soundness violations\n";
      for (const std::string& m : rep.mismatches) err << "oracle: " << m << "\n";
      for (const std::string& m : rep.soundness_violations)
        err << "oracle: " << m << "\n";
      if (!rep.mismatches.empty() || !rep.soundness_violations.empty()) {
        outcome.oracle_failures = rep.mismatches;
        outcome.oracle_failures.insert(outcome.oracle_failures.end(),
                                       rep.soundness_violations.begin(),
                                       rep.soundness_violations.end());
        outcome.exit_code = 3;
      }
    }
  } catch (const parse_error& e) {
    err << "parse error: " << e.what() << "\n";
    outcome.exit_code = 1;
  } catch (const internal_error& e) {
    err << "internal error: " << e.what() << "\n";
    outcome.exit_code = 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    outcome.exit_code = 1;
  }
  return outcome;
}

}  // namespace lps
