#include <iostream>

#include "CLI11.hpp"
#include "lps/driver.hpp"

int main(int argc, char** argv) {
  CLI::App app{"lpspec — analyzer and specializer for definite logic programs"};

  lps::RunConfig cfg;
  std::string domain = "shfr", unfold = "hom-emb", generalize = "id",
              widen = "id", engine = "analyze";

  app.add_option("input", cfg.input_path, "input program (.pl)");
  app.add_option("--domain", domain, "abstract domain: shfr | pd");
  app.add_option("--unfold", unfold,
                 "unfolding: hom-emb | one-step | derive-then-aexec");
  app.add_option("--generalize", generalize,
                 "generalization: id | hom-emb-msg | base-form");
  app.add_option("--widen", widen, "call widening: id");
  app.add_option("--engine", engine, "engine: analyze | apd");
  std::string preset;
  app.add_option("--preset", preset,
                 "full | polyvariant-ai | abstract-spec | classical-pd");
  app.add_option("-o,--output", cfg.residual_path, "residual program file");
  app.add_option("--dot", cfg.dot_path, "analysis graph (DOT)");
  app.add_option("--json", cfg.json_path, "table dump (JSON)");
  app.add_option("--exec-table", cfg.exec_table_path,
                 "extra abstract executability entries");
  app.add_option("--check", cfg.check_samples,
                 "verify N sampled queries against the reference interpreter");
  app.add_option("--depth", cfg.check_depth, "reference interpreter bound");
  app.add_option("--seed", cfg.seed, "sampling seed");
  app.add_flag("--trace", cfg.trace, "log unfolding events to stderr");
  app.add_flag("--print-config", cfg.print_config,
               "print the resolved parameter tuple and exit");

  CLI11_PARSE(app, argc, argv);

  auto bad = [](const char* what, const std::string& v) {
    std::cerr << "error: bad value '" << v << "' for " << what << "\n";
    return 1;
  };
  if (domain == "shfr")
    cfg.domain = lps::DomainKind::Shfr;
  else if (domain == "pd")
    cfg.domain = lps::DomainKind::Pd;
  else
    return bad("--domain", domain);

  if (unfold == "hom-emb")
    cfg.unfold = lps::UnfoldStrategy::HomEmb;
  else if (unfold == "one-step")
    cfg.unfold = lps::UnfoldStrategy::OneStep;
  else if (unfold == "derive-then-aexec")
    cfg.unfold = lps::UnfoldStrategy::DeriveThenAexec;
  else
    return bad("--unfold", unfold);

  if (generalize == "id")
    cfg.generalize = lps::GeneralizeStrategy::Id;
  else if (generalize == "hom-emb-msg")
    cfg.generalize = lps::GeneralizeStrategy::HomEmbMsg;
  else if (generalize == "base-form")
    cfg.generalize = lps::GeneralizeStrategy::BaseForm;
  else
    return bad("--generalize", generalize);

  if (engine == "analyze")
    cfg.engine = lps::EngineKind::Analyze;
  else if (engine == "apd")
    cfg.engine = lps::EngineKind::Apd;
  else
    return bad("--engine", engine);

  if (widen != "id") return bad("--widen", widen);
  if (!preset.empty()) cfg.preset = preset;

  if (cfg.input_path.empty() && !cfg.print_config) {
    std::cerr << "error: no input file\n";
    return 1;
  }
  lps::RunOutcome outcome = lps::run(cfg, std::cout, std::cerr);
  return outcome.exit_code;
}
