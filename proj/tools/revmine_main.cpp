// revmine: mines sentence-level revisions from multi-version LaTeX corpora.
//
// Subcommands:
//   extract    parse the corpus tree into per-paper extracted documents
//   pairs      align first vs last version and classify revision pairs
//   stats      emit figure-analogue TSV tables from the pairs file
//   sample     draw a seeded uniform sample of the labelable subset
//   agreement  compute Fleiss' kappa and strength-change rates from labels

#include <exception>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "revmine/revmine.hpp"

namespace {

int run(const CLI::App& app, revmine::PipelineConfig& cfg, const std::string& labels_csv) {
  using namespace revmine;

  if (app.got_subcommand("extract")) {
    const ExtractSummary s = run_extract(cfg);
    for (const auto& m : s.messages) std::cerr << m << "\n";
    std::cout << "papers: " << s.papers << "  extracted: " << s.extracted
              << "  cached: " << s.cached << "  failed: " << s.failed << "\n";
    return s.total_failure() ? 2 : 0;
  }

  if (app.got_subcommand("pairs")) {
    const PairsSummary s = run_pairs(cfg);
    for (const auto& m : s.extract.messages) std::cerr << m << "\n";
    if (s.extract.total_failure()) return 2;
    std::cout << "papers: " << s.papers << "  aligned: " << s.aligned_papers
              << "  deletions: " << s.deletions << "  typos: " << s.typos
              << "  rewrites: " << s.rewrites << "  unchanged: " << s.unchanged
              << "  labelable: " << s.labelable << "\n"
              << "wrote " << cfg.pairs_path().string() << " and "
              << cfg.labelable_path().string() << "\n";
    return 0;
  }

  if (app.got_subcommand("stats")) {
    run_stats(cfg);
    std::cout << "wrote " << cfg.stats_path().string() << "\n";
    return 0;
  }

  if (app.got_subcommand("sample")) {
    const std::size_t n = run_sample(cfg);
    std::cout << "sampled " << n << " pairs into " << cfg.sample_path().string() << "\n";
    return 0;
  }

  if (app.got_subcommand("agreement")) {
    const AgreementReport report = run_agreement(labels_csv, cfg);
    std::ostringstream ss;
    write_agreement_tsv(ss, report);
    std::cout << ss.str();
    if (!cfg.out_dir.empty())
      std::cerr << "wrote " << cfg.agreement_path().string() << "\n";
    return 0;
  }

  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  revmine::PipelineConfig cfg;
  std::string corpus_root, out_dir, labels_csv;

  CLI::App app{"revision mining over multi-version LaTeX corpora"};
  app.require_subcommand(1);
  app.set_config("--config", "", "config file with key=value lines; flags win");

  app.add_option("--corpus-root", corpus_root, "corpus tree root (<root>/<paper_id>/...)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--mismatch-penalty", cfg.mismatch_penalty,
                 "alignment mismatch penalty (default 0.1)");
  app.add_option("--sim-threshold", cfg.sim_threshold,
                 "labelable similarity threshold, strict (default 0.5)");
  app.add_option("--typo-edit-distance", cfg.typo_edit_distance,
                 "spans below this edit distance are typos (default 3)");
  app.add_option("--majority", cfg.majority_threshold,
                 "majority-vote threshold for agreement (default 5)");
  app.add_option("--sample-n", cfg.sample_n, "sample size");
  app.add_option("--seed", cfg.seed, "sampling seed (default 0)");
  app.add_option("--jobs", cfg.jobs, "paper-level parallelism (default 1)");
  app.add_flag("--dump-alignment", cfg.dump_alignments,
               "write per-paper alignment link dumps");

  auto add_sub = [&](const char* name, const char* desc) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->fallthrough();
    return sub;
  };
  add_sub("extract", "extract documents from the corpus tree");
  add_sub("pairs", "produce revision pairs (runs extract if needed)");
  add_sub("stats", "emit corpus statistics tables");
  add_sub("sample", "sample the labelable subset");
  CLI::App* agreement = add_sub("agreement", "analyze a completed label CSV");
  agreement->add_option("labels_csv", labels_csv, "CSV with pair_id,labeler_id,label")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  cfg.corpus_root = corpus_root;
  cfg.out_dir = out_dir;

  try {
    if (!app.got_subcommand("agreement") && out_dir.empty())
      throw revmine::ConfigError("--out is required");
    return run(app, cfg, labels_csv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
