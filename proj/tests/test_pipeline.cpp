#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "fixtures.hpp"
#include "revmine/revmine.hpp"

using namespace revmine;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("revmine_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

PipelineConfig config_for(const fs::path& corpus, const fs::path& out) {
  PipelineConfig cfg;
  cfg.corpus_root = corpus;
  cfg.out_dir = out;
  return cfg;
}

std::string slurp(const fs::path& p) { return read_file(p); }

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::string& args, const fs::path& scratch) {
  const fs::path out_file = scratch / "stdout.txt";
  const fs::path err_file = scratch / "stderr.txt";
  const std::string cmd = std::string(REVMINE_CLI_PATH) + " " + args + " > " +
                          out_file.string() + " 2> " + err_file.string();
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

// Counts (folded position, type) cells over D/T/R pairs.
std::array<std::array<std::uint64_t, 3>, 3> fold_counts(const std::vector<RevisionPair>& pairs) {
  std::array<std::array<std::uint64_t, 3>, 3> counts{};
  for (const auto& p : pairs) {
    if (!is_revision(p.rtype)) continue;
    std::size_t row =
        (p.position == Position::Abstract || p.position == Position::Introduction)
            ? 0u
            : (p.position == Position::Middle ? 1u : 2u);
    ++counts[row][type_slot(p.rtype)];
  }
  return counts;
}

}  // namespace

TEST_CASE("run_extract: one cache entry per paper, idempotent and resumable") {
  TempDir corpus("corpus"), out("out");
  fixture::write_corpus(corpus.path);
  auto cfg = config_for(corpus.path, out.path);

  auto s1 = run_extract(cfg);
  CHECK(s1.papers == 10);
  CHECK(s1.extracted == 10);
  CHECK(s1.failed == 0);
  for (int p = 0; p < fixture::kPapers; ++p)
    CHECK(fs::exists(cfg.extracted_dir() / (fixture::paper_id(p) + ".json")));

  auto s2 = run_extract(cfg);
  CHECK(s2.cached == 10);
  CHECK(s2.extracted == 0);

  SUBCASE("cache round-trips the extracted documents") {
    auto papers = load_extracted(cfg);
    REQUIRE(papers.size() == 10);
    CHECK(papers[0].meta.paper_id == "p00");
    CHECK(papers[0].first.sentence_count() == fixture::sentences_per_paper());
    CHECK(papers[0].first.sections.size() == 4);
    CHECK(papers[0].first.sections[0].position == Position::Abstract);
    // p09 is byte-identical across versions.
    CHECK(papers[9].changed() == false);
    CHECK(papers[0].changed() == true);
  }
}

TEST_CASE("run_extract: per-paper failures are warnings, not fatal") {
  TempDir corpus("corrupt"), out("out");
  fixture::write_corpus(corpus.path);
  // Break one paper: no extractable text in v1.
  std::ofstream bad(corpus.path / "p03" / "v1" / "main.tex", std::ios::trunc);
  bad << "% nothing but comments\n";
  bad.close();

  auto cfg = config_for(corpus.path, out.path);
  auto s = run_extract(cfg);
  CHECK(s.papers == 10);
  CHECK(s.extracted == 9);
  CHECK(s.failed == 1);
  CHECK_FALSE(s.total_failure());
  REQUIRE(s.messages.size() == 1);
  CHECK(s.messages[0].find("p03") != std::string::npos);
}

TEST_CASE("run_extract: empty corpus root throws EmptyCorpus") {
  TempDir corpus("empty"), out("out");
  auto cfg = config_for(corpus.path, out.path);
  CHECK_THROWS_AS(run_extract(cfg), EmptyCorpus);
}

TEST_CASE("single-version papers extract and feed stats but produce no pairs") {
  TempDir corpus("single"), out("out");
  fixture::write_corpus(corpus.path);
  fs::create_directories(corpus.path / "solo" / "v1");
  write_file(corpus.path / "solo" / "metadata.json",
             R"({"paper_id":"solo","author_count":2,"categories":["cs.CL"],"versions":["v1"]})");
  write_file(corpus.path / "solo" / "v1" / "main.tex",
             "\\section{Introduction}\nA lone version says little.\n");

  auto cfg = config_for(corpus.path, out.path);
  auto summary = run_pairs(cfg);
  CHECK(summary.papers == 11);
  CHECK(summary.aligned_papers == 10);

  std::ifstream in(cfg.pairs_path());
  for (const auto& p : read_pairs(in)) CHECK(p.paper_id != "solo");

  run_stats(cfg);
  const std::string stats = slurp(cfg.stats_path());
  CHECK(stats.find("papers\t11") != std::string::npos);
  CHECK(stats.find("multi_version\t10") != std::string::npos);
  CHECK(stats.find("changed_papers\t9") != std::string::npos);
}

TEST_CASE("run_pairs produces exactly the planted pairs") {
  TempDir corpus("corpus"), out("out");
  fixture::write_corpus(corpus.path);
  auto cfg = config_for(corpus.path, out.path);
  auto summary = run_pairs(cfg);  // auto-runs extract

  const auto expected = fixture::expected_position_counts();
  std::uint64_t expected_del = 0, expected_typo = 0, expected_rewrite = 0;
  for (const auto& row : expected) {
    expected_del += row[0];
    expected_typo += row[1];
    expected_rewrite += row[2];
  }
  CHECK(summary.papers == 10);
  CHECK(summary.aligned_papers == 10);
  CHECK(summary.deletions == expected_del);
  CHECK(summary.typos == expected_typo);
  CHECK(summary.rewrites == expected_rewrite);
  CHECK(summary.labelable == 8);  // typos+rewrites planted in abstract/intro

  std::ifstream in(cfg.pairs_path());
  const auto pairs = read_pairs(in);
  CHECK(fold_counts(pairs) == expected);

  SUBCASE("per-paper revision counts match the plan") {
    std::map<std::string, std::uint64_t> per_paper;
    for (const auto& p : pairs)
      if (is_revision(p.rtype)) ++per_paper[p.paper_id];
    for (const auto& [id, n] : fixture::expected_changes_per_paper()) {
      CHECK(per_paper[id] == n);
    }
  }

  SUBCASE("unchanged pairs carry the remaining matched sentences") {
    // Every non-deleted v1 sentence of a changed paper is matched.
    std::map<std::string, std::uint64_t> matched;
    for (const auto& p : pairs)
      if (p.rtype != RevisionType::Deletion) ++matched[p.paper_id];
    for (int paper = 0; paper < fixture::kPapers; ++paper) {
      std::uint64_t deletions = 0;
      for (const auto& e : fixture::plan())
        if (e.paper == paper && e.kind == RevisionType::Deletion) ++deletions;
      CHECK(matched[fixture::paper_id(paper)] == fixture::sentences_per_paper() - deletions);
    }
  }

  SUBCASE("labelable subset obeys the strict filter") {
    std::ifstream lin(cfg.labelable_path());
    const auto labelable = read_pairs(lin);
    CHECK(labelable.size() == 8);
    for (const auto& p : labelable) {
      REQUIRE(p.similarity.has_value());
      CHECK(*p.similarity > 0.5);
      CHECK((p.position == Position::Abstract || p.position == Position::Introduction));
      CHECK((p.rtype == RevisionType::Typo || p.rtype == RevisionType::Rewrite));
    }
  }

  SUBCASE("pair JSONL lines carry the documented field order") {
    std::ifstream fin(cfg.pairs_path());
    std::string line;
    REQUIRE(std::getline(fin, line));
    CHECK(line.rfind("{\"paper_id\":\"p00\",\"section_title\":", 0) == 0);
  }
}

TEST_CASE("run_pairs is byte-identical across reruns and job counts") {
  TempDir corpus("corpus");
  fixture::write_corpus(corpus.path);

  TempDir out1("o1"), out2("o2"), out3("o3");
  auto cfg1 = config_for(corpus.path, out1.path);
  auto cfg2 = config_for(corpus.path, out2.path);
  auto cfg3 = config_for(corpus.path, out3.path);
  cfg3.jobs = 3;
  run_pairs(cfg1);
  run_pairs(cfg2);
  run_pairs(cfg3);
  run_stats(cfg1);
  run_stats(cfg2);
  run_stats(cfg3);

  for (const char* name : {"pairs.jsonl", "labelable.jsonl", "idf.tsv", "stats.tsv"}) {
    CAPTURE(name);
    const std::string a = slurp(out1.path / name);
    CHECK(a == slurp(out2.path / name));
    CHECK(a == slurp(out3.path / name));
    CHECK_FALSE(a.empty());
  }
}

TEST_CASE("run_pairs with --sim-threshold 1.0 empties the labelable subset") {
  TempDir corpus("corpus"), out("out");
  fixture::write_corpus(corpus.path);
  auto cfg = config_for(corpus.path, out.path);
  cfg.sim_threshold = 1.0;
  auto summary = run_pairs(cfg);
  CHECK(summary.labelable == 0);
  CHECK(slurp(cfg.labelable_path()).empty());
}

TEST_CASE("run_pairs can dump alignment links") {
  TempDir corpus("corpus"), out("out");
  fixture::write_corpus(corpus.path);
  auto cfg = config_for(corpus.path, out.path);
  cfg.dump_alignments = true;
  run_pairs(cfg);
  const auto dump = slurp(cfg.alignments_dir() / "p09.jsonl");
  // p09 is unchanged: 11 identity links.
  CHECK(std::count(dump.begin(), dump.end(), '\n') == 11);
  CHECK(dump.find("{\"i\":0,\"j\":0,\"sim\":1.000000}") == 0);
}

TEST_CASE("run_stats writes the figure tables; fig1a matches the plan") {
  TempDir corpus("corpus"), out("out");
  fixture::write_corpus(corpus.path);
  auto cfg = config_for(corpus.path, out.path);
  run_pairs(cfg);
  run_stats(cfg);

  const std::string stats = slurp(cfg.stats_path());
  const auto expected = fixture::expected_position_counts();
  auto row_line = [&](const char* name, const std::array<std::uint64_t, 3>& c) {
    return std::string(name) + "\t" + std::to_string(c[0]) + "\t" + std::to_string(c[1]) +
           "\t" + std::to_string(c[2]);
  };
  CHECK(stats.find(row_line("introduction", expected[0])) != std::string::npos);
  CHECK(stats.find(row_line("middle", expected[1])) != std::string::npos);
  CHECK(stats.find(row_line("conclusion", expected[2])) != std::string::npos);
  CHECK(stats.find("papers\t10") != std::string::npos);
  CHECK(stats.find("multi_version\t10") != std::string::npos);
  CHECK(stats.find("multi_version_rate\t1.000000") != std::string::npos);
  CHECK(stats.find("changed_papers\t9") != std::string::npos);

  SUBCASE("missing pairs file is an explicit error") {
    TempDir fresh("fresh");
    auto cfg2 = config_for(corpus.path, fresh.path);
    CHECK_THROWS_AS(run_stats(cfg2), MissingPairs);
  }

  SUBCASE("an empty pairs file yields all-zero tables") {
    write_file(cfg.pairs_path(), "");
    run_stats(cfg);
    const std::string zeroed = slurp(cfg.stats_path());
    CHECK(zeroed.find("introduction\t0\t0\t0") != std::string::npos);
    CHECK(zeroed.find("middle\t0\t0\t0") != std::string::npos);
    CHECK(zeroed.find("conclusion\t0\t0\t0") != std::string::npos);
    CHECK(zeroed.find("papers\t10") != std::string::npos);
  }
}

TEST_CASE("run_sample: deterministic seeded sampling of the labelable subset") {
  TempDir corpus("corpus"), out("out");
  fixture::write_corpus(corpus.path);
  auto cfg = config_for(corpus.path, out.path);
  run_pairs(cfg);

  cfg.sample_n = 4;
  cfg.seed = 99;
  CHECK(run_sample(cfg) == 4);
  const std::string first = slurp(cfg.sample_path());
  CHECK(run_sample(cfg) == 4);
  CHECK(slurp(cfg.sample_path()) == first);
  CHECK(std::count(first.begin(), first.end(), '\n') == 4);

  SUBCASE("sampling more than available fails") {
    cfg.sample_n = 1000;
    CHECK_THROWS_AS(run_sample(cfg), SampleTooLarge);
  }
}

TEST_CASE("run_agreement analyzes a synthetic label file") {
  TempDir out("out");
  std::string csv = "pair_id,labeler_id,label\n";
  auto add_rows = [&](int count, const char* label, int base) {
    for (int i = 0; i < count; ++i)
      for (int r = 0; r < 9; ++r)
        csv += "pair" + std::to_string(base + i) + ",l" + std::to_string(r) + "," + label + "\n";
  };
  add_rows(194, "stronger", 0);
  add_rows(93, "weaker", 1000);
  add_rows(99, "no_change", 2000);
  const fs::path labels = out.path / "labels.csv";
  write_file(labels, csv);

  auto cfg = config_for("", out.path);
  const auto report = run_agreement(labels, cfg);
  CHECK(report.rows == 386);
  CHECK(report.majority_rows == 386);
  REQUIRE(report.strength_rate.has_value());
  CHECK(*report.strength_rate == doctest::Approx(287.0 / 386.0));
  const std::string tsv = slurp(cfg.agreement_path());
  CHECK(tsv.find("strength_change_pct\t74.4%") != std::string::npos);
}

TEST_CASE("config validation rejects out-of-range values") {
  PipelineConfig cfg;
  cfg.out_dir = "x";
  CHECK_NOTHROW(cfg.validate());
  SUBCASE("negative penalty") {
    cfg.mismatch_penalty = -0.1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
  SUBCASE("similarity threshold above 1") {
    cfg.sim_threshold = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
  SUBCASE("typo distance below 1") {
    cfg.typo_edit_distance = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
  SUBCASE("jobs below 1") {
    cfg.jobs = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
}

TEST_CASE("pipeline defaults equal the published constants") {
  PipelineConfig cfg;
  CHECK(cfg.mismatch_penalty == 0.1);
  CHECK(cfg.sim_threshold == 0.5);
  CHECK(cfg.typo_edit_distance == 3);
  CHECK(cfg.majority_threshold == 5);
  CHECK(cfg.labelable_positions ==
        std::set<Position>{Position::Abstract, Position::Introduction});
}

TEST_CASE("CLI: subcommands, exit codes and outputs") {
  TempDir corpus("cli_corpus"), out("cli_out"), scratch("cli_scratch");
  fixture::write_corpus(corpus.path);

  SUBCASE("help exits 0") {
    CHECK(run_cli("--help", scratch.path).exit_code == 0);
  }
  SUBCASE("missing subcommand exits 1") {
    CHECK(run_cli("", scratch.path).exit_code == 1);
  }
  SUBCASE("missing --out exits 1") {
    CHECK(run_cli("extract --corpus-root " + corpus.path.string(), scratch.path).exit_code == 1);
  }
  SUBCASE("full pipeline through the binary") {
    auto extract = run_cli("extract --corpus-root " + corpus.path.string() + " --out " +
                               out.path.string(),
                           scratch.path);
    CHECK(extract.exit_code == 0);
    CHECK(extract.out.find("extracted: 10") != std::string::npos);

    auto pairs = run_cli("pairs --out " + out.path.string(), scratch.path);
    CHECK(pairs.exit_code == 0);
    CHECK(fs::exists(out.path / "pairs.jsonl"));

    auto stats = run_cli("stats --out " + out.path.string(), scratch.path);
    CHECK(stats.exit_code == 0);
    CHECK(fs::exists(out.path / "stats.tsv"));

    auto sample =
        run_cli("sample --out " + out.path.string() + " --sample-n 3 --seed 5", scratch.path);
    CHECK(sample.exit_code == 0);
    CHECK(fs::exists(out.path / "sample.jsonl"));
  }
  SUBCASE("empty corpus root exits 1") {
    TempDir empty("cli_empty");
    auto r = run_cli("extract --corpus-root " + empty.path.string() + " --out " +
                         out.path.string(),
                     scratch.path);
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("corpus is empty") != std::string::npos);
  }
  SUBCASE("total extraction failure exits 2") {
    TempDir broken("cli_broken");
    fs::create_directories(broken.path / "only" / "v1");
    write_file(broken.path / "only" / "metadata.json",
               R"({"paper_id":"only","author_count":1,"categories":["m"],"versions":["v1"]})");
    write_file(broken.path / "only" / "v1" / "main.tex", "% no text\n");
    auto r = run_cli("extract --corpus-root " + broken.path.string() + " --out " +
                         out.path.string(),
                     scratch.path);
    CHECK(r.exit_code == 2);
  }
  SUBCASE("config file supplies values, flags win") {
    write_file(scratch.path / "cfg.ini",
               "corpus-root=" + corpus.path.string() + "\nout=" + out.path.string() + "\n");
    auto r = run_cli("--config " + (scratch.path / "cfg.ini").string() + " extract",
                     scratch.path);
    CHECK(r.exit_code == 0);

    TempDir out2("cli_out2");
    auto r2 = run_cli("--config " + (scratch.path / "cfg.ini").string() + " extract --out " +
                          out2.path.string(),
                      scratch.path);
    CHECK(r2.exit_code == 0);
    CHECK(fs::exists(out2.path / "extracted" / "p00.json"));
  }
  SUBCASE("agreement prints the published percentage") {
    std::string csv = "pair_id,labeler_id,label\n";
    for (int i = 0; i < 3; ++i)
      for (int r = 0; r < 9; ++r)
        csv += "a" + std::to_string(i) + ",l" + std::to_string(r) + ",stronger\n";
    for (int r = 0; r < 9; ++r) csv += "b,l" + std::to_string(r) + ",no_change\n";
    write_file(scratch.path / "labels.csv", csv);
    auto r = run_cli("agreement " + (scratch.path / "labels.csv").string(), scratch.path);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("strength_change_pct\t75.0%") != std::string::npos);
    // Unanimous multi-category labels: kappa 1.0 on the full set.
    CHECK(r.out.find("kappa_full\t1.000000") != std::string::npos);
  }
  SUBCASE("agreement with ragged raters names the pair and exits 1") {
    write_file(scratch.path / "ragged.csv",
               "pair_id,labeler_id,label\nx,l1,stronger\nx,l2,weaker\ny,l1,stronger\n");
    auto r = run_cli("agreement " + (scratch.path / "ragged.csv").string(), scratch.path);
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("'y'") != std::string::npos);
  }
}
