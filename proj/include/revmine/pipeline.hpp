#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "revmine/agreement.hpp"
#include "revmine/align.hpp"
#include "revmine/classify.hpp"
#include "revmine/corpus.hpp"
#include "revmine/errors.hpp"
#include "revmine/lexical.hpp"
#include "revmine/pairs_io.hpp"
#include "revmine/stats.hpp"

namespace revmine {

/// Pipeline knobs; every default is the paper's constant.
struct PipelineConfig {
  fs::path corpus_root;
  fs::path out_dir;
  double mismatch_penalty = 0.1;
  double sim_threshold = 0.5;
  int typo_edit_distance = 3;
  int majority_threshold = 5;
  std::set<Position> labelable_positions = {Position::Abstract, Position::Introduction};
  std::size_t sample_n = 0;
  std::uint64_t seed = 0;
  int jobs = 1;
  bool dump_alignments = false;

  void validate() const {
    if (mismatch_penalty < 0) throw ConfigError("mismatch penalty must be >= 0");
    if (sim_threshold < 0.0 || sim_threshold > 1.0)
      throw ConfigError("similarity threshold must be in [0,1]");
    if (typo_edit_distance < 1) throw ConfigError("typo edit distance must be >= 1");
    if (majority_threshold < 1) throw ConfigError("majority threshold must be >= 1");
    if (jobs < 1) throw ConfigError("jobs must be >= 1");
  }

  fs::path extracted_dir() const { return out_dir / "extracted"; }
  fs::path pairs_path() const { return out_dir / "pairs.jsonl"; }
  fs::path labelable_path() const { return out_dir / "labelable.jsonl"; }
  fs::path sample_path() const { return out_dir / "sample.jsonl"; }
  fs::path stats_path() const { return out_dir / "stats.tsv"; }
  fs::path idf_path() const { return out_dir / "idf.tsv"; }
  fs::path alignments_dir() const { return out_dir / "alignments"; }
  fs::path agreement_path() const { return out_dir / "agreement.tsv"; }
};

namespace detail {

template <typename Fn>
inline void parallel_for(std::size_t count, int jobs, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(count, static_cast<std::size_t>(jobs < 1 ? 1 : jobs));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    threads.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : threads) t.join();
}

}  // namespace detail

struct ExtractSummary {
  std::size_t papers = 0;
  std::size_t extracted = 0;
  std::size_t cached = 0;
  std::size_t failed = 0;
  std::vector<std::string> messages;  // warnings and per-paper failures, in paper order

  bool total_failure() const { return papers > 0 && extracted + cached == 0; }
};

/// Walks the corpus tree and writes one cache file per paper. Idempotent and
/// resumable: papers whose cache file already exists are skipped. Per-paper
/// failures are reported, not fatal.
inline ExtractSummary run_extract(const PipelineConfig& cfg) {
  cfg.validate();
  const auto paper_dirs = scan_corpus(cfg.corpus_root);

  ExtractSummary summary;
  summary.papers = paper_dirs.size();
  struct Slot {
    int status = 0;  // 0 failed, 1 extracted, 2 cached
    std::vector<std::string> messages;
  };
  std::vector<Slot> slots(paper_dirs.size());

  detail::parallel_for(paper_dirs.size(), cfg.jobs, [&](std::size_t i) {
    Slot& slot = slots[i];
    const fs::path& dir = paper_dirs[i];
    try {
      PaperMeta meta = load_metadata(read_file(dir / "metadata.json"));
      const fs::path cache = cfg.extracted_dir() / (meta.paper_id + ".json");
      if (fs::exists(cache)) {
        slot.status = 2;
        return;
      }
      RawPaper raw = load_raw_paper(dir);
      ExtractedPaper extracted = extract_paper(raw);
      for (const auto& w : extracted.warnings)
        slot.messages.push_back(meta.paper_id + ": warning: " + w);
      write_file(cache, serialize_extracted(extracted));
      slot.status = 1;
    } catch (const std::exception& e) {
      slot.status = 0;
      slot.messages.push_back(dir.filename().string() + ": failed: " + e.what());
    }
  });

  for (const auto& slot : slots) {
    if (slot.status == 1) ++summary.extracted;
    else if (slot.status == 2) ++summary.cached;
    else ++summary.failed;
    summary.messages.insert(summary.messages.end(), slot.messages.begin(), slot.messages.end());
  }
  return summary;
}

inline std::vector<ExtractedPaper> load_extracted(const PipelineConfig& cfg) {
  std::vector<fs::path> files;
  if (fs::is_directory(cfg.extracted_dir())) {
    for (const auto& entry : fs::directory_iterator(cfg.extracted_dir())) {
      if (entry.is_regular_file() && entry.path().extension() == ".json")
        files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw EmptyCorpus();
  std::vector<ExtractedPaper> papers;
  papers.reserve(files.size());
  for (const auto& f : files) papers.push_back(parse_extracted(read_file(f)));
  return papers;
}

inline PaperSummary summarize_paper(const ExtractedPaper& paper) {
  PaperSummary s;
  s.paper_id = paper.meta.paper_id;
  s.primary_category = paper.meta.primary_category();
  s.author_count = paper.meta.author_count;
  s.version_count = paper.meta.versions.size();
  s.v1_sentence_count = paper.first.sentence_count();
  s.changed = paper.meta.multi_version() && paper.changed();
  return s;
}

/// Aligns first vs last version of one paper and classifies every link and
/// deletion. Pair indices are document-global sentence ordinals; section
/// attribution follows the v1 sentence.
inline std::vector<RevisionPair> paper_pairs(const ExtractedPaper& paper, const IdfModel& idf,
                                             const PipelineConfig& cfg,
                                             std::vector<SentenceLink>* link_dump = nullptr) {
  std::vector<RevisionPair> out;
  if (!paper.meta.multi_version()) return out;
  const Document& v1 = paper.first;
  const Document& v2 = paper.last;

  // Global sentence ordinal of (section, sentence) per document.
  auto global_base = [](const Document& d) {
    std::vector<std::size_t> base(d.sections.size() + 1, 0);
    for (std::size_t i = 0; i < d.sections.size(); ++i)
      base[i + 1] = base[i] + d.sections[i].sentences.size();
    return base;
  };
  const auto base1 = global_base(v1);
  const auto base2 = global_base(v2);

  for (const auto& group : align_sections(v1, v2).groups) {
    std::vector<Sentence> s1, s2;
    std::vector<std::pair<std::size_t, std::size_t>> origin1;  // (section, global index)
    std::vector<std::size_t> origin2;                          // global index
    for (std::size_t sec : group.v1)
      for (const auto& sent : v1.sections[sec].sentences) {
        origin1.emplace_back(sec, base1[sec] + sent.index);
        s1.push_back(sent);
      }
    for (std::size_t sec : group.v2)
      for (const auto& sent : v2.sections[sec].sentences) {
        origin2.push_back(base2[sec] + sent.index);
        s2.push_back(sent);
      }

    std::vector<std::vector<std::string>> t1, t2;
    t1.reserve(s1.size());
    t2.reserve(s2.size());
    for (const auto& s : s1) t1.push_back(s.tokens);
    for (const auto& s : s2) t2.push_back(s.tokens);

    const Alignment alignment = align_sentences(t1, t2, idf, cfg.mismatch_penalty);
    if (link_dump) {
      for (const auto& l : alignment.links)
        link_dump->push_back({origin1[l.v1_index].second, origin2[l.v2_index], l.sim});
    }
    for (auto& pair : classify_alignment(alignment, s1, s2,
                                         static_cast<std::size_t>(cfg.typo_edit_distance))) {
      const auto& [sec, global] = origin1[pair.v1_index];
      pair.paper_id = paper.meta.paper_id;
      pair.section_title = v1.sections[sec].raw_title;
      pair.position = v1.sections[sec].position;
      pair.v1_index = global;
      if (pair.v2_index) pair.v2_index = origin2[*pair.v2_index];
      out.push_back(std::move(pair));
    }
  }
  return out;
}

struct PairsSummary {
  ExtractSummary extract;  // populated when extraction auto-ran
  std::size_t papers = 0;
  std::size_t aligned_papers = 0;
  std::size_t deletions = 0;
  std::size_t typos = 0;
  std::size_t rewrites = 0;
  std::size_t unchanged = 0;
  std::size_t labelable = 0;
};

/// Builds idf, aligns first vs last version per paper, classifies, and
/// writes pairs.jsonl plus the filtered labelable.jsonl.
inline PairsSummary run_pairs(const PipelineConfig& cfg) {
  cfg.validate();
  PairsSummary summary;
  if (!fs::is_directory(cfg.extracted_dir()) || fs::is_empty(cfg.extracted_dir())) {
    summary.extract = run_extract(cfg);
    if (summary.extract.total_failure()) return summary;
  }
  const auto papers = load_extracted(cfg);
  summary.papers = papers.size();

  std::vector<Document> first_versions;
  first_versions.reserve(papers.size());
  for (const auto& p : papers) first_versions.push_back(p.first);
  const IdfModel idf = build_idf(first_versions);
  {
    std::ostringstream ss;
    idf.save(ss);
    write_file(cfg.idf_path(), ss.str());
  }

  std::vector<std::vector<RevisionPair>> per_paper(papers.size());
  std::vector<std::vector<SentenceLink>> per_paper_links(papers.size());
  std::vector<std::string> worker_errors(papers.size());
  detail::parallel_for(papers.size(), cfg.jobs, [&](std::size_t i) {
    try {
      per_paper[i] = paper_pairs(papers[i], idf, cfg,
                                 cfg.dump_alignments ? &per_paper_links[i] : nullptr);
    } catch (const std::exception& e) {
      worker_errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < papers.size(); ++i) {
    if (!worker_errors[i].empty())
      throw Error(papers[i].meta.paper_id + ": " + worker_errors[i]);
  }

  std::vector<RevisionPair> all_pairs;
  for (std::size_t i = 0; i < papers.size(); ++i) {
    if (papers[i].meta.multi_version()) ++summary.aligned_papers;
    for (auto& p : per_paper[i]) {
      switch (p.rtype) {
        case RevisionType::Deletion: ++summary.deletions; break;
        case RevisionType::Typo: ++summary.typos; break;
        case RevisionType::Rewrite: ++summary.rewrites; break;
        case RevisionType::Unchanged: ++summary.unchanged; break;
      }
      all_pairs.push_back(std::move(p));
    }
    if (cfg.dump_alignments) {
      std::ostringstream ss;
      write_alignment_dump(ss, per_paper_links[i]);
      write_file(cfg.alignments_dir() / (papers[i].meta.paper_id + ".jsonl"), ss.str());
    }
  }

  {
    std::ostringstream ss;
    write_pairs(ss, all_pairs);
    write_file(cfg.pairs_path(), ss.str());
  }
  const auto labelable =
      filter_labelable(all_pairs, cfg.sim_threshold, cfg.labelable_positions);
  summary.labelable = labelable.size();
  {
    std::ostringstream ss;
    write_pairs(ss, labelable);
    write_file(cfg.labelable_path(), ss.str());
  }
  return summary;
}

/// Reads pairs.jsonl plus the extraction cache and writes stats.tsv.
inline void run_stats(const PipelineConfig& cfg) {
  cfg.validate();
  if (!fs::exists(cfg.pairs_path())) throw MissingPairs(cfg.pairs_path().string());
  std::ifstream in(cfg.pairs_path());
  const auto pairs = read_pairs(in);
  const auto papers = load_extracted(cfg);
  std::vector<PaperSummary> summaries;
  summaries.reserve(papers.size());
  for (const auto& p : papers) summaries.push_back(summarize_paper(p));
  std::ostringstream ss;
  write_stats_tsv(ss, summaries, pairs);
  write_file(cfg.stats_path(), ss.str());
}

/// Samples the labelable subset without replacement, deterministically.
inline std::size_t run_sample(const PipelineConfig& cfg) {
  cfg.validate();
  if (!fs::exists(cfg.labelable_path())) throw MissingPairs(cfg.labelable_path().string());
  std::ifstream in(cfg.labelable_path());
  const auto pairs = read_pairs(in);
  const auto sampled = sample_pairs(pairs, cfg.sample_n, cfg.seed);
  std::ostringstream ss;
  write_pairs(ss, sampled);
  write_file(cfg.sample_path(), ss.str());
  return sampled.size();
}

/// Ingests a completed label CSV and writes the agreement TSV.
inline AgreementReport run_agreement(const fs::path& labels_csv, const PipelineConfig& cfg) {
  cfg.validate();
  std::ifstream in(labels_csv);
  if (!in) throw Error("cannot read " + labels_csv.string());
  const auto records = parse_labels_csv(in);
  const auto matrix = LabelMatrix::from_records(records);
  const auto report = analyze_agreement(matrix, cfg.majority_threshold);
  if (!cfg.out_dir.empty()) {
    std::ostringstream ss;
    write_agreement_tsv(ss, report);
    write_file(cfg.agreement_path(), ss.str());
  }
  return report;
}

}  // namespace revmine
