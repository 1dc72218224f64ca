#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "revmine/classify.hpp"
#include "revmine/document.hpp"

namespace revmine {

/// Per-paper facts the statistics need beyond the pairs themselves.
struct PaperSummary {
  std::string paper_id;
  std::string primary_category;
  int author_count = 1;
  std::size_t version_count = 1;
  std::size_t v1_sentence_count = 0;
  bool changed = false;  // extracted first-version text differs from the last
};

inline bool is_revision(RevisionType t) {
  return t == RevisionType::Deletion || t == RevisionType::Typo || t == RevisionType::Rewrite;
}

/// Counts indexed Deletion=0, Typo=1, Rewrite=2.
using TypeCounts = std::array<std::uint64_t, 3>;

inline std::size_t type_slot(RevisionType t) {
  switch (t) {
    case RevisionType::Deletion: return 0;
    case RevisionType::Typo: return 1;
    default: return 2;
  }
}

/// Figure 1a analogue: changes per section position; Abstract folds into
/// Introduction.
struct PositionHistogram {
  TypeCounts introduction{};
  TypeCounts middle{};
  TypeCounts conclusion{};
};

inline PositionHistogram position_histogram(const std::vector<RevisionPair>& pairs) {
  PositionHistogram h;
  for (const auto& p : pairs) {
    if (!is_revision(p.rtype)) continue;
    TypeCounts* row = nullptr;
    switch (p.position) {
      case Position::Abstract:
      case Position::Introduction: row = &h.introduction; break;
      case Position::Middle: row = &h.middle; break;
      case Position::Conclusion: row = &h.conclusion; break;
    }
    ++(*row)[type_slot(p.rtype)];
  }
  return h;
}

/// Figures 1b/1c analogue: per-category change counts and first-version
/// sentence totals (for changes-per-sentence rates).
struct CategoryRow {
  std::string category;
  TypeCounts counts{};
  std::uint64_t sentences = 0;

  std::uint64_t total() const { return counts[0] + counts[1] + counts[2]; }
  double rate() const {
    return sentences == 0 ? 0.0 : static_cast<double>(total()) / static_cast<double>(sentences);
  }
};

inline std::vector<CategoryRow> category_stats(const std::vector<PaperSummary>& papers,
                                               const std::vector<RevisionPair>& pairs) {
  std::map<std::string, CategoryRow> rows;
  std::map<std::string, std::string> paper_category;
  for (const auto& p : papers) {
    paper_category[p.paper_id] = p.primary_category;
    auto& row = rows[p.primary_category];
    row.category = p.primary_category;
    row.sentences += p.v1_sentence_count;
  }
  for (const auto& p : pairs) {
    if (!is_revision(p.rtype)) continue;
    auto it = paper_category.find(p.paper_id);
    if (it == paper_category.end()) continue;
    ++rows[it->second].counts[type_slot(p.rtype)];
  }
  std::vector<CategoryRow> out;
  out.reserve(rows.size());
  for (auto& [_, row] : rows) out.push_back(std::move(row));
  return out;  // lexicographic by category
}

/// Top-k rows under `key` (descending); equal keys break lexicographically.
template <typename Key>
inline std::vector<CategoryRow> top_categories(std::vector<CategoryRow> rows, std::size_t k,
                                               Key key) {
  std::stable_sort(rows.begin(), rows.end(), [&](const CategoryRow& a, const CategoryRow& b) {
    auto ka = key(a), kb = key(b);
    if (ka != kb) return ka > kb;
    return a.category < b.category;
  });
  if (rows.size() > k) rows.resize(k);
  return rows;
}

/// Figure 2 analogue: per author-count bucket, mean and standard error of
/// change counts and of changed-sentence percentages. Buckets cap at `cap`
/// ("5+"). Standard error = sample stddev / sqrt(n); 0 when n = 1.
struct AuthorGroup {
  int bucket = 1;  // cap value means "cap+"
  std::size_t papers = 0;
  double mean_changes = 0.0;
  double stderr_changes = 0.0;
  double mean_pct_changed = 0.0;
  double stderr_pct_changed = 0.0;
};

namespace detail {

inline std::pair<double, double> mean_stderr(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double stddev = std::sqrt(ss / (n - 1.0));
  return {mean, stddev / std::sqrt(n)};
}

}  // namespace detail

inline std::vector<AuthorGroup> author_stats(const std::vector<PaperSummary>& papers,
                                             const std::vector<RevisionPair>& pairs,
                                             int cap = 5) {
  std::map<std::string, std::uint64_t> changes_by_paper;
  for (const auto& p : pairs)
    if (is_revision(p.rtype)) ++changes_by_paper[p.paper_id];

  // Only multi-version papers can revise; single-version papers are excluded.
  std::map<int, std::vector<std::pair<double, double>>> groups;  // bucket -> (changes, pct)
  for (const auto& p : papers) {
    if (p.version_count < 2) continue;
    const int bucket = std::min(p.author_count, cap);
    auto it = changes_by_paper.find(p.paper_id);
    const double changes = it == changes_by_paper.end() ? 0.0 : static_cast<double>(it->second);
    const double pct =
        p.v1_sentence_count == 0 ? 0.0 : changes / static_cast<double>(p.v1_sentence_count);
    groups[bucket].emplace_back(changes, pct);
  }

  std::vector<AuthorGroup> out;
  for (const auto& [bucket, values] : groups) {
    std::vector<double> changes, pcts;
    for (const auto& [c, p] : values) {
      changes.push_back(c);
      pcts.push_back(p);
    }
    AuthorGroup g;
    g.bucket = bucket;
    g.papers = values.size();
    std::tie(g.mean_changes, g.stderr_changes) = detail::mean_stderr(changes);
    std::tie(g.mean_pct_changed, g.stderr_pct_changed) = detail::mean_stderr(pcts);
    out.push_back(g);
  }
  return out;
}

/// §1/§3 analogue counts.
struct VersionCounts {
  std::size_t papers = 0;
  std::size_t multi_version = 0;
  double multi_version_rate = 0.0;
  std::size_t changed_papers = 0;  // extracted v1 differs from final version
};

inline VersionCounts version_counts(const std::vector<PaperSummary>& papers) {
  VersionCounts vc;
  vc.papers = papers.size();
  for (const auto& p : papers) {
    if (p.version_count >= 2) ++vc.multi_version;
    if (p.changed) ++vc.changed_papers;
  }
  vc.multi_version_rate =
      vc.papers == 0 ? 0.0 : static_cast<double>(vc.multi_version) / static_cast<double>(vc.papers);
  return vc;
}

namespace detail {

inline std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", x);
  return buf;
}

}  // namespace detail

/// Emits the full stats report: one TSV table per figure analogue, each
/// opened by a header row naming the figure, blank-line separated.
inline void write_stats_tsv(std::ostream& os, const std::vector<PaperSummary>& papers,
                            const std::vector<RevisionPair>& pairs, std::size_t top_k = 5,
                            int author_cap = 5) {
  const auto hist = position_histogram(pairs);
  os << "fig1a\n";
  os << "position\tdeletion\ttypo\trewrite\n";
  auto row = [&](const char* name, const TypeCounts& c) {
    os << name << "\t" << c[0] << "\t" << c[1] << "\t" << c[2] << "\n";
  };
  row("introduction", hist.introduction);
  row("middle", hist.middle);
  row("conclusion", hist.conclusion);
  os << "\n";

  const auto categories = category_stats(papers, pairs);
  os << "fig1b\n";
  os << "category\tdeletion\ttypo\trewrite\ttotal\n";
  for (const auto& r :
       top_categories(categories, top_k, [](const CategoryRow& r) { return r.total(); })) {
    os << r.category << "\t" << r.counts[0] << "\t" << r.counts[1] << "\t" << r.counts[2] << "\t"
       << r.total() << "\n";
  }
  os << "\n";

  os << "fig1c\n";
  os << "category\tchanges\tsentences\trate\n";
  for (const auto& r :
       top_categories(categories, top_k, [](const CategoryRow& r) { return r.rate(); })) {
    os << r.category << "\t" << r.total() << "\t" << r.sentences << "\t"
       << detail::fixed6(r.rate()) << "\n";
  }
  os << "\n";

  const auto authors = author_stats(papers, pairs, author_cap);
  auto bucket_name = [author_cap](int b) {
    return b >= author_cap ? std::to_string(author_cap) + "+" : std::to_string(b);
  };
  os << "fig2a\n";
  os << "authors\tpapers\tmean_changes\tstderr\n";
  for (const auto& g : authors)
    os << bucket_name(g.bucket) << "\t" << g.papers << "\t" << detail::fixed6(g.mean_changes)
       << "\t" << detail::fixed6(g.stderr_changes) << "\n";
  os << "\n";

  os << "fig2b\n";
  os << "authors\tpapers\tmean_pct_changed\tstderr\n";
  for (const auto& g : authors)
    os << bucket_name(g.bucket) << "\t" << g.papers << "\t" << detail::fixed6(g.mean_pct_changed)
       << "\t" << detail::fixed6(g.stderr_pct_changed) << "\n";
  os << "\n";

  const auto vc = version_counts(papers);
  os << "counts\n";
  os << "papers\t" << vc.papers << "\n";
  os << "multi_version\t" << vc.multi_version << "\n";
  os << "multi_version_rate\t" << detail::fixed6(vc.multi_version_rate) << "\n";
  os << "changed_papers\t" << vc.changed_papers << "\n";
}

}  // namespace revmine
