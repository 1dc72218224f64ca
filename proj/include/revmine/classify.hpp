#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "revmine/align.hpp"
#include "revmine/document.hpp"
#include "revmine/errors.hpp"
#include "revmine/lexical.hpp"
#include "revmine/text.hpp"

namespace revmine {

enum class RevisionType { Deletion, Typo, Rewrite, Unchanged };

inline std::string_view to_string(RevisionType t) {
  switch (t) {
    case RevisionType::Deletion: return "deletion";
    case RevisionType::Typo: return "typo";
    case RevisionType::Rewrite: return "rewrite";
    case RevisionType::Unchanged: return "unchanged";
  }
  return "unchanged";
}

inline RevisionType revision_type_from_string(std::string_view s) {
  if (s == "deletion") return RevisionType::Deletion;
  if (s == "typo") return RevisionType::Typo;
  if (s == "rewrite") return RevisionType::Rewrite;
  if (s == "unchanged") return RevisionType::Unchanged;
  throw Error("unknown revision type: " + std::string(s));
}

/// Maximal run of non-common tokens between LCS anchors; the two runs are
/// paired positionally and never both empty.
struct ChangedSpan {
  std::vector<std::string> v1_run;
  std::vector<std::string> v2_run;
};

/// Token-level LCS diff: common tokens anchor, uncommon runs pair up.
inline std::vector<ChangedSpan> diff_spans(const std::vector<std::string>& a,
                                           const std::vector<std::string>& b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::vector<std::size_t>> dp(n + 1, std::vector<std::size_t>(m + 1, 0));
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j)
      dp[i][j] = a[i - 1] == b[j - 1] ? dp[i - 1][j - 1] + 1
                                      : std::max(dp[i - 1][j], dp[i][j - 1]);

  std::vector<std::pair<std::size_t, std::size_t>> anchors;
  for (std::size_t i = n, j = m; i > 0 && j > 0;) {
    if (a[i - 1] == b[j - 1]) {
      anchors.emplace_back(i - 1, j - 1);
      --i, --j;
    } else if (dp[i - 1][j] >= dp[i][j - 1]) {
      --i;
    } else {
      --j;
    }
  }
  std::reverse(anchors.begin(), anchors.end());

  std::vector<ChangedSpan> spans;
  std::size_t pa = 0, pb = 0;
  auto emit = [&](std::size_t ea, std::size_t eb) {
    if (ea == pa && eb == pb) return;
    ChangedSpan span;
    span.v1_run.assign(a.begin() + static_cast<std::ptrdiff_t>(pa),
                       a.begin() + static_cast<std::ptrdiff_t>(ea));
    span.v2_run.assign(b.begin() + static_cast<std::ptrdiff_t>(pb),
                       b.begin() + static_cast<std::ptrdiff_t>(eb));
    spans.push_back(std::move(span));
  };
  for (const auto& [ia, ib] : anchors) {
    emit(ia, ib);
    pa = ia + 1;
    pb = ib + 1;
  }
  emit(n, m);
  return spans;
}

/// Typo iff every changed span has character edit distance below the
/// threshold; runs are joined with single spaces before measuring. The pair
/// is diffed in a canonical order so the result is symmetric even when the
/// token LCS is ambiguous.
inline RevisionType classify_pair(const std::vector<std::string>& a,
                                  const std::vector<std::string>& b,
                                  std::size_t typo_threshold = 3) {
  if (a == b) return RevisionType::Unchanged;
  const bool flip = b < a;
  const auto& x = flip ? b : a;
  const auto& y = flip ? a : b;
  for (const auto& span : diff_spans(x, y)) {
    if (edit_distance(join_tokens(span.v1_run), join_tokens(span.v2_run)) >= typo_threshold)
      return RevisionType::Rewrite;
  }
  return RevisionType::Typo;
}

/// One aligned (or deleted) v1 sentence with its classification. Deletion
/// pairs have no v2 fields; paper/section attribution follows the v1 side
/// and is stamped by the pipeline.
struct RevisionPair {
  std::string paper_id;
  std::string section_title;
  Position position = Position::Middle;
  RevisionType rtype = RevisionType::Unchanged;
  std::size_t v1_index = 0;
  std::optional<std::size_t> v2_index;
  std::string v1_text;
  std::string v2_text;
  std::optional<double> similarity;
};

/// Maps an alignment onto revision pairs: deleted v1 sentences become
/// Deletion pairs, links are classified, added v2 sentences are not emitted
/// (the taxonomy has no insertion class). Output ascends in v1 index.
inline std::vector<RevisionPair> classify_alignment(const Alignment& alignment,
                                                    const std::vector<Sentence>& v1,
                                                    const std::vector<Sentence>& v2,
                                                    std::size_t typo_threshold = 3) {
  std::vector<RevisionPair> pairs;
  auto link_it = alignment.links.begin();
  std::set<std::size_t> deleted(alignment.deleted_v1.begin(), alignment.deleted_v1.end());
  for (std::size_t i = 0; i < v1.size(); ++i) {
    if (deleted.count(i)) {
      RevisionPair p;
      p.rtype = RevisionType::Deletion;
      p.v1_index = i;
      p.v1_text = v1[i].text;
      pairs.push_back(std::move(p));
      continue;
    }
    if (link_it != alignment.links.end() && link_it->v1_index == i) {
      RevisionPair p;
      p.rtype = classify_pair(v1[i].tokens, v2[link_it->v2_index].tokens, typo_threshold);
      p.v1_index = i;
      p.v2_index = link_it->v2_index;
      p.v1_text = v1[i].text;
      p.v2_text = v2[link_it->v2_index].text;
      p.similarity = link_it->sim;
      pairs.push_back(std::move(p));
      ++link_it;
    }
  }
  return pairs;
}

/// Labelable subset: matched changed pairs with similarity strictly above
/// the threshold, from the allowed section positions.
inline std::vector<RevisionPair> filter_labelable(
    const std::vector<RevisionPair>& pairs, double sim_threshold = 0.5,
    const std::set<Position>& positions = {Position::Abstract, Position::Introduction}) {
  std::vector<RevisionPair> out;
  for (const auto& p : pairs) {
    if (p.rtype != RevisionType::Typo && p.rtype != RevisionType::Rewrite) continue;
    if (!p.similarity || !(*p.similarity > sim_threshold)) continue;
    if (!positions.count(p.position)) continue;
    out.push_back(p);
  }
  return out;
}

namespace detail {

// Rejection-sampled bounded draw on top of mt19937_64; the standard pins the
// engine's output so samples are reproducible across standard libraries.
inline std::uint64_t bounded_rand(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace detail

/// Uniform sample without replacement, deterministic for a given seed.
/// Output keeps the input's relative order.
inline std::vector<RevisionPair> sample_pairs(const std::vector<RevisionPair>& pairs,
                                              std::size_t n, std::uint64_t seed) {
  if (n > pairs.size()) throw SampleTooLarge(n, pairs.size());
  std::vector<std::size_t> indices(pairs.size());
  for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t k = i + static_cast<std::size_t>(
                            detail::bounded_rand(rng, indices.size() - i));
    std::swap(indices[i], indices[k]);
  }
  indices.resize(n);
  std::sort(indices.begin(), indices.end());
  std::vector<RevisionPair> out;
  out.reserve(n);
  for (std::size_t idx : indices) out.push_back(pairs[idx]);
  return out;
}

}  // namespace revmine
