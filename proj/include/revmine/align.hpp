#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "revmine/document.hpp"
#include "revmine/lexical.hpp"

namespace revmine {

/// Macro alignment of sections between two versions.
///
/// Anchored groups are 1-1 exact matches on normalized title (longest common
/// subsequence over the title lists). Unmatched runs between consecutive
/// anchors merge into synthetic catch-all groups so their sentences still
/// reach micro alignment; a one-sided group means whole sections were added
/// or removed.
struct SectionPairing {
  struct Group {
    std::vector<std::size_t> v1;  // section indices in version 1
    std::vector<std::size_t> v2;  // section indices in version 2
    bool anchored = false;
  };
  std::vector<Group> groups;

  std::vector<std::pair<std::size_t, std::size_t>> anchored_pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (const auto& g : groups)
      if (g.anchored) out.emplace_back(g.v1.front(), g.v2.front());
    return out;
  }
  std::vector<std::size_t> unmatched_v1() const {
    std::vector<std::size_t> out;
    for (const auto& g : groups)
      if (!g.anchored) out.insert(out.end(), g.v1.begin(), g.v1.end());
    return out;
  }
  std::vector<std::size_t> unmatched_v2() const {
    std::vector<std::size_t> out;
    for (const auto& g : groups)
      if (!g.anchored) out.insert(out.end(), g.v2.begin(), g.v2.end());
    return out;
  }
};

inline SectionPairing align_sections(const Document& v1, const Document& v2) {
  const std::size_t n = v1.sections.size(), m = v2.sections.size();
  auto title = [](const Document& d, std::size_t i) -> const std::string& {
    return d.sections[i].norm_title;
  };

  // LCS over title sequences, exact equality as the match predicate.
  std::vector<std::vector<std::size_t>> dp(n + 1, std::vector<std::size_t>(m + 1, 0));
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j)
      dp[i][j] = title(v1, i - 1) == title(v2, j - 1)
                     ? dp[i - 1][j - 1] + 1
                     : std::max(dp[i - 1][j], dp[i][j - 1]);

  std::vector<std::pair<std::size_t, std::size_t>> anchors;
  for (std::size_t i = n, j = m; i > 0 && j > 0;) {
    if (title(v1, i - 1) == title(v2, j - 1)) {
      anchors.emplace_back(i - 1, j - 1);
      --i, --j;
    } else if (dp[i - 1][j] >= dp[i][j - 1]) {
      --i;
    } else {
      --j;
    }
  }
  std::reverse(anchors.begin(), anchors.end());

  SectionPairing pairing;
  std::size_t next1 = 0, next2 = 0;
  auto emit_gap = [&](std::size_t end1, std::size_t end2) {
    SectionPairing::Group g;
    for (std::size_t i = next1; i < end1; ++i) g.v1.push_back(i);
    for (std::size_t j = next2; j < end2; ++j) g.v2.push_back(j);
    if (!g.v1.empty() || !g.v2.empty()) pairing.groups.push_back(std::move(g));
  };
  for (const auto& [ai, aj] : anchors) {
    emit_gap(ai, aj);
    pairing.groups.push_back({{ai}, {aj}, true});
    next1 = ai + 1;
    next2 = aj + 1;
  }
  emit_gap(n, m);
  return pairing;
}

struct SentenceLink {
  std::size_t v1_index = 0;
  std::size_t v2_index = 0;
  double sim = 0.0;
};

/// Monotone one-to-one sentence matching with per-link scores.
struct Alignment {
  std::vector<SentenceLink> links;      // strictly increasing in both indices
  std::vector<std::size_t> deleted_v1;  // v1 sentences without a match
  std::vector<std::size_t> added_v2;    // v2 sentences without a match
  double dp_score = 0.0;
};

/// Barzilay-style dynamic program:
///   M(i,j) = max(M(i-1,j), M(i,j-1), M(i-1,j-1) + Sim(i,j) - penalty)
/// with free skips, so a link can only appear when Sim > penalty. Backtrace
/// ties resolve diagonal first, then skip-v2, then skip-v1.
inline Alignment align_sentences(const std::vector<std::vector<std::string>>& v1_tokens,
                                 const std::vector<std::vector<std::string>>& v2_tokens,
                                 const IdfModel& idf, double mismatch_penalty = 0.1) {
  const std::size_t n = v1_tokens.size(), m = v2_tokens.size();
  Alignment out;
  if (n == 0 || m == 0) {
    for (std::size_t i = 0; i < n; ++i) out.deleted_v1.push_back(i);
    for (std::size_t j = 0; j < m; ++j) out.added_v2.push_back(j);
    return out;
  }

  std::vector<double> sim(n * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      sim[i * m + j] = similarity(v1_tokens[i], v2_tokens[j], idf);

  enum Step : std::uint8_t { Link = 0, SkipV2 = 1, SkipV1 = 2 };
  std::vector<double> score((n + 1) * (m + 1), 0.0);
  std::vector<std::uint8_t> step((n + 1) * (m + 1), SkipV1);
  auto at = [m](std::size_t i, std::size_t j) { return i * (m + 1) + j; };

  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const double s = sim[(i - 1) * m + (j - 1)];
      const double diag = score[at(i - 1, j - 1)] + s - mismatch_penalty;
      const double left = score[at(i, j - 1)];  // skip v2 sentence j-1
      const double up = score[at(i - 1, j)];    // skip v1 sentence i-1
      double best;
      std::uint8_t choice;
      if (s > mismatch_penalty && diag >= left && diag >= up) {
        best = diag;
        choice = Link;
      } else if (left >= up) {
        best = left;
        choice = SkipV2;
      } else {
        best = up;
        choice = SkipV1;
      }
      score[at(i, j)] = best;
      step[at(i, j)] = choice;
    }
  }
  out.dp_score = score[at(n, m)];

  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i == 0) {
      out.added_v2.push_back(--j);
    } else if (j == 0) {
      out.deleted_v1.push_back(--i);
    } else {
      switch (step[at(i, j)]) {
        case Link:
          out.links.push_back({i - 1, j - 1, sim[(i - 1) * m + (j - 1)]});
          --i, --j;
          break;
        case SkipV2:
          out.added_v2.push_back(--j);
          break;
        case SkipV1:
          out.deleted_v1.push_back(--i);
          break;
      }
    }
  }
  std::reverse(out.links.begin(), out.links.end());
  std::reverse(out.deleted_v1.begin(), out.deleted_v1.end());
  std::reverse(out.added_v2.begin(), out.added_v2.end());
  return out;
}

}  // namespace revmine
