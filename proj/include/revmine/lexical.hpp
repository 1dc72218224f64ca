#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "revmine/document.hpp"
#include "revmine/errors.hpp"
#include "revmine/text.hpp"

namespace revmine {

/// Frozen token -> idf map over a corpus.
///
/// idf(w) = ln((1+N)/(1+df(w))); unseen tokens get ln(1+N); the [MATH]
/// placeholder is pinned to 0 so math regions never contribute to similarity.
/// Scaling idf by a positive constant cancels out of Sim, so the log base is
/// behaviorally irrelevant to alignment.
class IdfModel {
 public:
  IdfModel(std::size_t doc_count, std::map<std::string, std::size_t> df)
      : doc_count_(doc_count), df_(std::move(df)) {}

  double idf(std::string_view token) const {
    if (token == kMathToken) return 0.0;
    auto it = df_.find(std::string(token));
    const double df = it == df_.end() ? 0.0 : static_cast<double>(it->second);
    return std::log((1.0 + static_cast<double>(doc_count_)) / (1.0 + df));
  }

  double idf_sum(const std::vector<std::string>& tokens) const {
    double sum = 0.0;
    for (const auto& t : tokens) sum += idf(t);
    return sum;
  }

  std::size_t doc_count() const { return doc_count_; }
  const std::map<std::string, std::size_t>& df() const { return df_; }

  /// Writes "N=<int>" then one "token<TAB>df" line per token, token-sorted.
  void save(std::ostream& os) const {
    os << "N=" << doc_count_ << "\n";
    for (const auto& [token, df] : df_) os << token << "\t" << df << "\n";
  }

  static IdfModel load(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("N=", 0) != 0)
      throw Error("idf cache: missing N= header");
    std::size_t n = std::stoull(line.substr(2));
    std::map<std::string, std::size_t> df;
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      auto tab = line.find('\t');
      if (tab == std::string::npos) throw Error("idf cache: malformed line: " + line);
      df[line.substr(0, tab)] = std::stoull(line.substr(tab + 1));
    }
    return IdfModel(n, std::move(df));
  }

 private:
  std::size_t doc_count_;
  std::map<std::string, std::size_t> df_;
};

/// Document frequencies at whole-paper granularity: pass one document per
/// paper (its first version); each paper increments df at most once per token.
inline IdfModel build_idf(const std::vector<Document>& first_versions) {
  if (first_versions.empty()) throw EmptyCorpus();
  std::map<std::string, std::size_t> df;
  for (const auto& doc : first_versions) {
    std::set<std::string> seen;
    for (const auto& section : doc.sections)
      for (const auto& sentence : section.sentences)
        seen.insert(sentence.tokens.begin(), sentence.tokens.end());
    for (const auto& token : seen) ++df[token];
  }
  return IdfModel(first_versions.size(), std::move(df));
}

/// Non-negative weight per token; IdfModel::idf is the production choice.
template <typename Fn>
concept TokenWeight = std::invocable<Fn, const std::string&> &&
                      std::convertible_to<std::invoke_result_t<Fn, const std::string&>, double>;

/// Max over common subsequences of the summed weight of matched tokens.
template <TokenWeight WeightFn>
inline double weighted_lcs(const std::vector<std::string>& a,
                           const std::vector<std::string>& b, WeightFn&& weight) {
  const std::size_t n = a.size(), m = b.size();
  if (n == 0 || m == 0) return 0.0;
  std::vector<double> prev(m + 1, 0.0), cur(m + 1, 0.0);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      double best = std::max(prev[j], cur[j - 1]);
      if (a[i - 1] == b[j - 1]) best = std::max(best, prev[j - 1] + weight(a[i - 1]));
      cur[j] = best;
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

inline double weighted_lcs(const std::vector<std::string>& a,
                           const std::vector<std::string>& b, const IdfModel& idf) {
  return weighted_lcs(a, b, [&](const std::string& t) { return idf.idf(t); });
}

/// Sim(i,j) = Weighted-LCS(S_i,S_j) / max(sum idf(S_i), sum idf(S_j)).
/// When both sums are zero the score is 1 for equal token sequences, else 0.
template <TokenWeight WeightFn>
inline double similarity(const std::vector<std::string>& a,
                         const std::vector<std::string>& b, WeightFn&& weight) {
  double sum_a = 0.0, sum_b = 0.0;
  for (const auto& t : a) sum_a += weight(t);
  for (const auto& t : b) sum_b += weight(t);
  const double denom = std::max(sum_a, sum_b);
  if (denom == 0.0) return a == b ? 1.0 : 0.0;
  return weighted_lcs(a, b, weight) / denom;
}

inline double similarity(const std::vector<std::string>& a,
                         const std::vector<std::string>& b, const IdfModel& idf) {
  return similarity(a, b, [&](const std::string& t) { return idf.idf(t); });
}

/// Character-level Levenshtein distance with unit costs.
inline std::size_t edit_distance(std::string_view a, std::string_view b) {
  const std::size_t n = a.size(), m = b.size();
  if (n == 0) return m;
  if (m == 0) return n;
  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

}  // namespace revmine
