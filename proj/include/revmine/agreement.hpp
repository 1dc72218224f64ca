#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "revmine/errors.hpp"
#include "revmine/text.hpp"

namespace revmine {

/// §4 label set, fixed category order for the count matrix.
enum class StrengthLabel { Stronger = 0, Weaker = 1, NoStrengthChange = 2, CantTell = 3 };

inline constexpr std::size_t kLabelCount = 4;

inline std::string_view to_string(StrengthLabel l) {
  switch (l) {
    case StrengthLabel::Stronger: return "stronger";
    case StrengthLabel::Weaker: return "weaker";
    case StrengthLabel::NoStrengthChange: return "no_change";
    case StrengthLabel::CantTell: return "cant_tell";
  }
  return "cant_tell";
}

inline std::optional<StrengthLabel> strength_label_from_string(std::string_view s) {
  const std::string lower = to_lower(s);
  if (lower == "stronger") return StrengthLabel::Stronger;
  if (lower == "weaker") return StrengthLabel::Weaker;
  if (lower == "no_change") return StrengthLabel::NoStrengthChange;
  if (lower == "cant_tell") return StrengthLabel::CantTell;
  return std::nullopt;
}

struct LabelRecord {
  std::string pair_id;
  std::string labeler_id;
  StrengthLabel label = StrengthLabel::CantTell;
};

/// Per-pair category counts with a constant rater count r >= 2, as Fleiss'
/// kappa requires. Rows keep first-appearance order.
class LabelMatrix {
 public:
  struct Row {
    std::string pair_id;
    std::array<std::uint64_t, kLabelCount> counts{};
  };

  /// Groups records by pair; rejects duplicate (pair, labeler) records and
  /// ragged rater counts rather than imputing.
  static LabelMatrix from_records(const std::vector<LabelRecord>& records) {
    LabelMatrix m;
    std::map<std::string, std::size_t> row_of;
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& rec : records) {
      if (!seen.insert({rec.pair_id, rec.labeler_id}).second)
        throw LabelIngestError("duplicate label for pair '" + rec.pair_id + "' by labeler '" +
                               rec.labeler_id + "'");
      auto [it, inserted] = row_of.try_emplace(rec.pair_id, m.rows_.size());
      if (inserted) m.rows_.push_back({rec.pair_id, {}});
      ++m.rows_[it->second].counts[static_cast<std::size_t>(rec.label)];
    }
    if (m.rows_.empty()) throw LabelIngestError("no label records");
    std::uint64_t r = 0;
    for (const auto& row : m.rows_) {
      std::uint64_t total = 0;
      for (auto c : row.counts) total += c;
      if (r == 0) r = total;
      if (total != r)
        throw LabelIngestError("ragged rater count for pair '" + row.pair_id + "': expected " +
                               std::to_string(r) + ", got " + std::to_string(total));
    }
    if (r < 2) throw LabelIngestError("need at least 2 raters per pair, got " + std::to_string(r));
    m.raters_ = r;
    return m;
  }

  static LabelMatrix from_rows(std::vector<Row> rows, std::uint64_t raters) {
    LabelMatrix m;
    m.rows_ = std::move(rows);
    m.raters_ = raters;
    return m;
  }

  const std::vector<Row>& rows() const { return rows_; }
  std::uint64_t raters() const { return raters_; }

 private:
  std::vector<Row> rows_;
  std::uint64_t raters_ = 0;
};

/// CSV with header `pair_id,labeler_id,label`; errors carry the row number.
inline std::vector<LabelRecord> parse_labels_csv(std::istream& is) {
  std::vector<LabelRecord> records;
  std::string line;
  std::size_t row = 0;
  auto split3 = [](const std::string& s) -> std::optional<std::array<std::string, 3>> {
    auto c1 = s.find(',');
    if (c1 == std::string::npos) return std::nullopt;
    auto c2 = s.find(',', c1 + 1);
    if (c2 == std::string::npos || s.find(',', c2 + 1) != std::string::npos) return std::nullopt;
    return std::array<std::string, 3>{s.substr(0, c1), s.substr(c1 + 1, c2 - c1 - 1),
                                      s.substr(c2 + 1)};
  };
  while (std::getline(is, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split3(line);
    if (!fields)
      throw LabelIngestError("row " + std::to_string(row) + ": expected 3 comma-separated fields");
    if (row == 1) {
      if (to_lower((*fields)[0]) != "pair_id" || to_lower((*fields)[1]) != "labeler_id" ||
          to_lower((*fields)[2]) != "label")
        throw LabelIngestError("row 1: expected header pair_id,labeler_id,label");
      continue;
    }
    auto label = strength_label_from_string((*fields)[2]);
    if (!label)
      throw LabelIngestError("row " + std::to_string(row) + ": unknown label '" + (*fields)[2] +
                             "'");
    if ((*fields)[0].empty() || (*fields)[1].empty())
      throw LabelIngestError("row " + std::to_string(row) + ": empty pair_id or labeler_id");
    records.push_back({(*fields)[0], (*fields)[1], *label});
  }
  if (row == 0) throw LabelIngestError("empty label file");
  return records;
}

/// Fleiss' kappa with the fixed-rater-count construction:
///   P_i = (sum_k n_ik^2 - r) / (r(r-1)),  P-bar = mean_i P_i,
///   p_k = sum_i n_ik / (N r),             Pe-bar = sum_k p_k^2,
///   kappa = (P-bar - Pe-bar) / (1 - Pe-bar).
/// Throws DegenerateAgreement when every rating sits in one category.
inline double fleiss_kappa(const LabelMatrix& matrix) {
  const auto& rows = matrix.rows();
  const double r = static_cast<double>(matrix.raters());
  const double n = static_cast<double>(rows.size());

  std::array<std::uint64_t, kLabelCount> column_totals{};
  double p_bar = 0.0;
  for (const auto& row : rows) {
    double sq = 0.0;
    for (std::size_t k = 0; k < kLabelCount; ++k) {
      sq += static_cast<double>(row.counts[k]) * static_cast<double>(row.counts[k]);
      column_totals[k] += row.counts[k];
    }
    p_bar += (sq - r) / (r * (r - 1.0));
  }
  p_bar /= n;

  const std::uint64_t grand_total = matrix.raters() * rows.size();
  double pe_bar = 0.0;
  for (std::size_t k = 0; k < kLabelCount; ++k) {
    if (column_totals[k] == grand_total) throw DegenerateAgreement();
    const double pk = static_cast<double>(column_totals[k]) / static_cast<double>(grand_total);
    pe_bar += pk * pk;
  }
  return (p_bar - pe_bar) / (1.0 - pe_bar);
}

struct MajorityRow {
  std::string pair_id;
  StrengthLabel label = StrengthLabel::CantTell;
  std::array<std::uint64_t, kLabelCount> counts{};
};

/// Rows where one category reaches the threshold; threshold > r/2 makes the
/// majority label unique.
inline std::vector<MajorityRow> majority_filter(const LabelMatrix& matrix, int threshold = 5) {
  if (threshold <= 0 || 2 * static_cast<std::uint64_t>(threshold) <= matrix.raters())
    throw ThresholdTooLow(threshold, static_cast<int>(matrix.raters()));
  std::vector<MajorityRow> out;
  for (const auto& row : matrix.rows()) {
    for (std::size_t k = 0; k < kLabelCount; ++k) {
      if (row.counts[k] >= static_cast<std::uint64_t>(threshold)) {
        out.push_back({row.pair_id, static_cast<StrengthLabel>(k), row.counts});
        break;
      }
    }
  }
  return out;
}

/// Fraction of the majority subset labeled Stronger or Weaker.
inline double strength_change_rate(const std::vector<MajorityRow>& subset) {
  if (subset.empty()) throw EmptySubset();
  std::uint64_t strength = 0;
  for (const auto& row : subset)
    if (row.label == StrengthLabel::Stronger || row.label == StrengthLabel::Weaker) ++strength;
  return static_cast<double>(strength) / static_cast<double>(subset.size());
}

struct AgreementReport {
  double kappa_full = 0.0;
  std::size_t rows = 0;
  std::uint64_t raters = 0;
  int majority_threshold = 5;
  std::size_t majority_rows = 0;
  std::array<std::uint64_t, kLabelCount> majority_counts{};
  std::optional<double> kappa_majority;    // absent when degenerate/empty
  std::optional<double> strength_rate;     // absent when the subset is empty
};

inline AgreementReport analyze_agreement(const LabelMatrix& matrix, int majority_threshold = 5) {
  AgreementReport report;
  report.rows = matrix.rows().size();
  report.raters = matrix.raters();
  report.majority_threshold = majority_threshold;
  report.kappa_full = fleiss_kappa(matrix);

  const auto subset = majority_filter(matrix, majority_threshold);
  report.majority_rows = subset.size();
  for (const auto& row : subset) ++report.majority_counts[static_cast<std::size_t>(row.label)];
  if (!subset.empty()) {
    report.strength_rate = strength_change_rate(subset);
    std::vector<LabelMatrix::Row> rows;
    rows.reserve(subset.size());
    for (const auto& r : subset) rows.push_back({r.pair_id, r.counts});
    try {
      report.kappa_majority = fleiss_kappa(LabelMatrix::from_rows(std::move(rows), matrix.raters()));
    } catch (const DegenerateAgreement&) {
      report.kappa_majority = std::nullopt;
    }
  }
  return report;
}

/// TSV report; kappas print with 6 decimals, the rate also as a one-decimal
/// percentage ("74.4%").
inline void write_agreement_tsv(std::ostream& os, const AgreementReport& r) {
  char buf[64];
  auto f6 = [&buf](double x) {
    std::snprintf(buf, sizeof(buf), "%.6f", x);
    return std::string(buf);
  };
  os << "metric\tvalue\n";
  os << "rows\t" << r.rows << "\n";
  os << "raters\t" << r.raters << "\n";
  os << "kappa_full\t" << f6(r.kappa_full) << "\n";
  os << "majority_threshold\t" << r.majority_threshold << "\n";
  os << "majority_rows\t" << r.majority_rows << "\n";
  for (std::size_t k = 0; k < kLabelCount; ++k)
    os << "label_" << to_string(static_cast<StrengthLabel>(k)) << "\t" << r.majority_counts[k]
       << "\n";
  os << "kappa_majority\t" << (r.kappa_majority ? f6(*r.kappa_majority) : "na") << "\n";
  os << "strength_change_rate\t" << (r.strength_rate ? f6(*r.strength_rate) : "na") << "\n";
  if (r.strength_rate) {
    std::snprintf(buf, sizeof(buf), "%.1f%%", 100.0 * *r.strength_rate);
    os << "strength_change_pct\t" << buf << "\n";
  } else {
    os << "strength_change_pct\tna\n";
  }
}

}  // namespace revmine
