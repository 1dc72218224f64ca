#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "revmine/errors.hpp"

namespace revmine {

/// Where a section sits in the paper; "middle" covers everything between
/// introduction and conclusion.
enum class Position { Abstract, Introduction, Middle, Conclusion };

inline std::string_view to_string(Position p) {
  switch (p) {
    case Position::Abstract: return "abstract";
    case Position::Introduction: return "introduction";
    case Position::Middle: return "middle";
    case Position::Conclusion: return "conclusion";
  }
  return "middle";
}

inline Position position_from_string(std::string_view s) {
  if (s == "abstract") return Position::Abstract;
  if (s == "introduction") return Position::Introduction;
  if (s == "middle") return Position::Middle;
  if (s == "conclusion") return Position::Conclusion;
  throw Error("unknown position: " + std::string(s));
}

struct Sentence {
  std::size_t index = 0;  // 0-based ordinal within the section
  std::string text;
  std::vector<std::string> tokens;  // tokenize(text)
};

struct Section {
  std::string raw_title;
  std::string norm_title;
  Position position = Position::Middle;
  std::vector<Sentence> sentences;
};

/// One parsed version of one paper.
struct Document {
  std::string paper_id;
  std::string version_label;
  std::vector<Section> sections;

  std::size_t sentence_count() const {
    std::size_t n = 0;
    for (const auto& s : sections) n += s.sentences.size();
    return n;
  }

  /// Flat sentence texts in section order; section titles excluded.
  std::vector<std::string> flat_text() const {
    std::vector<std::string> out;
    out.reserve(sentence_count());
    for (const auto& s : sections)
      for (const auto& sent : s.sentences) out.push_back(sent.text);
    return out;
  }
};

/// Parsed metadata.json header for one paper.
struct PaperMeta {
  std::string paper_id;
  int author_count = 1;
  std::vector<std::string> categories;  // first entry is the primary subarchive
  std::vector<std::string> versions;    // submission order, match directory names

  const std::string& primary_category() const { return categories.front(); }
  bool multi_version() const { return versions.size() >= 2; }
};

/// Raw LaTeX sources of one version.
struct VersionSource {
  std::string label;
  std::vector<std::string> files;  // file contents, sorted by filename
};

/// Metadata plus the raw sources the pipeline reads (first and last version).
struct RawPaper {
  PaperMeta meta;
  std::vector<VersionSource> versions;
};

}  // namespace revmine
