// Synthetic two-version corpus with planted edits. Content words are unique
// per (paper, section, sentence) so intended links dominate alignment; the
// idf model then gives edits similarity well above both thresholds.
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "revmine/classify.hpp"

namespace fixture {

namespace fs = std::filesystem;

inline constexpr int kPapers = 10;  // p09 is byte-identical across versions

// Sections: 0 abstract (2 sentences), 1 introduction (3), 2 middle (4),
// 3 conclusion (2).
inline constexpr std::array<int, 4> kSectionSentences = {2, 3, 4, 2};

struct Edit {
  int paper;
  int section;
  int sentence;
  revmine::RevisionType kind;
};

inline const std::vector<Edit>& plan() {
  using revmine::RevisionType;
  static const std::vector<Edit> kPlan = {
      {0, 0, 0, RevisionType::Rewrite}, {0, 1, 1, RevisionType::Typo},
      {0, 2, 2, RevisionType::Deletion},
      {1, 1, 0, RevisionType::Deletion}, {1, 2, 1, RevisionType::Rewrite},
      {1, 3, 1, RevisionType::Rewrite},
      {2, 0, 1, RevisionType::Typo},     {2, 2, 0, RevisionType::Deletion},
      {2, 2, 3, RevisionType::Rewrite},
      {3, 1, 2, RevisionType::Rewrite},  {3, 3, 0, RevisionType::Deletion},
      {4, 2, 1, RevisionType::Typo},     {4, 2, 2, RevisionType::Rewrite},
      {4, 0, 0, RevisionType::Deletion},
      {5, 1, 1, RevisionType::Rewrite},  {5, 1, 2, RevisionType::Typo},
      {6, 3, 1, RevisionType::Typo},     {6, 2, 3, RevisionType::Deletion},
      {7, 0, 1, RevisionType::Rewrite},  {7, 1, 0, RevisionType::Typo},
      {7, 2, 0, RevisionType::Rewrite},
      {8, 2, 2, RevisionType::Typo},     {8, 3, 0, RevisionType::Rewrite},
      {8, 1, 1, RevisionType::Deletion},
  };
  return kPlan;
}

inline const std::array<int, kPapers>& author_counts() {
  static const std::array<int, kPapers> kAuthors = {1, 1, 2, 2, 3, 3, 4, 5, 6, 1};
  return kAuthors;
}

inline std::string category_of(int paper) {
  static const char* kCats[3] = {"math.CO", "cs.CL", "stat.ME"};
  return kCats[paper % 3];
}

inline std::string paper_id(int paper) {
  return "p0" + std::to_string(paper);
}

inline std::string unique_word(int paper, int section, int sentence, int slot) {
  std::string w = "w";
  w += static_cast<char>('a' + paper);
  w += static_cast<char>('a' + section);
  w += static_cast<char>('a' + sentence);
  w += static_cast<char>('a' + slot);
  return w;
}

inline std::string base_sentence(int paper, int section, int sentence) {
  return "We note that " + unique_word(paper, section, sentence, 0) + " " +
         unique_word(paper, section, sentence, 1) + " holds for " +
         unique_word(paper, section, sentence, 2) + " under " +
         unique_word(paper, section, sentence, 3) + " conditions.";
}

// The v2 text of one sentence under the plan; empty string means deleted.
inline std::string revised_sentence(int paper, int section, int sentence) {
  std::string text = base_sentence(paper, section, sentence);
  for (const auto& e : plan()) {
    if (e.paper != paper || e.section != section || e.sentence != sentence) continue;
    switch (e.kind) {
      case revmine::RevisionType::Deletion:
        return "";
      case revmine::RevisionType::Typo: {
        auto pos = text.find(" holds ");
        text = text.substr(0, pos) + " holsd " + text.substr(pos + 7);
        return text;
      }
      case revmine::RevisionType::Rewrite: {
        const std::string target = unique_word(paper, section, sentence, 1);
        auto pos = text.find(target);
        text = text.substr(0, pos) + "zzzqqq" + text.substr(pos + target.size());
        return text;
      }
      default:
        break;
    }
  }
  return text;
}

inline std::string tex_source(int paper, bool revised) {
  static const char* kTitles[4] = {nullptr, "Introduction", "Model Analysis", "Conclusion"};
  std::string src;
  for (int section = 0; section < 4; ++section) {
    if (section == 0)
      src += "\\begin{abstract}\n";
    else
      src += "\\section{" + std::string(kTitles[section]) + "}\n";
    for (int k = 0; k < kSectionSentences[static_cast<std::size_t>(section)]; ++k) {
      std::string sentence = revised ? revised_sentence(paper, section, k)
                                     : base_sentence(paper, section, k);
      if (sentence.empty()) continue;
      src += sentence + "\n";
    }
    if (section == 0) src += "\\end{abstract}\n";
  }
  return src;
}

inline void write_corpus(const fs::path& root) {
  for (int p = 0; p < kPapers; ++p) {
    const fs::path dir = root / paper_id(p);
    fs::create_directories(dir / "v1");
    fs::create_directories(dir / "v2");
    std::ofstream meta(dir / "metadata.json");
    meta << "{\"paper_id\":\"" << paper_id(p) << "\",\"author_count\":"
         << author_counts()[static_cast<std::size_t>(p)] << ",\"categories\":[\""
         << category_of(p) << "\"],\"versions\":[\"v1\",\"v2\"]}\n";
    std::ofstream v1(dir / "v1" / "main.tex");
    v1 << tex_source(p, false);
    std::ofstream v2(dir / "v2" / "main.tex");
    v2 << tex_source(p, true);  // p09 has no edits: byte-identical to v1
  }
}

// Planted counts summed from the plan: row 0 = introduction (abstract
// folded in), 1 = middle, 2 = conclusion; column = deletion, typo, rewrite.
inline std::array<std::array<std::uint64_t, 3>, 3> expected_position_counts() {
  std::array<std::array<std::uint64_t, 3>, 3> counts{};
  for (const auto& e : plan()) {
    const std::size_t row = e.section <= 1 ? 0u : (e.section == 2 ? 1u : 2u);
    std::size_t col = 0;
    switch (e.kind) {
      case revmine::RevisionType::Deletion: col = 0; break;
      case revmine::RevisionType::Typo: col = 1; break;
      default: col = 2; break;
    }
    ++counts[row][col];
  }
  return counts;
}

inline std::map<std::string, std::uint64_t> expected_changes_per_paper() {
  std::map<std::string, std::uint64_t> out;
  for (int p = 0; p < kPapers; ++p) out[paper_id(p)] = 0;
  for (const auto& e : plan()) ++out[paper_id(e.paper)];
  return out;
}

inline std::size_t sentences_per_paper() {
  std::size_t n = 0;
  for (int c : kSectionSentences) n += static_cast<std::size_t>(c);
  return n;
}

}  // namespace fixture
