#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "revmine/document.hpp"
#include "revmine/errors.hpp"
#include "revmine/text.hpp"

namespace revmine {

/// Lowercase, punctuation removed, whitespace runs collapsed.
inline std::string normalize_title(std::string_view raw) {
  std::string tmp;
  tmp.reserve(raw.size());
  for (char c : raw) {
    if (is_punct(c)) continue;
    tmp.push_back(lower_char(c));
  }
  return collapse_whitespace(tmp);
}

/// Section position from its normalized title and ordinal. Conclusion-like
/// titles only count when the section sits in the last third of the paper.
inline Position classify_position(std::string_view norm_title, std::size_t ordinal,
                                  std::size_t total) {
  auto contains = [&](std::string_view needle) {
    return norm_title.find(needle) != std::string_view::npos;
  };
  if (contains("abstract")) return Position::Abstract;
  if (contains("introduction") || norm_title == "intro") return Position::Introduction;
  const bool last_third = 3 * (ordinal + 1) > 2 * total;
  if (last_third && (contains("conclusion") || contains("concluding") || contains("summary")))
    return Position::Conclusion;
  return Position::Middle;
}

/// Sentence-final abbreviations that must not trigger a split.
inline const std::vector<std::string>& default_abbreviations() {
  static const std::vector<std::string> kGuards = {
      "et al.", "i.e.", "e.g.", "cf.", "vs.", "Fig.", "Figs.",
      "Eq.",    "Eqs.", "Sec.", "Tab.", "Ref.", "Refs.",
  };
  return kGuards;
}

/// Splits extracted body text into sentences. Boundaries are '.', '!', '?'
/// followed by whitespace and a capital letter (or end of text); blank lines
/// always break; guard-list abbreviations suppress splits. Segments keep
/// their original punctuation attachment, whitespace-collapsed.
inline std::vector<Sentence> segment_sentences(
    std::string_view text,
    const std::vector<std::string>& guards = default_abbreviations()) {
  std::vector<Sentence> out;
  auto push = [&](std::string_view raw) {
    std::string collapsed = collapse_whitespace(raw);
    if (collapsed.empty()) return;
    Sentence s;
    s.index = out.size();
    s.text = std::move(collapsed);
    s.tokens = tokenize(s.text);
    out.push_back(std::move(s));
  };

  // Guard comparison is token-based so that "et al." also matches its
  // token-spaced form "et al ." in re-extracted text.
  std::vector<std::vector<std::string>> guard_tokens;
  guard_tokens.reserve(guards.size());
  for (const auto& g : guards) guard_tokens.push_back(tokenize_preserve_case(g));
  auto ends_with_guard = [&](std::string_view seg) {
    const std::size_t tail_len = std::min<std::size_t>(seg.size(), 32);
    const auto tail = tokenize_preserve_case(seg.substr(seg.size() - tail_len));
    for (const auto& g : guard_tokens) {
      if (g.empty() || g.size() > tail.size()) continue;
      if (std::equal(g.begin(), g.end(), tail.end() - static_cast<std::ptrdiff_t>(g.size())))
        return true;
    }
    return false;
  };

  // Paragraphs (blank-line separated) are hard segment boundaries.
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t para_end = pos;
    while (para_end < text.size()) {
      if (text[para_end] == '\n') {
        std::size_t k = para_end + 1;
        while (k < text.size() && (text[k] == ' ' || text[k] == '\t' || text[k] == '\r')) ++k;
        if (k < text.size() && text[k] == '\n') break;  // blank line
      }
      ++para_end;
    }
    std::string para = collapse_whitespace(text.substr(pos, para_end - pos));
    std::size_t start = 0;
    for (std::size_t i = 0; i < para.size(); ++i) {
      char c = para[i];
      if (c != '.' && c != '!' && c != '?') continue;
      bool boundary = false;
      if (i + 1 == para.size()) {
        boundary = true;
      } else if (para[i + 1] == ' ' && i + 2 < para.size() && is_upper(para[i + 2])) {
        boundary = !ends_with_guard(std::string_view(para).substr(start, i + 1 - start));
      }
      if (boundary) {
        push(std::string_view(para).substr(start, i + 1 - start));
        start = i + 1;
      }
    }
    if (start < para.size()) push(std::string_view(para).substr(start));
    pos = para_end;
    while (pos < text.size() && text[pos] == '\n') ++pos;
  }
  return out;
}

namespace detail {

// Tolerant LaTeX scanner. No macro expansion: commands are recognized by
// name, brace groups are matched textually, math regions become [MATH].
class LatexScanner {
 public:
  struct RawSection {
    std::string title;
    std::string text;
  };

  std::vector<RawSection> sections;
  std::vector<std::string> warnings;

  void run(std::string_view src) {
    src_ = src;
    pos_ = 0;
    begin_section("");
    while (pos_ < src_.size()) step();
    flush_section();
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
  RawSection current_;

  static const std::set<std::string>& math_envs() {
    static const std::set<std::string> kEnvs = {
        "math",  "displaymath", "equation", "align",   "eqnarray",
        "gather", "multline",   "alignat",  "flalign",
    };
    return kEnvs;
  }

  static const std::set<std::string>& dropped_envs() {
    static const std::set<std::string> kEnvs = {
        "figure",   "table",    "tabular", "thebibliography", "verbatim",
        "lstlisting", "tikzpicture", "comment", "filecontents", "subfigure",
    };
    return kEnvs;
  }

  // Commands whose single brace argument is discarded.
  static const std::set<std::string>& drop_one_arg() {
    static const std::set<std::string> kCmds = {
        "label",     "ref",      "eqref",    "pageref", "autoref",  "cref",
        "Cref",      "cite",     "citep",    "citet",   "citealp",  "citealt",
        "citeauthor", "citeyear", "newcite",  "shortcite", "footnote",
        "footnotetext", "thanks", "url",      "path",    "includegraphics",
        "graphicspath", "usepackage", "documentclass", "bibliography",
        "bibliographystyle", "input", "include", "vspace", "hspace",
        "pagestyle", "thispagestyle", "title", "author", "date", "caption",
        "captionof", "hypersetup", "institute", "affiliation", "email",
    };
    return kCmds;
  }

  // Preamble-style definitions: eat every contiguous []/{} group.
  static const std::set<std::string>& drop_all_args() {
    static const std::set<std::string> kCmds = {
        "newcommand",  "renewcommand",  "providecommand", "newenvironment",
        "renewenvironment", "newtheorem", "setlength",    "addtolength",
        "setcounter",  "addtocounter",  "definecolor",    "numberwithin",
        "DeclareMathOperator", "bibliographystyle",
    };
    return kCmds;
  }

  // Commands that keep their *second* group as text (first is dropped).
  static const std::set<std::string>& drop_first_keep_second() {
    static const std::set<std::string> kCmds = {"href", "parbox", "texorpdfstring"};
    return kCmds;
  }

  void emit(char c) { current_.text.push_back(c); }
  void emit(std::string_view s) { current_.text.append(s); }

  void begin_section(std::string title) {
    current_.title = std::move(title);
    current_.text.clear();
  }

  void flush_section() {
    sections.push_back(std::move(current_));
    current_ = RawSection{};
  }

  void start_new_section(std::string title) {
    flush_section();
    begin_section(std::move(title));
  }

  void skip_spaces() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t')) ++pos_;
  }

  // Reads a brace-balanced {...} group starting at pos_ (which must be '{');
  // returns the inner content and advances past the closing brace.
  bool read_group(std::string& out) {
    if (pos_ >= src_.size() || src_[pos_] != '{') return false;
    int depth = 0;
    std::size_t start = pos_ + 1;
    for (std::size_t i = pos_; i < src_.size(); ++i) {
      char c = src_[i];
      if (c == '\\' && i + 1 < src_.size()) {
        ++i;
        continue;
      }
      if (c == '{') ++depth;
      if (c == '}') {
        --depth;
        if (depth == 0) {
          out.assign(src_.substr(start, i - start));
          pos_ = i + 1;
          return true;
        }
      }
    }
    return false;  // unbalanced; caller decides
  }

  bool skip_optional_group() {
    skip_spaces();
    if (pos_ >= src_.size() || src_[pos_] != '[') return false;
    for (std::size_t i = pos_ + 1; i < src_.size(); ++i) {
      if (src_[i] == ']') {
        pos_ = i + 1;
        return true;
      }
      if (src_[i] == '\n' && i + 1 < src_.size() && src_[i + 1] == '\n') break;
    }
    return false;
  }

  bool skip_brace_group() {
    skip_spaces();
    std::string ignored;
    return pos_ < src_.size() && src_[pos_] == '{' && read_group(ignored);
  }

  // Position of the next blank line (paragraph break) at or after `from`.
  std::size_t paragraph_break(std::size_t from) const {
    for (std::size_t i = from; i < src_.size(); ++i) {
      if (src_[i] != '\n') continue;
      std::size_t k = i + 1;
      while (k < src_.size() && (src_[k] == ' ' || src_[k] == '\t' || src_[k] == '\r')) ++k;
      if (k < src_.size() && src_[k] == '\n') return i;
    }
    return std::string_view::npos;
  }

  // Searches for `closer` starting at `from`. Inline math may not cross a
  // blank line; `paragraph_bound` enforces that.
  std::size_t find_closer(std::string_view closer, std::size_t from, bool paragraph_bound) {
    const std::size_t bound =
        paragraph_bound ? paragraph_break(from) : std::string_view::npos;
    for (std::size_t i = from; i + closer.size() <= src_.size(); ++i) {
      if (i >= bound) return std::string_view::npos;
      if (src_[i] == '\\' && closer[0] != '\\') {
        ++i;  // skip escaped char
        continue;
      }
      if (src_.substr(i, closer.size()) == closer) return i;
    }
    return std::string_view::npos;
  }

  void math_region(std::string_view opener, std::string_view closer, bool paragraph_bound) {
    std::size_t body = pos_ + opener.size();
    std::size_t end = find_closer(closer, body, paragraph_bound);
    if (end == std::string_view::npos) {
      warnings.push_back("unbalanced math region starting with '" + std::string(opener) +
                         "'; region dropped");
      // Drop to the paragraph bound (or end of input).
      std::size_t stop = src_.size();
      if (paragraph_bound) {
        std::size_t nl = paragraph_break(body);
        if (nl != std::string_view::npos) stop = nl;
      }
      pos_ = stop;
      return;
    }
    emit(" ");
    emit(kMathToken);
    emit(" ");
    pos_ = end + closer.size();
  }

  void handle_begin() {
    skip_spaces();
    std::string env;
    if (!read_group(env)) {
      warnings.push_back("\\begin without environment name");
      return;
    }
    std::string base = env;
    if (!base.empty() && base.back() == '*') base.pop_back();

    if (math_envs().count(base)) {
      std::string closer = "\\end{" + env + "}";
      std::size_t end = find_closer(closer, pos_, false);
      if (end == std::string_view::npos) {
        warnings.push_back("unbalanced math environment '" + env + "'; region dropped");
        pos_ = src_.size();
        return;
      }
      emit(" ");
      emit(kMathToken);
      emit(" ");
      pos_ = end + closer.size();
      return;
    }
    if (base == "abstract") {
      start_new_section("Abstract");
      return;
    }
    if (dropped_envs().count(base)) {
      std::string closer = "\\end{" + env + "}";
      std::size_t end = find_closer(closer, pos_, false);
      if (end == std::string_view::npos) {
        warnings.push_back("unclosed environment '" + env + "'; rest of input dropped");
        pos_ = src_.size();
        return;
      }
      emit("\n\n");
      pos_ = end + closer.size();
      return;
    }
    // Unknown/unwrapped environment: drop the marker, keep scanning inside.
    skip_optional_group();
    if (base == "minipage" || base == "multicols" || base == "wrapfigure")
      skip_brace_group();
  }

  void handle_end() {
    skip_spaces();
    std::string env;
    if (!read_group(env)) return;
    std::string base = env;
    if (!base.empty() && base.back() == '*') base.pop_back();
    if (base == "abstract") start_new_section("");
    emit("\n");
  }

  // Extracts the plain text of a section title by running a nested scanner.
  std::string clean_title(const std::string& raw) {
    LatexScanner nested;
    nested.run(raw);
    std::string joined;
    for (const auto& s : nested.sections) {
      joined += s.text;
      joined += ' ';
    }
    for (const auto& w : nested.warnings) warnings.push_back(w);
    return collapse_whitespace(joined);
  }

  void handle_sectioning(const std::string& name) {
    skip_optional_group();
    skip_spaces();
    std::string title;
    if (!read_group(title)) {
      warnings.push_back("\\" + name + " without a braced title");
      return;
    }
    if (name == "section") {
      start_new_section(clean_title(title));
    } else {
      // Lower-level headings: title excluded from text, no new section.
      emit("\n\n");
    }
  }

  void handle_command() {
    ++pos_;  // past the backslash
    if (pos_ >= src_.size()) return;
    char c = src_[pos_];
    if (!std::isalpha(static_cast<unsigned char>(c))) {
      ++pos_;
      switch (c) {
        case '%': case '$': case '&': case '#': case '_': case '{': case '}':
          emit(c);
          return;
        case '\\':
          skip_optional_group();  // \\[2mm]
          emit(' ');
          return;
        case '(':
          pos_ -= 2;
          math_region("\\(", "\\)", true);
          return;
        case '[':
          pos_ -= 2;
          math_region("\\[", "\\]", true);
          return;
        case ',': case ';': case ':': case '!': case ' ':
          emit(' ');
          return;
        default:
          return;  // accents and other marks vanish
      }
    }

    std::string name;
    while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) {
      name.push_back(src_[pos_]);
      ++pos_;
    }
    if (pos_ < src_.size() && src_[pos_] == '*') ++pos_;

    if (name == "begin") { handle_begin(); return; }
    if (name == "end") { handle_end(); return; }
    if (name == "section") { handle_sectioning("section"); return; }
    if (name == "chapter" || name == "part" || name == "subsection" ||
        name == "subsubsection" || name == "paragraph" || name == "subparagraph") {
      handle_sectioning(name);
      return;
    }
    if (name == "item") {
      skip_optional_group();
      emit("\n\n");
      return;
    }
    if (name == "par") { emit("\n\n"); return; }
    if (name == "ldots" || name == "dots") { emit("..."); return; }
    if (name == "def") {
      // \def\cmd{body}
      skip_spaces();
      if (pos_ < src_.size() && src_[pos_] == '\\') {
        ++pos_;
        while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
      skip_brace_group();
      return;
    }
    if (drop_all_args().count(name)) {
      skip_spaces();
      while (skip_optional_group() || skip_brace_group()) skip_spaces();
      return;
    }
    if (drop_first_keep_second().count(name)) {
      skip_optional_group();
      skip_brace_group();
      return;  // second group is scanned inline
    }
    if (drop_one_arg().count(name)) {
      while (skip_optional_group()) {}
      skip_brace_group();
      return;
    }
    // Unknown command: drop the name, keep any brace-group content inline.
    while (skip_optional_group()) {}
  }

  void step() {
    char c = src_[pos_];
    switch (c) {
      case '%': {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
        return;
      }
      case '$': {
        if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '$')
          math_region("$$", "$$", true);
        else
          math_region("$", "$", true);
        return;
      }
      case '~':
        emit(' ');
        ++pos_;
        return;
      case '{':
      case '}':
        ++pos_;
        return;
      case '\\':
        handle_command();
        return;
      default:
        emit(c);
        ++pos_;
        return;
    }
  }
};

}  // namespace detail

struct ExtractResult {
  Document document;
  std::vector<std::string> warnings;
};

/// Turns raw LaTeX sources into a sectioned, sentence-segmented document.
/// Comments and formatting commands are removed; every math region becomes
/// one [MATH] token; section titles are captured but excluded from text.
/// Sentence text is stored as case-preserving tokens joined with single
/// spaces, matching the exported pair format.
inline ExtractResult extract_text(
    const std::vector<std::string>& source_files,
    const std::vector<std::string>& guards = default_abbreviations()) {
  std::string src;
  for (const auto& f : source_files) {
    src += f;
    src += "\n";
  }

  detail::LatexScanner scanner;
  scanner.run(src);

  ExtractResult result;
  result.warnings = std::move(scanner.warnings);
  for (auto& raw : scanner.sections) {
    Section section;
    section.raw_title = raw.title;
    section.norm_title = normalize_title(raw.title);
    section.sentences = segment_sentences(raw.text, guards);
    // Normalize sentence text to the spaced-token form.
    std::size_t idx = 0;
    std::vector<Sentence> kept;
    for (auto& sentence : section.sentences) {
      auto cased = tokenize_preserve_case(sentence.text);
      if (cased.empty()) continue;
      sentence.index = idx++;
      sentence.text = join_tokens(cased);
      sentence.tokens = tokenize(sentence.text);
      kept.push_back(std::move(sentence));
    }
    section.sentences = std::move(kept);
    if (!section.sentences.empty()) result.document.sections.push_back(std::move(section));
  }

  if (result.document.sections.empty()) throw NoTextExtracted();
  const std::size_t total = result.document.sections.size();
  for (std::size_t i = 0; i < total; ++i) {
    auto& s = result.document.sections[i];
    s.position = classify_position(s.norm_title, i, total);
  }
  return result;
}

}  // namespace revmine
