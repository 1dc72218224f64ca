#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace revmine {

/// Placeholder token substituted for every math region during extraction.
inline constexpr std::string_view kMathToken = "[MATH]";

inline bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
inline bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }
inline bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
inline char lower_char(char c) {
  return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

inline std::string to_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) out.push_back(lower_char(c));
  return out;
}

/// Collapses whitespace runs to single spaces and trims both ends.
inline std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.push_back(c);
    }
  }
  return out;
}

namespace detail {

// Splits one whitespace-free chunk: leading/trailing punctuation becomes
// separate single-char tokens, the [MATH] placeholder always stays whole.
inline void split_chunk(std::string_view chunk, std::vector<std::string>& out) {
  while (!chunk.empty()) {
    if (chunk.substr(0, kMathToken.size()) == kMathToken) {
      out.emplace_back(kMathToken);
      chunk.remove_prefix(kMathToken.size());
      continue;
    }
    if (is_punct(chunk.front())) {
      out.emplace_back(1, chunk.front());
      chunk.remove_prefix(1);
      continue;
    }
    break;
  }
  if (chunk.empty()) return;
  if (is_punct(chunk.back()) && chunk != kMathToken) {
    char tail = chunk.back();
    split_chunk(chunk.substr(0, chunk.size() - 1), out);
    out.emplace_back(1, tail);
    return;
  }
  out.emplace_back(chunk);
}

}  // namespace detail

/// Whitespace split with punctuation peeling; original casing kept.
inline std::vector<std::string> tokenize_preserve_case(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) detail::split_chunk(text.substr(start, i - start), tokens);
  }
  return tokens;
}

/// Lowercased tokens; [MATH] is preserved verbatim as one token.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens = tokenize_preserve_case(text);
  for (auto& t : tokens) {
    if (t != kMathToken) t = to_lower(t);
  }
  return tokens;
}

inline std::string join_tokens(const std::vector<std::string>& tokens,
                               std::string_view sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.append(sep);
    out.append(tokens[i]);
  }
  return out;
}

}  // namespace revmine
