#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "revmine/align.hpp"
#include "revmine/classify.hpp"
#include "revmine/errors.hpp"

namespace revmine {

namespace detail {

inline std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

inline std::string sim6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", x);
  return buf;
}

}  // namespace detail

/// One JSON line per pair: paper_id, section_title, position, rtype,
/// v1_index, v2_index, v1_text, v2_text, similarity (6 decimals). Fields of
/// the missing v2 side are omitted for deletions.
inline std::string serialize_pair(const RevisionPair& p) {
  std::string line = "{";
  line += "\"paper_id\":" + detail::json_string(p.paper_id);
  line += ",\"section_title\":" + detail::json_string(p.section_title);
  line += ",\"position\":\"" + std::string(to_string(p.position)) + "\"";
  line += ",\"rtype\":\"" + std::string(to_string(p.rtype)) + "\"";
  line += ",\"v1_index\":" + std::to_string(p.v1_index);
  if (p.v2_index) line += ",\"v2_index\":" + std::to_string(*p.v2_index);
  line += ",\"v1_text\":" + detail::json_string(p.v1_text);
  if (p.v2_index) line += ",\"v2_text\":" + detail::json_string(p.v2_text);
  if (p.similarity) line += ",\"similarity\":" + detail::sim6(*p.similarity);
  line += "}";
  return line;
}

inline RevisionPair parse_pair(const std::string& line) {
  nlohmann::json j = nlohmann::json::parse(line);
  RevisionPair p;
  p.paper_id = j.at("paper_id").get<std::string>();
  p.section_title = j.at("section_title").get<std::string>();
  p.position = position_from_string(j.at("position").get<std::string>());
  p.rtype = revision_type_from_string(j.at("rtype").get<std::string>());
  p.v1_index = j.at("v1_index").get<std::size_t>();
  if (j.contains("v2_index")) p.v2_index = j["v2_index"].get<std::size_t>();
  p.v1_text = j.at("v1_text").get<std::string>();
  if (j.contains("v2_text")) p.v2_text = j["v2_text"].get<std::string>();
  if (j.contains("similarity")) p.similarity = j["similarity"].get<double>();
  return p;
}

inline void write_pairs(std::ostream& os, const std::vector<RevisionPair>& pairs) {
  for (const auto& p : pairs) os << serialize_pair(p) << "\n";
}

inline std::vector<RevisionPair> read_pairs(std::istream& is) {
  std::vector<RevisionPair> pairs;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    pairs.push_back(parse_pair(line));
  }
  return pairs;
}

/// Debug dump of alignment links, one `{"i":..,"j":..,"sim":..}` per line.
inline void write_alignment_dump(std::ostream& os, const std::vector<SentenceLink>& links) {
  for (const auto& l : links) {
    os << "{\"i\":" << l.v1_index << ",\"j\":" << l.v2_index << ",\"sim\":"
       << detail::sim6(l.sim) << "}\n";
  }
}

}  // namespace revmine
