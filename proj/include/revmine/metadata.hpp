#pragma once

#include <set>
#include <string>

#include <json.hpp>

#include "revmine/document.hpp"
#include "revmine/errors.hpp"

namespace revmine {

/// Parses a metadata.json blob. Field errors carry the offending field path.
inline PaperMeta load_metadata(const std::string& blob) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(blob);
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedMetadata(std::string("json: ") + e.what());
  }
  if (!j.is_object()) throw MalformedMetadata("root");

  PaperMeta meta;
  if (!j.contains("paper_id") || !j["paper_id"].is_string() ||
      j["paper_id"].get<std::string>().empty())
    throw MalformedMetadata("paper_id");
  meta.paper_id = j["paper_id"].get<std::string>();

  if (!j.contains("author_count") || !j["author_count"].is_number_integer() ||
      j["author_count"].get<int>() < 1)
    throw MalformedMetadata("author_count");
  meta.author_count = j["author_count"].get<int>();

  if (!j.contains("categories") || !j["categories"].is_array() || j["categories"].empty())
    throw MalformedMetadata("categories");
  for (std::size_t i = 0; i < j["categories"].size(); ++i) {
    const auto& c = j["categories"][i];
    if (!c.is_string()) throw MalformedMetadata("categories[" + std::to_string(i) + "]");
    meta.categories.push_back(c.get<std::string>());
  }

  if (!j.contains("versions") || !j["versions"].is_array() || j["versions"].empty())
    throw MalformedMetadata("versions");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < j["versions"].size(); ++i) {
    const auto& v = j["versions"][i];
    if (!v.is_string() || v.get<std::string>().empty() || !seen.insert(v.get<std::string>()).second)
      throw MalformedMetadata("versions[" + std::to_string(i) + "]");
    meta.versions.push_back(v.get<std::string>());
  }
  return meta;
}

}  // namespace revmine
