#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "revmine/document.hpp"
#include "revmine/errors.hpp"
#include "revmine/latex.hpp"
#include "revmine/metadata.hpp"
#include "revmine/text.hpp"

namespace revmine {

namespace fs = std::filesystem;

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, path);
}

/// Paper directories under the corpus root (those holding metadata.json),
/// sorted by directory name.
inline std::vector<fs::path> scan_corpus(const fs::path& root) {
  if (!fs::is_directory(root)) throw EmptyCorpus();
  std::vector<fs::path> papers;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && fs::exists(entry.path() / "metadata.json"))
      papers.push_back(entry.path());
  }
  std::sort(papers.begin(), papers.end());
  if (papers.empty()) throw EmptyCorpus();
  return papers;
}

/// Reads metadata plus the raw sources of the first and last version (the
/// pipeline aligns first vs last only).
inline RawPaper load_raw_paper(const fs::path& paper_dir) {
  RawPaper paper;
  paper.meta = load_metadata(read_file(paper_dir / "metadata.json"));

  std::vector<std::string> wanted{paper.meta.versions.front()};
  if (paper.meta.versions.size() > 1) wanted.push_back(paper.meta.versions.back());
  for (const auto& label : wanted) {
    const fs::path vdir = paper_dir / label;
    if (!fs::is_directory(vdir))
      throw Error("version directory missing: " + vdir.string());
    VersionSource src;
    src.label = label;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(vdir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".tex")
        files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw Error("no .tex files in " + vdir.string());
    for (const auto& f : files) src.files.push_back(read_file(f));
    paper.versions.push_back(std::move(src));
  }
  return paper;
}

/// Extracted documents of one paper: always the first version, plus the last
/// when the paper has more than one.
struct ExtractedPaper {
  PaperMeta meta;
  Document first;
  Document last;  // equals `first` for single-version papers
  std::vector<std::string> warnings;

  bool changed() const { return first.flat_text() != last.flat_text(); }
};

inline ExtractedPaper extract_paper(const RawPaper& raw) {
  ExtractedPaper out;
  out.meta = raw.meta;
  ExtractResult first = extract_text(raw.versions.front().files);
  out.first = std::move(first.document);
  out.first.paper_id = raw.meta.paper_id;
  out.first.version_label = raw.versions.front().label;
  out.warnings = std::move(first.warnings);
  if (raw.versions.size() > 1) {
    ExtractResult last = extract_text(raw.versions.back().files);
    out.last = std::move(last.document);
    out.last.paper_id = raw.meta.paper_id;
    out.last.version_label = raw.versions.back().label;
    out.warnings.insert(out.warnings.end(), last.warnings.begin(), last.warnings.end());
  } else {
    out.last = out.first;
  }
  return out;
}

namespace detail {

inline nlohmann::ordered_json document_to_json(const Document& doc) {
  nlohmann::ordered_json j;
  j["version_label"] = doc.version_label;
  j["sections"] = nlohmann::ordered_json::array();
  for (const auto& s : doc.sections) {
    nlohmann::ordered_json sec;
    sec["raw_title"] = s.raw_title;
    sec["position"] = std::string(to_string(s.position));
    sec["sentences"] = nlohmann::ordered_json::array();
    for (const auto& sent : s.sentences) sec["sentences"].push_back(sent.text);
    j["sections"].push_back(std::move(sec));
  }
  return j;
}

inline Document document_from_json(const nlohmann::json& j, const std::string& paper_id) {
  Document doc;
  doc.paper_id = paper_id;
  doc.version_label = j.at("version_label").get<std::string>();
  for (const auto& sec : j.at("sections")) {
    Section section;
    section.raw_title = sec.at("raw_title").get<std::string>();
    section.norm_title = normalize_title(section.raw_title);
    section.position = position_from_string(sec.at("position").get<std::string>());
    for (const auto& text : sec.at("sentences")) {
      Sentence s;
      s.index = section.sentences.size();
      s.text = text.get<std::string>();
      s.tokens = tokenize(s.text);
      section.sentences.push_back(std::move(s));
    }
    doc.sections.push_back(std::move(section));
  }
  return doc;
}

}  // namespace detail

/// Cache file format for one extracted paper, stable byte-for-byte.
inline std::string serialize_extracted(const ExtractedPaper& paper) {
  nlohmann::ordered_json j;
  j["paper_id"] = paper.meta.paper_id;
  j["author_count"] = paper.meta.author_count;
  j["categories"] = paper.meta.categories;
  j["versions"] = paper.meta.versions;
  j["documents"] = nlohmann::ordered_json::array();
  j["documents"].push_back(detail::document_to_json(paper.first));
  if (paper.meta.versions.size() > 1)
    j["documents"].push_back(detail::document_to_json(paper.last));
  return j.dump() + "\n";
}

inline ExtractedPaper parse_extracted(const std::string& blob) {
  nlohmann::json j = nlohmann::json::parse(blob);
  ExtractedPaper paper;
  paper.meta.paper_id = j.at("paper_id").get<std::string>();
  paper.meta.author_count = j.at("author_count").get<int>();
  paper.meta.categories = j.at("categories").get<std::vector<std::string>>();
  paper.meta.versions = j.at("versions").get<std::vector<std::string>>();
  const auto& docs = j.at("documents");
  paper.first = detail::document_from_json(docs.at(0), paper.meta.paper_id);
  paper.last = docs.size() > 1 ? detail::document_from_json(docs.at(1), paper.meta.paper_id)
                               : paper.first;
  return paper;
}

}  // namespace revmine
