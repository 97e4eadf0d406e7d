#include "doclens/corpus/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <regex>
#include <set>

#include "json.hpp"

#include "doclens/error.hpp"

namespace doclens::corpus {
namespace {

using nlohmann::json;

[[noreturn]] void schema(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::SchemaViolation, field + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) schema(where + "." + key, "missing");
  return *it;
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_string()) schema(where + "." + key, "expected string");
  return v.get<std::string>();
}

}  // namespace

std::vector<std::string> SectionSpec::section_ids() const {
  std::vector<std::string> ids;
  ids.reserve(sections.size());
  for (const auto& s : sections) ids.push_back(s.id);
  return ids;
}

void validate(const SectionSpec& spec) {
  if (spec.sections.empty()) schema("structure.sections", "must list at least one section");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < spec.sections.size(); ++i) {
    const auto& s = spec.sections[i];
    const std::string where = "structure.sections[" + std::to_string(i) + "]";
    if (s.id.empty()) schema(where + ".id", "must be non-empty");
    if (!seen.insert(s.id).second) schema(where + ".id", "duplicate section id '" + s.id + "'");
    if (!spec.uses_offsets()) {
      if (s.header_pattern.empty()) schema(where + ".header_pattern", "missing");
      try {
        std::regex re(s.header_pattern);
      } catch (const std::regex_error& e) {
        schema(where + ".header_pattern", std::string("does not compile: ") + e.what());
      }
    }
  }
  const auto ids = spec.section_ids();
  auto rank_of = [&](const std::string& id) {
    return static_cast<std::size_t>(std::find(ids.begin(), ids.end(), id) - ids.begin());
  };
  for (const auto& [doc, table] : spec.offsets) {
    for (std::size_t i = 0; i < table.size(); ++i) {
      const std::string where = "structure.offsets." + doc + "[" + std::to_string(i) + "]";
      if (seen.count(table[i].id) == 0) schema(where + ".id", "unknown section '" + table[i].id + "'");
      if (i > 0 && table[i].offset <= table[i - 1].offset) schema(where + ".offset", "offsets must be strictly increasing");
      if (i > 0 && rank_of(table[i].id) <= rank_of(table[i - 1].id)) {
        schema(where + ".id", "sections must follow structure order");
      }
    }
  }
}

std::vector<std::string> CorpusManifest::covariate_names() const {
  std::vector<std::string> names;
  if (documents.empty()) return names;
  for (const auto& [k, v] : documents.front().covariates) names.push_back(k);
  return names;
}

CorpusManifest parse_manifest(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) schema("<root>", "expected object");
  CorpusManifest m;
  const json& version = require(doc, "version", "manifest");
  if (!version.is_number_integer() || version.get<int>() != 1) schema("manifest.version", "expected 1");
  m.version = 1;
  if (doc.contains("language")) {
    if (!doc["language"].is_string()) schema("manifest.language", "expected string");
    m.language = doc["language"].get<std::string>();
  }
  if (doc.contains("stopwords_extra")) {
    const json& extra = doc["stopwords_extra"];
    if (!extra.is_array()) schema("manifest.stopwords_extra", "expected array");
    for (std::size_t i = 0; i < extra.size(); ++i) {
      if (!extra[i].is_string()) schema("manifest.stopwords_extra[" + std::to_string(i) + "]", "expected string");
      m.stopwords_extra.push_back(extra[i].get<std::string>());
    }
  }

  const json& structure = require(doc, "structure", "manifest");
  if (!structure.is_object()) schema("manifest.structure", "expected object");
  const json& sections = require(structure, "sections", "manifest.structure");
  if (!sections.is_array()) schema("manifest.structure.sections", "expected array");
  for (std::size_t i = 0; i < sections.size(); ++i) {
    const std::string where = "manifest.structure.sections[" + std::to_string(i) + "]";
    if (!sections[i].is_object()) schema(where, "expected object");
    SectionPattern p;
    p.id = require_string(sections[i], "id", where);
    if (sections[i].contains("header_pattern")) p.header_pattern = require_string(sections[i], "header_pattern", where);
    m.structure.sections.push_back(std::move(p));
  }
  if (structure.contains("offsets")) {
    const json& offsets = structure["offsets"];
    if (!offsets.is_object()) schema("manifest.structure.offsets", "expected object");
    for (const auto& [doc_id, table] : offsets.items()) {
      const std::string where = "manifest.structure.offsets." + doc_id;
      if (!table.is_array()) schema(where, "expected array");
      auto& out = m.structure.offsets[doc_id];
      for (std::size_t i = 0; i < table.size(); ++i) {
        const std::string w = where + "[" + std::to_string(i) + "]";
        SectionOffset so;
        so.id = require_string(table[i], "id", w);
        const json& off = require(table[i], "offset", w);
        if (!off.is_number_unsigned() && !(off.is_number_integer() && off.get<long long>() >= 0)) {
          schema(w + ".offset", "expected non-negative integer");
        }
        so.offset = off.get<std::size_t>();
        out.push_back(std::move(so));
      }
    }
  }
  validate(m.structure);

  const json& docs = require(doc, "documents", "manifest");
  if (!docs.is_array() || docs.empty()) schema("manifest.documents", "expected non-empty array");
  std::set<std::string> ids;
  std::optional<std::set<std::string>> covariate_keys;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const std::string where = "manifest.documents[" + std::to_string(i) + "]";
    const json& d = docs[i];
    if (!d.is_object()) schema(where, "expected object");
    DocumentEntry e;
    e.doc_id = require_string(d, "doc_id", where);
    if (e.doc_id.empty()) schema(where + ".doc_id", "must be non-empty");
    if (!ids.insert(e.doc_id).second) {
      throw Error(ErrorCode::DuplicateDocId, "doc_id '" + e.doc_id + "' appears more than once");
    }
    e.entity_id = d.contains("entity_id") ? require_string(d, "entity_id", where) : e.doc_id;
    const std::filesystem::path rel = require_string(d, "text", where);
    e.text_path = rel.is_absolute() ? rel : base_dir / rel;
    if (!std::filesystem::is_regular_file(e.text_path)) {
      throw Error(ErrorCode::MissingFile, e.text_path.string());
    }
    std::set<std::string> keys;
    if (d.contains("covariates")) {
      const json& cov = d["covariates"];
      if (!cov.is_object()) schema(where + ".covariates", "expected object");
      for (const auto& [key, value] : cov.items()) {
        keys.insert(key);
        if (value.is_null()) {
          e.covariates[key] = std::nullopt;
        } else if (value.is_number() && std::isfinite(value.get<double>())) {
          e.covariates[key] = value.get<double>();
        } else {
          schema(where + ".covariates." + key, "expected finite number or null");
        }
      }
    }
    if (!covariate_keys) {
      covariate_keys = keys;
    } else if (*covariate_keys != keys) {
      schema(where + ".covariates", "keys differ from the first document's");
    }
    m.documents.push_back(std::move(e));
  }
  for (const auto& [doc_id, table] : m.structure.offsets) {
    if (ids.count(doc_id) == 0) schema("manifest.structure.offsets." + doc_id, "unknown doc_id");
  }
  return m;
}

CorpusManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaViolation, path.string() + ": " + e.what());
  }
  return parse_manifest(doc, path.parent_path());
}

}  // namespace doclens::corpus
