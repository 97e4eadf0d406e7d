#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace doclens::corpus {

struct SectionPattern {
  std::string id;
  std::string header_pattern;

  bool operator==(const SectionPattern&) const = default;
};

struct SectionOffset {
  std::string id;
  std::size_t offset = 0;

  bool operator==(const SectionOffset&) const = default;
};

/// Either header patterns (one regex per section, matched line by line) or
/// an explicit per-document table of character offsets. Section order is the
/// order of `sections` in both modes.
struct SectionSpec {
  std::vector<SectionPattern> sections;
  std::map<std::string, std::vector<SectionOffset>> offsets;

  bool uses_offsets() const noexcept { return !offsets.empty(); }
  std::vector<std::string> section_ids() const;

  bool operator==(const SectionSpec&) const = default;
};

/// Throws SchemaViolation if ids repeat, a pattern fails to compile, or an
/// offset table is not strictly increasing.
void validate(const SectionSpec& spec);

using Covariates = std::map<std::string, std::optional<double>>;

struct DocumentEntry {
  std::string doc_id;
  std::string entity_id;
  std::filesystem::path text_path;  // resolved against the manifest directory
  Covariates covariates;

  bool operator==(const DocumentEntry&) const = default;
};

struct CorpusManifest {
  int version = 1;
  std::string language = "en";
  std::vector<std::string> stopwords_extra;
  SectionSpec structure;
  std::vector<DocumentEntry> documents;

  std::vector<std::string> covariate_names() const;

  bool operator==(const CorpusManifest&) const = default;
};

CorpusManifest load_manifest(const std::filesystem::path& path);

/// Parses and validates an already-decoded manifest; relative text paths are
/// resolved against `base_dir`.
CorpusManifest parse_manifest(const nlohmann::json& doc, const std::filesystem::path& base_dir);

}  // namespace doclens::corpus
