#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "doclens/corpus/manifest.hpp"
#include "doclens/corpus/preprocess.hpp"
#include "doclens/corpus/sections.hpp"
#include "doclens/corpus/vocabulary.hpp"

namespace doclens::corpus {

struct DocumentInfo {
  std::string doc_id;
  std::string entity_id;
  Covariates covariates;

  bool operator==(const DocumentInfo&) const = default;
};

/// Ingested corpus: document metadata plus every found section with its
/// raw text and normalized tokens.
struct ProcessedCorpus {
  std::string language = "en";
  std::vector<DocumentInfo> documents;
  std::vector<std::string> section_ids;  // spec order
  std::vector<std::string> covariate_names;
  std::vector<Section> sections;  // document order, then spec order

  const DocumentInfo* find_document(const std::string& doc_id) const;
  std::vector<const Section*> sections_for(const std::string& section_id) const;
  const Section* find_section(const std::string& doc_id, const std::string& section_id) const;

  bool operator==(const ProcessedCorpus&) const = default;
};

/// Reads every text file, splits it and preprocesses each section. The
/// manifest's extra stopwords are added to `options.stopwords`.
ProcessedCorpus build_corpus(const CorpusManifest& manifest, PreprocessOptions options);

/// Vocabulary and bag-of-words rows for one section id.
struct SectionData {
  std::string section_id;
  Vocabulary vocab;
  BowMatrix bow;
};

SectionData build_section_data(const ProcessedCorpus& corpus, const std::string& section_id,
                               std::size_t min_df, double max_df);

}  // namespace doclens::corpus
