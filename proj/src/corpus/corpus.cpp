#include "doclens/corpus/corpus.hpp"

#include <fstream>
#include <sstream>

#include "doclens/error.hpp"

namespace doclens::corpus {

const DocumentInfo* ProcessedCorpus::find_document(const std::string& doc_id) const {
  for (const auto& d : documents) {
    if (d.doc_id == doc_id) return &d;
  }
  return nullptr;
}

std::vector<const Section*> ProcessedCorpus::sections_for(const std::string& section_id) const {
  std::vector<const Section*> out;
  for (const auto& s : sections) {
    if (s.section_id == section_id) out.push_back(&s);
  }
  return out;
}

const Section* ProcessedCorpus::find_section(const std::string& doc_id, const std::string& section_id) const {
  for (const auto& s : sections) {
    if (s.doc_id == doc_id && s.section_id == section_id) return &s;
  }
  return nullptr;
}

ProcessedCorpus build_corpus(const CorpusManifest& manifest, PreprocessOptions options) {
  for (const auto& w : manifest.stopwords_extra) options.stopwords.insert(w);

  ProcessedCorpus out;
  out.language = manifest.language;
  out.section_ids = manifest.structure.section_ids();
  out.covariate_names = manifest.covariate_names();
  for (const auto& entry : manifest.documents) {
    std::ifstream in(entry.text_path, std::ios::binary);
    if (!in) throw Error(ErrorCode::MissingFile, entry.text_path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    SplitResult split;
    try {
      split = split_sections(text, manifest.structure, entry.doc_id);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoSectionMatched) throw;
      throw Error(ErrorCode::NoSectionMatched, "document '" + entry.doc_id + "' (" +
                                                   entry.text_path.string() + "): no section header matched");
    }
    for (auto& s : split.sections) {
      s.tokens = preprocess(s.raw_text, options);
      out.sections.push_back(std::move(s));
    }
    out.documents.push_back({entry.doc_id, entry.entity_id, entry.covariates});
  }
  return out;
}

SectionData build_section_data(const ProcessedCorpus& corpus, const std::string& section_id,
                               std::size_t min_df, double max_df) {
  const auto sections = corpus.sections_for(section_id);
  if (sections.empty()) {
    throw Error(ErrorCode::EmptyCorpus, "no document contains section '" + section_id + "'");
  }
  std::vector<std::vector<std::string>> docs;
  docs.reserve(sections.size());
  for (const auto* s : sections) docs.push_back(s->tokens);

  SectionData data;
  data.section_id = section_id;
  data.vocab = Vocabulary::build(docs, min_df, max_df);
  data.bow.vocab_size = data.vocab.size();
  for (const auto* s : sections) {
    data.bow.row_ids.push_back(s->doc_id);
    data.bow.rows.push_back(to_bow(s->tokens, data.vocab));
  }
  return data;
}

}  // namespace doclens::corpus
