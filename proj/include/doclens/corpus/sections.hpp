#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "doclens/corpus/manifest.hpp"

namespace doclens::corpus {

struct Section {
  std::string doc_id;
  std::string section_id;
  /// Text from the start of the header line up to the next found header.
  std::string raw_text;
  std::vector<std::string> tokens;

  bool operator==(const Section&) const = default;
};

struct SplitResult {
  std::string preamble;  // text before the first found header
  std::vector<Section> sections;
};

/// Splits a document into sections in spec order. Each header is searched
/// for line by line after the previously found header; a section whose
/// header is not found is absent from the result, never empty.
///
/// preamble + concat(raw_text) reproduces `text` byte for byte.
/// Throws NoSectionMatched when no header (or no offset entry) is found.
SplitResult split_sections(std::string_view text, const SectionSpec& spec,
                           std::string_view doc_id = {});

}  // namespace doclens::corpus
