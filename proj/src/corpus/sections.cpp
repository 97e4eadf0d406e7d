#include "doclens/corpus/sections.hpp"

#include <regex>
#include <utility>

#include "doclens/error.hpp"

namespace doclens::corpus {
namespace {

struct Line {
  std::size_t begin;
  std::size_t end;  // excludes the newline
};

std::vector<Line> lines_of(std::string_view text) {
  std::vector<Line> lines;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    const std::size_t nl = text.find('\n', begin);
    const std::size_t end = nl == std::string_view::npos ? text.size() : nl;
    lines.push_back({begin, end});
    if (nl == std::string_view::npos) break;
    begin = nl + 1;
  }
  return lines;
}

SplitResult assemble(std::string_view text, std::string_view doc_id,
                     const std::vector<std::pair<std::string, std::size_t>>& starts) {
  SplitResult out;
  out.preamble = std::string(text.substr(0, starts.front().second));
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const std::size_t begin = starts[i].second;
    const std::size_t end = i + 1 < starts.size() ? starts[i + 1].second : text.size();
    Section s;
    s.doc_id = std::string(doc_id);
    s.section_id = starts[i].first;
    s.raw_text = std::string(text.substr(begin, end - begin));
    out.sections.push_back(std::move(s));
  }
  return out;
}

}  // namespace

SplitResult split_sections(std::string_view text, const SectionSpec& spec, std::string_view doc_id) {
  std::vector<std::pair<std::string, std::size_t>> starts;

  if (spec.uses_offsets()) {
    auto it = spec.offsets.find(std::string(doc_id));
    if (it == spec.offsets.end() || it->second.empty()) {
      throw Error(ErrorCode::NoSectionMatched, "no offsets listed for document '" + std::string(doc_id) + "'");
    }
    // validate() guarantees the table is increasing and in spec order.
    for (const auto& off : it->second) {
      if (off.offset > text.size()) {
        throw Error(ErrorCode::SchemaViolation, "offset " + std::to_string(off.offset) + " of section '" +
                                                    off.id + "' exceeds text length in '" +
                                                    std::string(doc_id) + "'");
      }
      starts.emplace_back(off.id, off.offset);
    }
    if (starts.empty()) {
      throw Error(ErrorCode::NoSectionMatched, "no section matched in '" + std::string(doc_id) + "'");
    }
    return assemble(text, doc_id, starts);
  }

  const std::vector<Line> lines = lines_of(text);
  std::size_t next_line = 0;
  for (const auto& pattern : spec.sections) {
    const std::regex re(pattern.header_pattern);
    for (std::size_t l = next_line; l < lines.size(); ++l) {
      const auto line = text.substr(lines[l].begin, lines[l].end - lines[l].begin);
      if (std::regex_search(line.begin(), line.end(), re)) {
        starts.emplace_back(pattern.id, lines[l].begin);
        next_line = l + 1;
        break;
      }
    }
  }
  if (starts.empty()) {
    throw Error(ErrorCode::NoSectionMatched,
                "no section header matched" + (doc_id.empty() ? std::string() : " in '" + std::string(doc_id) + "'"));
  }
  return assemble(text, doc_id, starts);
}

}  // namespace doclens::corpus
