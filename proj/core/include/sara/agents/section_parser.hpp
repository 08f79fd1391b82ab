#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sara::agents {

struct ParseError : std::runtime_error {
    std::string missing_heading;
    explicit ParseError(const std::string& heading)
        : std::runtime_error("missing required heading: " + heading),
          missing_heading(heading) {}
};

/// Expected heading, with accepted alternative spellings.
struct SectionField {
    std::string name;
    bool required = true;
    std::vector<std::string> aliases;
};

struct SectionSchema {
    std::vector<SectionField> fields;
};

struct ParsedSections {
    std::string preamble;  // text before the first recognized heading
    // canonical field name -> captured content, in output order matching the
    // schema; absent optional fields are omitted.
    std::vector<std::pair<std::string, std::string>> sections;

    const std::string* find(const std::string& name) const;
};

/// Tolerant section split: headings match case-insensitively, with optional
/// leading numbering ("1.", "2)") and optional trailing colon; content between
/// headings is captured verbatim. Throws ParseError naming the first missing
/// required heading.
ParsedSections parse_structured(const std::string& text,
                                const SectionSchema& schema);

/// Splits content into non-empty trimmed lines, stripping list numbering and
/// bullet markers.
std::vector<std::string> split_items(const std::string& content);

std::string trim(const std::string& s);

}  // namespace sara::agents
