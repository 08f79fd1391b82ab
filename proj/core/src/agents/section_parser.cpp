#include "sara/agents/section_parser.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace sara::agents {

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

// Strips "1.", "2)", "(3)", "-", "*" list markers from the line head.
std::string strip_marker(const std::string& line) {
    std::size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    if (i < line.size() && line[i] == '(') ++i;
    std::size_t digits = i;
    while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i])))
        ++i;
    if (i > digits && i < line.size() &&
        (line[i] == '.' || line[i] == ')' || line[i] == ':')) {
        ++i;
    } else if (start < line.size() &&
               (line[start] == '-' || line[start] == '*')) {
        i = start + 1;
    } else {
        i = start;
    }
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    return line.substr(i);
}

// If the line opens the given heading, returns the inline remainder after an
// optional colon; otherwise nullopt is signalled by `matched=false`.
bool match_heading(const std::string& line, const std::string& heading,
                   std::string& inline_content) {
    std::string body = strip_marker(line);
    std::string lowered = lower(body);
    std::string want = lower(heading);
    if (lowered.rfind(want, 0) != 0) return false;
    std::string rest = body.substr(heading.size());
    // The heading must end here or continue with punctuation, not a word.
    if (!rest.empty() && std::isalnum(static_cast<unsigned char>(rest[0])))
        return false;
    rest = trim(rest);
    if (!rest.empty() && rest[0] == ':') rest = trim(rest.substr(1));
    inline_content = rest;
    return true;
}

}  // namespace

const std::string* ParsedSections::find(const std::string& name) const {
    for (const auto& [n, content] : sections) {
        if (n == name) return &content;
    }
    return nullptr;
}

ParsedSections parse_structured(const std::string& text,
                                const SectionSchema& schema) {
    struct Hit {
        std::size_t field;
        std::string content;
    };
    std::vector<Hit> hits;

    std::istringstream is(text);
    std::string line;
    std::string current;
    std::size_t current_field = schema.fields.size();  // sentinel: preamble
    std::string preamble;

    auto flush = [&]() {
        if (current_field == schema.fields.size()) {
            preamble = trim(current);
        } else {
            hits.push_back({current_field, trim(current)});
        }
        current.clear();
    };

    while (std::getline(is, line)) {
        bool heading = false;
        for (std::size_t f = 0; f < schema.fields.size(); ++f) {
            std::vector<std::string> names{schema.fields[f].name};
            names.insert(names.end(), schema.fields[f].aliases.begin(),
                         schema.fields[f].aliases.end());
            std::string inline_content;
            for (const auto& n : names) {
                if (match_heading(line, n, inline_content)) {
                    flush();
                    current_field = f;
                    current = inline_content;
                    heading = true;
                    break;
                }
            }
            if (heading) break;
        }
        if (!heading) {
            if (!current.empty()) current += '\n';
            current += line;
        }
    }
    flush();

    ParsedSections out;
    out.preamble = preamble;
    for (std::size_t f = 0; f < schema.fields.size(); ++f) {
        const auto* found = static_cast<const Hit*>(nullptr);
        for (const auto& h : hits) {
            if (h.field == f) {
                found = &h;
                break;
            }
        }
        if (!found) {
            if (schema.fields[f].required)
                throw ParseError(schema.fields[f].name);
            continue;
        }
        out.sections.emplace_back(schema.fields[f].name, found->content);
    }
    return out;
}

std::vector<std::string> split_items(const std::string& content) {
    std::vector<std::string> items;
    std::istringstream is(content);
    std::string line;
    while (std::getline(is, line)) {
        std::string item = trim(strip_marker(line));
        if (!item.empty()) items.push_back(item);
    }
    // A single line of comma-separated phrases is also accepted.
    if (items.size() == 1 && items[0].find(',') != std::string::npos &&
        items[0].find(',') != items[0].size() - 1) {
        std::vector<std::string> parts;
        std::istringstream ls(items[0]);
        std::string part;
        while (std::getline(ls, part, ',')) {
            part = trim(part);
            if (!part.empty()) parts.push_back(part);
        }
        if (parts.size() > 1) return parts;
    }
    return items;
}

}  // namespace sara::agents
