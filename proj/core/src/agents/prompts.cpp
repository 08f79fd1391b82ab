#include "sara/agents/prompts.hpp"

#include "sara/util/sha256.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef SARA_DEFAULT_PROMPT_DIR
#define SARA_DEFAULT_PROMPT_DIR "prompts"
#endif

namespace sara::agents {

std::string PromptLibrary::default_prompt_dir() {
    if (const char* env = std::getenv("SARA_PROMPT_DIR")) return env;
    return SARA_DEFAULT_PROMPT_DIR;
}

PromptLibrary::PromptLibrary(std::string prompt_dir)
    : dir_(std::move(prompt_dir)) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir_))
        throw std::runtime_error("prompt directory not found: " + dir_);
    for (const auto& entry : fs::directory_iterator(dir_)) {
        if (entry.path().extension() != ".txt") continue;
        std::ifstream in(entry.path());
        std::ostringstream os;
        os << in.rdbuf();
        templates_[entry.path().stem().string()] = os.str();
    }
    if (templates_.empty())
        throw std::runtime_error("no prompt templates in " + dir_);
}

const std::string& PromptLibrary::raw(const std::string& name) const {
    auto it = templates_.find(name);
    if (it == templates_.end())
        throw std::out_of_range("unknown prompt template: " + name);
    return it->second;
}

std::string PromptLibrary::checksum(const std::string& name) const {
    return util::sha256_hex(raw(name));
}

std::vector<std::string> PromptLibrary::names() const {
    std::vector<std::string> out;
    for (const auto& [name, text] : templates_) out.push_back(name);
    return out;
}

RenderedPrompt PromptLibrary::render(
    const std::string& name,
    const std::map<std::string, std::string>& slots) const {
    const std::string& tmpl = raw(name);
    std::string out;
    out.reserve(tmpl.size());
    std::size_t pos = 0;
    while (pos < tmpl.size()) {
        auto open = tmpl.find("{{", pos);
        if (open == std::string::npos) {
            out.append(tmpl, pos, std::string::npos);
            break;
        }
        auto close = tmpl.find("}}", open);
        if (close == std::string::npos) {
            out.append(tmpl, pos, std::string::npos);
            break;
        }
        out.append(tmpl, pos, open - pos);
        std::string slot = tmpl.substr(open + 2, close - open - 2);
        auto it = slots.find(slot);
        if (it == slots.end())
            throw std::invalid_argument("prompt " + name +
                                        ": missing slot value for {{" + slot +
                                        "}}");
        out += it->second;
        pos = close + 2;
    }
    return {out, name, checksum(name)};
}

bool PromptLibrary::rendered_contains_template(
    const std::string& rendered, const std::string& template_text) {
    std::size_t tpos = 0;
    std::size_t rpos = 0;
    while (tpos < template_text.size()) {
        auto open = template_text.find("{{", tpos);
        std::size_t seg_end =
            open == std::string::npos ? template_text.size() : open;
        std::string segment = template_text.substr(tpos, seg_end - tpos);
        if (!segment.empty()) {
            auto found = rendered.find(segment, rpos);
            if (found == std::string::npos) return false;
            rpos = found + segment.size();
        }
        if (open == std::string::npos) break;
        auto close = template_text.find("}}", open);
        if (close == std::string::npos) break;
        tpos = close + 2;
    }
    return true;
}

}  // namespace sara::agents
