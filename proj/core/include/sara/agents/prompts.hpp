#pragma once

#include <map>
#include <string>
#include <vector>

namespace sara::agents {

struct RenderedPrompt {
    std::string text;
    std::string template_name;
    std::string template_sha256;  // checksum of the raw template file
};

/// Loads the plain-text prompt templates with {{slot}} placeholders.
class PromptLibrary {
public:
    explicit PromptLibrary(std::string prompt_dir = default_prompt_dir());

    RenderedPrompt render(const std::string& name,
                          const std::map<std::string, std::string>& slots) const;

    const std::string& raw(const std::string& name) const;
    std::string checksum(const std::string& name) const;
    std::vector<std::string> names() const;

    /// SARA_PROMPT_DIR when set, else the build-time default.
    static std::string default_prompt_dir();

    /// True when every literal (non-slot) segment of the template occurs in
    /// the rendered text, in order.
    static bool rendered_contains_template(const std::string& rendered,
                                           const std::string& template_text);

private:
    std::string dir_;
    std::map<std::string, std::string> templates_;
};

}  // namespace sara::agents
