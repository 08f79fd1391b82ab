#pragma once

#include "sara/agents/types.hpp"
#include "sara/backend/backend.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace sara {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat `section.key = value` configuration. `#` starts a comment; blank
/// lines are ignored; unknown keys are rejected. Defaults per field below.
struct CliConfig {
    std::string backend_kind = "mock";  // mock | http
    std::string backend_endpoint;       // http only
    std::string backend_model = "gpt-4o-mini";
    std::string backend_api_key_env = "OPENAI_API_KEY";  // name, never a value
    int backend_timeout_ms = 30000;

    int pipeline_max_steps = 8;
    double pipeline_temperature = 0.0;

    std::vector<std::string> retrieval_sources;  // ordered: stub | wikipedia
    std::string retrieval_stub_corpus_path;

    int eval_parallelism = 1;
    std::string eval_judge_mode = "exact";  // exact | llm

    std::uint64_t theory_seed = 42;
    int theory_count = 500;
    double theory_tolerance = 1e-9;

    static CliConfig parse(const std::string& text);
    static CliConfig load(const std::string& path);

    /// Throws ConfigError on out-of-range or unrecognized values.
    void validate() const;

    backend::BackendConfig backend_config() const;
    agents::PipelineConfig pipeline_config() const;
};

}  // namespace sara
