#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace sara::agents {

struct StructureAnalysis {
    std::string grammar_notes;
    std::vector<std::string> key_components;
    std::string relationships;
    std::vector<std::string> sub_questions;
    std::vector<std::string> implications;
    bool refined = false;

    std::string to_text() const;
    nlohmann::ordered_json to_json() const;
};

struct RefinementResult {
    bool aligned_with_analysis = true;
    bool consistent_with_trajectory = true;
    bool factually_correct = true;
    std::string reasons;
    std::optional<std::string> revised_text;
    bool unparsed = false;

    nlohmann::ordered_json to_json() const;
};

struct ReasoningStep {
    int index = 0;  // 1-based position in the trajectory
    std::string thought;
    bool needs_retrieval = false;
    std::optional<std::string> retrieval_query;
    std::optional<int> retrieved_ref;  // index into SharedMemory::retrieved
    std::optional<RefinementResult> refinement;
    bool terminal = false;
    bool unparsed = false;

    nlohmann::ordered_json to_json() const;
};

struct RetrievedKnowledge {
    std::string requirement;
    std::string retrieval_key;  // exactly one primary entity
    std::string source_id;
    std::string raw;
    std::string extracted;
    std::vector<std::string> suggestions;
    bool hit = false;

    nlohmann::ordered_json to_json() const;
    std::string to_text() const;
};

/// Append-only per-question state shared by the agents.
struct SharedMemory {
    std::string question;
    std::optional<StructureAnalysis> analysis;
    std::vector<ReasoningStep> trajectory;
    std::vector<RetrievedKnowledge> retrieved;
    std::optional<std::string> final_answer;

    nlohmann::ordered_json to_json() const;
};

/// One LLM exchange inside a stage. Retrieval stages carry two (requirement
/// analysis and extraction); store stages carry none.
struct TranscriptCall {
    std::string prompt;
    std::string response;
    std::string template_name;
    std::string template_sha256;
    long long elapsed_ms = 0;  // zero under the mock backend
};

struct TranscriptStage {
    std::string label;  // analyze, refine_analysis, store, reason, retrieve,
                        // refine_step, consolidate
    std::vector<TranscriptCall> calls;
    std::string note;  // warnings, original text replaced by a refinement
};

struct Transcript {
    std::string question;
    std::vector<TranscriptStage> stages;
    SharedMemory memory;
    std::string config_digest;
    bool budget_exhausted = false;
    std::optional<std::string> error;  // stage label + message on failure

    std::vector<std::string> stage_labels() const;
    nlohmann::ordered_json to_json() const;
    std::string to_text() const;  // stable serialization for golden fixtures
};

struct PipelineConfig {
    int max_steps = 8;
    int parse_retries = 2;
    double temperature = 0.0;
    std::string terminal_marker = "FINAL ANSWER READY";
    std::string prompt_dir;  // empty means PromptLibrary default
    bool record_timings = false;  // keep transcripts byte-stable under mocks
};

}  // namespace sara::agents
