#pragma once

#include "sara/agents/prompts.hpp"
#include "sara/agents/types.hpp"
#include "sara/backend/backend.hpp"
#include "sara/backend/retrieval.hpp"

#include <stdexcept>
#include <vector>

namespace sara::agents {

struct PipelineError : std::runtime_error {
    std::string stage;
    PipelineError(std::string stage_label, const std::string& what)
        : std::runtime_error(stage_label + ": " + what),
          stage(std::move(stage_label)) {}
};

/// Drives one question through analysis, iterative reasoning with retrieval
/// and refinement, and answer consolidation. Owns its SharedMemory; the
/// backend and knowledge sources are shared and must be safely shareable.
class Pipeline {
public:
    Pipeline(backend::Backend& backend,
             std::vector<backend::KnowledgeSource*> sources,
             PipelineConfig config = {});

    StructureAnalysis analyze_structure(const std::string& question);
    StructureAnalysis refine_analysis(const StructureAnalysis& analysis);
    ReasoningStep next_step();
    RetrievedKnowledge retrieve(const std::string& query);
    RefinementResult refine_step(ReasoningStep& step);
    std::string consolidate();

    /// The full staged run; returns a transcript even on failure, with the
    /// failing stage recorded in transcript.error.
    Transcript run(const std::string& question);

    const SharedMemory& memory() const { return memory_; }
    const Transcript& transcript() const { return transcript_; }
    const PromptLibrary& prompts() const { return prompts_; }

private:
    backend::ChatResponse call(const std::string& stage,
                               const RenderedPrompt& prompt);
    void record_store();

    backend::Backend& backend_;
    std::vector<backend::KnowledgeSource*> sources_;
    PipelineConfig config_;
    PromptLibrary prompts_;
    SharedMemory memory_;
    Transcript transcript_;
};

/// Parses an agent analysis response into its four sections plus grammar
/// notes. Throws ParseError when a required section is missing.
StructureAnalysis parse_analysis(const std::string& text);

/// Parses a reasoning response: thought, retrieval decision and query, and
/// the terminal marker.
ReasoningStep parse_reasoning(const std::string& text,
                              const std::string& terminal_marker);

RefinementResult parse_refinement(const std::string& text);

}  // namespace sara::agents
