#include "sara/agents/pipeline.hpp"

#include "sara/agents/section_parser.hpp"
#include "sara/util/sha256.hpp"

#include <algorithm>
#include <sstream>

namespace sara::agents {

namespace {

const SectionSchema kAnalysisSchema{{
    {"Identify Key Components", true, {"Key Components"}},
    {"Relationship between Components",
     true,
     {"Relationships between Components", "Relationship Between Components",
      "Relationships"}},
    {"Sub-Question Decomposition", true, {"Sub-Questions", "Sub-Question"}},
    {"Implications for Solving the Problem", true, {"Implications"}},
}};

bool parse_yes_no(const std::string& value, bool fallback) {
    std::string v;
    for (char c : trim(value)) {
        if (std::isalpha(static_cast<unsigned char>(c)))
            v += static_cast<char>(std::tolower(c));
        else
            break;
    }
    if (v == "yes" || v == "true") return true;
    if (v == "no" || v == "false") return false;
    return fallback;
}

// First "Key: value" line (case-insensitive key, rest of line as value);
// returns false when the key never appears.
bool find_field(const std::string& text, const std::string& key,
                std::string& value) {
    std::istringstream is(text);
    std::string line;
    std::string want = key;
    std::transform(want.begin(), want.end(), want.begin(), ::tolower);
    while (std::getline(is, line)) {
        std::string lowered = line;
        std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                       ::tolower);
        auto pos = lowered.find(want);
        if (pos == std::string::npos) continue;
        // key must start the line (ignoring whitespace)
        if (trim(lowered.substr(0, pos)) != "") continue;
        auto colon = line.find(':', pos + key.size() - 1);
        value = colon == std::string::npos ? "" : trim(line.substr(colon + 1));
        return true;
    }
    return false;
}

std::string last_nonempty_line(const std::string& text) {
    std::istringstream is(text);
    std::string line, last;
    while (std::getline(is, line)) {
        if (!trim(line).empty()) last = trim(line);
    }
    return last;
}

std::string knowledge_text(const SharedMemory& memory) {
    if (memory.retrieved.empty()) return "(none)";
    std::ostringstream os;
    for (std::size_t i = 0; i < memory.retrieved.size(); ++i) {
        if (i) os << '\n';
        os << memory.retrieved[i].to_text();
    }
    return os.str();
}

std::string trajectory_text(const SharedMemory& memory) {
    if (memory.trajectory.empty()) return "(none)";
    std::ostringstream os;
    for (const auto& step : memory.trajectory) {
        os << "Step " << step.index << ": " << step.thought << '\n';
    }
    return os.str();
}

}  // namespace

StructureAnalysis parse_analysis(const std::string& text) {
    auto sections = parse_structured(text, kAnalysisSchema);
    StructureAnalysis analysis;
    analysis.grammar_notes = sections.preamble;
    analysis.key_components =
        split_items(*sections.find("Identify Key Components"));
    analysis.relationships = *sections.find("Relationship between Components");
    analysis.sub_questions =
        split_items(*sections.find("Sub-Question Decomposition"));
    analysis.implications =
        split_items(*sections.find("Implications for Solving the Problem"));
    if (analysis.key_components.empty())
        throw ParseError("Identify Key Components");
    if (analysis.sub_questions.empty())
        throw ParseError("Sub-Question Decomposition");
    return analysis;
}

ReasoningStep parse_reasoning(const std::string& text,
                              const std::string& terminal_marker) {
    ReasoningStep step;
    {
        std::istringstream is(text);
        std::string line;
        while (std::getline(is, line)) {
            if (trim(line) == terminal_marker) step.terminal = true;
        }
    }
    std::string thought;
    if (!find_field(text, "Thought", thought) || trim(thought).empty())
        throw ParseError("Thought");
    step.thought = thought;

    std::string needs;
    if (find_field(text, "Retrieval needed", needs))
        step.needs_retrieval = parse_yes_no(needs, false);
    if (step.needs_retrieval) {
        std::string query;
        if (!find_field(text, "Retrieval query", query) || trim(query).empty())
            throw ParseError("Retrieval query");
        step.retrieval_query = query;
    }
    return step;
}

RefinementResult parse_refinement(const std::string& text) {
    RefinementResult result;
    std::string aligned, consistent, factual, reasons;
    if (!find_field(text, "Aligned with analysis", aligned) ||
        !find_field(text, "Consistent with trajectory", consistent) ||
        !find_field(text, "Factually correct", factual))
        throw ParseError("Aligned with analysis");
    if (!find_field(text, "Reasons", reasons) || trim(reasons).empty())
        throw ParseError("Reasons");
    result.aligned_with_analysis = parse_yes_no(aligned, true);
    result.consistent_with_trajectory = parse_yes_no(consistent, true);
    result.factually_correct = parse_yes_no(factual, true);
    result.reasons = reasons;
    std::string revised;
    if (find_field(text, "Revised step", revised) && !trim(revised).empty())
        result.revised_text = revised;
    return result;
}

Pipeline::Pipeline(backend::Backend& backend,
                   std::vector<backend::KnowledgeSource*> sources,
                   PipelineConfig config)
    : backend_(backend),
      sources_(std::move(sources)),
      config_(std::move(config)),
      prompts_(config_.prompt_dir.empty() ? PromptLibrary::default_prompt_dir()
                                          : config_.prompt_dir) {
    std::ostringstream cfg;
    cfg << config_.max_steps << '|' << config_.parse_retries << '|'
        << config_.temperature << '|' << config_.terminal_marker;
    transcript_.config_digest = util::sha256_hex(cfg.str());
}

backend::ChatResponse Pipeline::call(const std::string& stage,
                                     const RenderedPrompt& prompt) {
    backend::ChatRequest request;
    request.system_text = prompts_.render("system", {}).text;
    request.user_text = prompt.text;
    request.temperature = config_.temperature;
    // Open the stage before the call so a backend failure is attributed to it.
    if (transcript_.stages.empty() || transcript_.stages.back().label != stage)
        transcript_.stages.push_back({stage, {}, {}});
    auto response = backend_.complete(request);
    TranscriptCall call;
    call.prompt = prompt.text;
    call.response = response.text;
    call.template_name = prompt.template_name;
    call.template_sha256 = prompt.template_sha256;
    call.elapsed_ms = config_.record_timings ? response.latency.count() : 0;
    transcript_.stages.back().calls.push_back(std::move(call));
    return response;
}

void Pipeline::record_store() {
    transcript_.stages.push_back({"store", {}, {}});
}

StructureAnalysis Pipeline::analyze_structure(const std::string& question) {
    if (trim(question).empty())
        throw PipelineError("analyze", "empty question");
    auto prompt = prompts_.render("analysis", {{"question", question}});
    std::string raw;
    for (int attempt = 0; attempt <= config_.parse_retries; ++attempt) {
        auto response = call("analyze", prompt);
        raw = response.text;
        try {
            return parse_analysis(raw);
        } catch (const ParseError& e) {
            if (attempt == config_.parse_retries)
                throw PipelineError(
                    "analyze", std::string("analysis parse failed (") +
                                   e.what() + "); raw response retained: " +
                                   raw);
        }
    }
    throw PipelineError("analyze", "unreachable");
}

StructureAnalysis Pipeline::refine_analysis(const StructureAnalysis& analysis) {
    auto prompt =
        prompts_.render("refine_analysis",
                        {{"question", memory_.question.empty()
                              ? transcript_.question
                              : memory_.question},
                         {"analysis", analysis.to_text()},
                         {"knowledge", knowledge_text(memory_)}});
    auto response = call("refine_analysis", prompt);

    StructureAnalysis refined = analysis;
    refined.refined = true;
    std::string judgement;
    if (!find_field(response.text, "Judgement", judgement)) {
        transcript_.stages.back().note =
            "refiner output unparsed; original analysis retained";
        return refined;
    }
    std::string verdict = trim(judgement);
    std::transform(verdict.begin(), verdict.end(), verdict.begin(), ::tolower);
    if (verdict.rfind("revise", 0) == 0) {
        auto marker = response.text.find("Revised analysis:");
        std::string body = marker == std::string::npos
                               ? response.text
                               : response.text.substr(
                                     marker + std::string("Revised analysis:")
                                                  .size());
        try {
            StructureAnalysis revised = parse_analysis(body);
            revised.refined = true;
            return revised;
        } catch (const ParseError&) {
            transcript_.stages.back().note =
                "revision unparsable; original analysis retained";
        }
    }
    return refined;
}

ReasoningStep Pipeline::next_step() {
    if (!memory_.analysis)
        throw PipelineError("reason", "analysis missing from memory");
    if (static_cast<int>(memory_.trajectory.size()) >= config_.max_steps)
        throw PipelineError("reason", "step budget exhausted");

    auto prompt = prompts_.render(
        "iterative", {{"problem", memory_.question},
                      {"analysis", memory_.analysis->to_text()},
                      {"thoughts", trajectory_text(memory_)},
                      {"knowledge", knowledge_text(memory_)},
                      {"terminal_marker", config_.terminal_marker}});
    std::string raw;
    for (int attempt = 0; attempt <= config_.parse_retries; ++attempt) {
        auto response = call("reason", prompt);
        raw = response.text;
        try {
            return parse_reasoning(raw, config_.terminal_marker);
        } catch (const ParseError&) {
        }
    }
    // Tolerated parse failure: keep the raw text as the thought.
    ReasoningStep step;
    step.thought = raw;
    step.needs_retrieval = false;
    step.unparsed = true;
    return step;
}

RetrievedKnowledge Pipeline::retrieve(const std::string& query) {
    if (trim(query).empty())
        throw PipelineError("retrieve", "empty retrieval query");
    if (sources_.empty())
        throw PipelineError("retrieve", "no knowledge source configured");

    std::string source_names;
    for (std::size_t i = 0; i < sources_.size(); ++i) {
        if (i) source_names += ", ";
        source_names += sources_[i]->id();
    }
    auto prompt = prompts_.render("retrieval", {{"requirement", query},
                                                {"sources", source_names}});
    auto response = call("retrieve", prompt);

    RetrievedKnowledge knowledge;
    knowledge.requirement = query;
    std::string key;
    if (!find_field(response.text, "Retrieval key", key) || trim(key).empty())
        key = query;
    knowledge.retrieval_key = key;

    std::string preferred;
    find_field(response.text, "Source", preferred);
    preferred = trim(preferred);

    // Preferred source first, then the configured order; failover only on
    // unreachable sources, not on misses.
    std::vector<backend::KnowledgeSource*> order;
    for (auto* s : sources_) {
        if (s->id() == preferred) order.push_back(s);
    }
    for (auto* s : sources_) {
        if (s->id() != preferred) order.push_back(s);
    }

    std::string last_error;
    bool answered = false;
    for (auto* source : order) {
        auto fetched = source->fetch(knowledge.retrieval_key);
        if (fetched.status == backend::FetchResult::Status::Error) {
            last_error = source->id() + ": " + fetched.error;
            continue;
        }
        knowledge.source_id = source->id();
        if (fetched.hit()) {
            knowledge.hit = true;
            knowledge.raw = fetched.text;
            auto extraction = prompts_.render(
                "extraction",
                {{"step", query}, {"info", fetched.text}});
            auto extracted = call("retrieve", extraction);
            std::string info;
            if (find_field(extracted.text, "Extracted info", info) &&
                !trim(info).empty())
                knowledge.extracted = info;
            else
                knowledge.extracted = trim(extracted.text);
        } else {
            knowledge.suggestions = fetched.suggestions;
        }
        answered = true;
        break;
    }
    if (!answered) {
        // every source unreachable: report a miss carrying the failure
        knowledge.source_id = "none";
        transcript_.stages.back().note = "all sources failed: " + last_error;
    }
    return knowledge;
}

RefinementResult Pipeline::refine_step(ReasoningStep& step) {
    auto prompt = prompts_.render(
        "refine_step",
        {{"analysis",
          memory_.analysis ? memory_.analysis->to_text() : "(none)"},
         {"thought", step.thought},
         {"knowledge", knowledge_text(memory_)}});
    auto response = call("refine_step", prompt);

    RefinementResult result;
    try {
        result = parse_refinement(response.text);
    } catch (const ParseError&) {
        result.aligned_with_analysis = true;
        result.consistent_with_trajectory = true;
        result.factually_correct = true;
        result.reasons = response.text;
        result.unparsed = true;
    }
    if (result.revised_text) {
        transcript_.stages.back().note = "original thought: " + step.thought;
        step.thought = *result.revised_text;
    }
    return result;
}

std::string Pipeline::consolidate() {
    if (memory_.trajectory.empty())
        throw PipelineError("consolidate", "empty trajectory");
    if (memory_.final_answer)
        throw PipelineError("consolidate", "final answer already set");

    auto prompt = prompts_.render(
        "consolidate", {{"problem", memory_.question},
                        {"analysis", memory_.analysis
                                         ? memory_.analysis->to_text()
                                         : "(none)"},
                        {"thoughts", trajectory_text(memory_)}});
    auto response = call("consolidate", prompt);
    if (trim(response.text).empty())
        throw PipelineError("consolidate", "backend returned empty answer");

    std::string answer;
    if (!find_field(response.text, "Final answer", answer) ||
        trim(answer).empty())
        answer = last_nonempty_line(response.text);
    memory_.final_answer = answer;
    return answer;
}

Transcript Pipeline::run(const std::string& question) {
    memory_ = SharedMemory{};
    memory_.question = question;
    auto digest = transcript_.config_digest;
    transcript_ = Transcript{};
    transcript_.question = question;
    transcript_.config_digest = digest;

    try {
        auto analysis = analyze_structure(question);
        analysis = refine_analysis(analysis);
        memory_.analysis = analysis;
        record_store();

        bool terminal = false;
        while (static_cast<int>(memory_.trajectory.size()) <
               config_.max_steps) {
            auto step = next_step();
            if (step.needs_retrieval && step.retrieval_query) {
                auto knowledge = retrieve(*step.retrieval_query);
                memory_.retrieved.push_back(knowledge);
                step.retrieved_ref =
                    static_cast<int>(memory_.retrieved.size()) - 1;
            }
            step.refinement = refine_step(step);
            step.index = static_cast<int>(memory_.trajectory.size()) + 1;
            memory_.trajectory.push_back(step);
            record_store();
            if (step.terminal) {
                terminal = true;
                break;
            }
        }
        transcript_.budget_exhausted = !terminal;
        consolidate();
    } catch (const PipelineError& e) {
        transcript_.error = e.what();
    } catch (const backend::BackendError& e) {
        std::string stage = transcript_.stages.empty()
                                ? "start"
                                : transcript_.stages.back().label;
        transcript_.error = stage + ": " + e.what();
    }
    transcript_.memory = memory_;
    return transcript_;
}

}  // namespace sara::agents
