#include "sara/agents/types.hpp"

#include <sstream>

namespace sara::agents {

namespace {

nlohmann::ordered_json list_json(const std::vector<std::string>& items) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& s : items) j.push_back(s);
    return j;
}

}  // namespace

std::string StructureAnalysis::to_text() const {
    std::ostringstream os;
    os << "1. Identify Key Components:\n";
    for (const auto& c : key_components) os << "- " << c << '\n';
    os << "2. Relationship between Components:\n" << relationships << '\n';
    os << "3. Sub-Question Decomposition:\n";
    for (std::size_t i = 0; i < sub_questions.size(); ++i)
        os << i + 1 << ". " << sub_questions[i] << '\n';
    os << "4. Implications for Solving the Problem:\n";
    for (std::size_t i = 0; i < implications.size(); ++i)
        os << i + 1 << ". " << implications[i] << '\n';
    return os.str();
}

nlohmann::ordered_json StructureAnalysis::to_json() const {
    nlohmann::ordered_json j;
    j["grammar_notes"] = grammar_notes;
    j["key_components"] = list_json(key_components);
    j["relationships"] = relationships;
    j["sub_questions"] = list_json(sub_questions);
    j["implications"] = list_json(implications);
    j["refined"] = refined;
    return j;
}

nlohmann::ordered_json RefinementResult::to_json() const {
    nlohmann::ordered_json j;
    j["aligned_with_analysis"] = aligned_with_analysis;
    j["consistent_with_trajectory"] = consistent_with_trajectory;
    j["factually_correct"] = factually_correct;
    j["reasons"] = reasons;
    if (revised_text) j["revised_text"] = *revised_text;
    j["unparsed"] = unparsed;
    return j;
}

nlohmann::ordered_json ReasoningStep::to_json() const {
    nlohmann::ordered_json j;
    j["index"] = index;
    j["thought"] = thought;
    j["needs_retrieval"] = needs_retrieval;
    if (retrieval_query) j["retrieval_query"] = *retrieval_query;
    if (retrieved_ref) j["retrieved_ref"] = *retrieved_ref;
    if (refinement) j["refinement"] = refinement->to_json();
    j["terminal"] = terminal;
    j["unparsed"] = unparsed;
    return j;
}

nlohmann::ordered_json RetrievedKnowledge::to_json() const {
    nlohmann::ordered_json j;
    j["requirement"] = requirement;
    j["retrieval_key"] = retrieval_key;
    j["source_id"] = source_id;
    j["raw"] = raw;
    j["extracted"] = extracted;
    j["suggestions"] = list_json(suggestions);
    j["hit"] = hit;
    return j;
}

std::string RetrievedKnowledge::to_text() const {
    std::ostringstream os;
    os << "Retrieval entity: " << retrieval_key << '\n'
       << "Extracted info: " << extracted;
    if (!hit && !suggestions.empty()) {
        os << "\nSuggestions:";
        for (const auto& s : suggestions) os << ' ' << s << ';';
    }
    return os.str();
}

nlohmann::ordered_json SharedMemory::to_json() const {
    nlohmann::ordered_json j;
    j["question"] = question;
    if (analysis) j["analysis"] = analysis->to_json();
    auto& steps = j["trajectory"] = nlohmann::ordered_json::array();
    for (const auto& s : trajectory) steps.push_back(s.to_json());
    auto& known = j["retrieved"] = nlohmann::ordered_json::array();
    for (const auto& r : retrieved) known.push_back(r.to_json());
    if (final_answer) j["final_answer"] = *final_answer;
    return j;
}

std::vector<std::string> Transcript::stage_labels() const {
    std::vector<std::string> labels;
    labels.reserve(stages.size());
    for (const auto& s : stages) labels.push_back(s.label);
    return labels;
}

nlohmann::ordered_json Transcript::to_json() const {
    nlohmann::ordered_json j;
    j["question"] = question;
    j["config_digest"] = config_digest;
    j["budget_exhausted"] = budget_exhausted;
    if (error) j["error"] = *error;
    auto& stage_list = j["stages"] = nlohmann::ordered_json::array();
    for (const auto& stage : stages) {
        nlohmann::ordered_json s;
        s["label"] = stage.label;
        auto& calls = s["calls"] = nlohmann::ordered_json::array();
        for (const auto& call : stage.calls) {
            nlohmann::ordered_json c;
            c["template"] = call.template_name;
            c["template_sha256"] = call.template_sha256;
            c["prompt"] = call.prompt;
            c["response"] = call.response;
            c["elapsed_ms"] = call.elapsed_ms;
            calls.push_back(std::move(c));
        }
        if (!stage.note.empty()) s["note"] = stage.note;
        stage_list.push_back(std::move(s));
    }
    j["memory"] = memory.to_json();
    return j;
}

std::string Transcript::to_text() const { return to_json().dump(2) + "\n"; }

}  // namespace sara::agents
