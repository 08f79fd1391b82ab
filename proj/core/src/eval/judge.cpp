#include "sara/eval/eval.hpp"

namespace sara::eval {

namespace {

// Composed equivalence check; verdict parsing accepts a plain yes/no on the
// first line so any chat model can serve as the judge.
std::string judge_prompt(const std::string& prediction,
                         const TaskRecord& record) {
    return "You are grading an answer to a question.\n"
           "Question: " + record.question + "\n"
           "Gold answer: " + record.gold + "\n"
           "Predicted answer: " + prediction + "\n"
           "Does the predicted answer mean the same thing as the gold "
           "answer? Reply with a single word, yes or no, then a short "
           "reason.";
}

bool starts_with_yes(const std::string& text) {
    std::size_t i = 0;
    while (i < text.size() &&
           std::isspace(static_cast<unsigned char>(text[i])))
        ++i;
    std::string head;
    while (i < text.size() &&
           std::isalpha(static_cast<unsigned char>(text[i])))
        head += static_cast<char>(std::tolower(text[i++]));
    return head == "yes";
}

bool starts_with_no(const std::string& text) {
    std::size_t i = 0;
    while (i < text.size() &&
           std::isspace(static_cast<unsigned char>(text[i])))
        ++i;
    std::string head;
    while (i < text.size() &&
           std::isalpha(static_cast<unsigned char>(text[i])))
        head += static_cast<char>(std::tolower(text[i++]));
    return head == "no";
}

}  // namespace

JudgeVerdict judge(const std::string& prediction, const TaskRecord& record,
                   JudgeMode mode, backend::Backend* backend) {
    if (mode == JudgeMode::Exact) {
        JudgeVerdict verdict;
        verdict.judge_kind = JudgeMode::Exact;
        verdict.correct =
            normalize_answer(prediction) == normalize_answer(record.gold);
        verdict.rationale = verdict.correct ? "exact match after normalization"
                                            : "mismatch after normalization";
        return verdict;
    }

    if (!backend)
        throw std::invalid_argument("llm judge requires a backend");

    JudgeVerdict verdict;
    verdict.judge_kind = JudgeMode::Llm;
    backend::ChatRequest request;
    request.user_text = judge_prompt(prediction, record);
    for (int attempt = 0; attempt < 2; ++attempt) {
        auto response = backend->complete(request);
        if (starts_with_yes(response.text)) {
            verdict.correct = true;
            verdict.rationale = response.text;
            return verdict;
        }
        if (starts_with_no(response.text)) {
            verdict.correct = false;
            verdict.rationale = response.text;
            return verdict;
        }
        verdict.rationale = "judge output unparsable: " + response.text;
    }
    verdict.correct = false;
    return verdict;
}

}  // namespace sara::eval
