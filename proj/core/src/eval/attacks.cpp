#include "sara/eval/eval.hpp"

#include <stdexcept>

namespace sara::eval {

std::string inject_preemptive(const std::string& question,
                              const std::string& target_answer) {
    if (target_answer.empty())
        throw std::invalid_argument("preemptive attack: empty target answer");
    std::string sentence = kPreemptiveTemplate;
    auto pos = sentence.find("{target}");
    sentence.replace(pos, std::string("{target}").size(), target_answer);
    return question + " " + sentence;
}

std::vector<Demonstration> poison_demonstrations(
    const std::vector<Demonstration>& demos, const AttackSpec& spec) {
    if (spec.kind != AttackKind::BadChain)
        throw std::invalid_argument(
            "poison_demonstrations requires a badchain spec");
    std::vector<Demonstration> poisoned;
    poisoned.reserve(demos.size());
    for (const auto& demo : demos) {
        poisoned.push_back({demo.question + " " + spec.trigger,
                            demo.rationale + " " + spec.backdoor_step});
    }
    return poisoned;
}

}  // namespace sara::eval
