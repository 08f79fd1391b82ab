#include "sara/eval/eval.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>

namespace sara::eval {

TaskKind kind_from_string(const std::string& name) {
    if (name == "hotpotqa") return TaskKind::HotpotQa;
    if (name == "fever") return TaskKind::Fever;
    if (name == "mmlu") return TaskKind::Mmlu;
    throw std::invalid_argument("unknown task kind '" + name + "'");
}

std::string to_string(TaskKind kind) {
    switch (kind) {
        case TaskKind::HotpotQa: return "hotpotqa";
        case TaskKind::Fever: return "fever";
        case TaskKind::Mmlu: return "mmlu";
    }
    return "?";
}

std::string normalize_fever_label(const std::string& label) {
    std::string u;
    for (char c : label) {
        if (std::isalnum(static_cast<unsigned char>(c)))
            u += static_cast<char>(std::toupper(c));
    }
    if (u == "SUPPORTS" || u == "SUPPORTED") return "SUPPORTS";
    if (u == "REFUTES" || u == "REFUTED") return "REFUTES";
    if (u == "NOTENOUGHINFO") return "NOT ENOUGH INFO";
    throw std::invalid_argument("unknown fever label '" + label + "'");
}

void TaskRecord::validate() const {
    if (id.empty()) throw std::invalid_argument("record: missing id");
    if (question.empty())
        throw std::invalid_argument("record " + id + ": empty question");
    if (gold.empty())
        throw std::invalid_argument("record " + id + ": empty gold answer");
    if (kind == TaskKind::Mmlu) {
        bool found = std::any_of(options.begin(), options.end(),
                                 [&](const auto& o) { return o.first == gold; });
        if (!found)
            throw std::invalid_argument("record " + id +
                                        ": gold is not an option label");
    }
}

TaskRecord parse_record(const nlohmann::json& j, TaskKind kind, int lineno) {
    auto fail = [&](const std::string& why) -> std::runtime_error {
        return std::runtime_error("dataset line " + std::to_string(lineno) +
                                  ": " + why);
    };
    TaskRecord record;
    record.kind = kind;
    if (j.contains("id")) {
        record.id = j["id"].is_string() ? j["id"].get<std::string>()
                                        : j["id"].dump();
    } else {
        record.id = std::to_string(lineno);
    }
    if (j.contains("question"))
        record.question = j["question"].get<std::string>();
    else if (j.contains("claim"))
        record.question = j["claim"].get<std::string>();
    else
        throw fail("missing question/claim");

    if (j.contains("options")) {
        for (const auto& [label, text] : j["options"].items())
            record.options.emplace_back(label, text.get<std::string>());
        std::sort(record.options.begin(), record.options.end());
    }

    std::string gold;
    if (j.contains("answer"))
        gold = j["answer"].get<std::string>();
    else if (j.contains("label"))
        gold = j["label"].get<std::string>();
    else
        throw fail("missing answer/label");
    record.gold = kind == TaskKind::Fever ? normalize_fever_label(gold) : gold;

    try {
        record.validate();
    } catch (const std::invalid_argument& e) {
        throw fail(e.what());
    }
    return record;
}

std::vector<TaskRecord> load_records(const std::string& path, TaskKind kind) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset " + path);
    std::vector<TaskRecord> records;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw std::runtime_error("dataset line " + std::to_string(lineno) +
                                     ": malformed json");
        records.push_back(parse_record(j, kind, lineno));
    }
    return records;
}

std::string normalize_answer(const std::string& text) {
    std::string out;
    for (char c : text) {
        unsigned char u = static_cast<unsigned char>(c);
        if (std::isalnum(u)) {
            out += static_cast<char>(std::tolower(u));
        } else if (std::isspace(u) && !out.empty() && out.back() != ' ') {
            out += ' ';
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

}  // namespace sara::eval
