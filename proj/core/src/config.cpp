#include "sara/config.hpp"

#include <fstream>
#include <sstream>

namespace sara {

namespace {

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key " + key + ": '" + value +
                          "' is not an integer");
    }
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key " + key + ": '" + value +
                          "' is not a number");
    }
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::istringstream is(value);
    std::string item;
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

CliConfig CliConfig::parse(const std::string& text) {
    CliConfig config;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));

        if (key == "backend.kind") config.backend_kind = value;
        else if (key == "backend.endpoint") config.backend_endpoint = value;
        else if (key == "backend.model") config.backend_model = value;
        else if (key == "backend.api_key_env") config.backend_api_key_env = value;
        else if (key == "backend.timeout") config.backend_timeout_ms = parse_int(key, value);
        else if (key == "pipeline.max_steps") config.pipeline_max_steps = parse_int(key, value);
        else if (key == "pipeline.temperature") config.pipeline_temperature = parse_double(key, value);
        else if (key == "retrieval.sources") config.retrieval_sources = split_list(value);
        else if (key == "retrieval.stub_corpus_path") config.retrieval_stub_corpus_path = value;
        else if (key == "eval.parallelism") config.eval_parallelism = parse_int(key, value);
        else if (key == "eval.judge_mode") config.eval_judge_mode = value;
        else if (key == "theory.seed") config.theory_seed = static_cast<std::uint64_t>(parse_int(key, value));
        else if (key == "theory.count") config.theory_count = parse_int(key, value);
        else if (key == "theory.tolerance") config.theory_tolerance = parse_double(key, value);
        else
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": unknown key '" + key + "'");
    }
    config.validate();
    return config;
}

CliConfig CliConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

void CliConfig::validate() const {
    if (backend_kind != "mock" && backend_kind != "http")
        throw ConfigError("backend.kind must be mock or http, got '" +
                          backend_kind + "'");
    if (backend_kind == "http" && backend_endpoint.empty())
        throw ConfigError("backend.endpoint required when backend.kind = http");
    if (backend_timeout_ms <= 0)
        throw ConfigError("backend.timeout must be positive");
    if (pipeline_max_steps < 1)
        throw ConfigError("pipeline.max_steps must be >= 1");
    if (pipeline_temperature < 0)
        throw ConfigError("pipeline.temperature must be >= 0");
    for (const auto& source : retrieval_sources)
        if (source != "stub" && source != "wikipedia")
            throw ConfigError("retrieval.sources: unknown source '" + source +
                              "'");
    if (eval_parallelism < 1)
        throw ConfigError("eval.parallelism must be >= 1");
    if (eval_judge_mode != "exact" && eval_judge_mode != "llm")
        throw ConfigError("eval.judge_mode must be exact or llm, got '" +
                          eval_judge_mode + "'");
    if (theory_count < 1) throw ConfigError("theory.count must be >= 1");
    if (theory_tolerance < 0)
        throw ConfigError("theory.tolerance must be >= 0");
}

backend::BackendConfig CliConfig::backend_config() const {
    backend::BackendConfig config;
    config.kind = backend_kind == "http" ? backend::BackendConfig::Kind::Http
                                         : backend::BackendConfig::Kind::Mock;
    config.endpoint = backend_endpoint;
    config.api_key_env = backend_api_key_env;
    config.model_id = backend_model;
    config.timeout = std::chrono::milliseconds(backend_timeout_ms);
    return config;
}

agents::PipelineConfig CliConfig::pipeline_config() const {
    agents::PipelineConfig config;
    config.max_steps = pipeline_max_steps;
    config.temperature = pipeline_temperature;
    return config;
}

}  // namespace sara
