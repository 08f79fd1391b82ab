#include "sara/backend/backend.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT_DISABLED
#include <httplib.h>

#include <cstdlib>
#include <fstream>
#include <regex>
#include <thread>

namespace sara::backend {

void BackendConfig::validate() const {
    if (kind == Kind::Http) {
        if (endpoint.empty())
            throw std::invalid_argument("backend: http kind requires endpoint");
        if (model_id.empty())
            throw std::invalid_argument("backend: http kind requires model_id");
    }
    if (retry.max_attempts < 1)
        throw std::invalid_argument("backend: retry attempts must be >= 1");
}

MockScript MockScript::from_json(const nlohmann::json& j) {
    MockScript script;
    script.strict = j.value("strict", true);
    for (const auto& e : j.at("entries")) {
        script.entries.push_back(
            {e.value("match", ""), e.at("response").get<std::string>()});
    }
    return script;
}

MockScript MockScript::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open mock script " + path);
    nlohmann::json j;
    in >> j;
    return from_json(j);
}

namespace {

bool matches(const std::string& matcher, const std::string& prompt) {
    if (matcher.empty()) return true;
    if (matcher.rfind("re:", 0) == 0) {
        return std::regex_search(prompt, std::regex(matcher.substr(3)));
    }
    return prompt.find(matcher) != std::string::npos;
}

}  // namespace

MockBackend::MockBackend(MockScript script) : script_(std::move(script)) {}

ChatResponse MockBackend::complete(const ChatRequest& request) {
    std::lock_guard lock(mutex_);
    std::string prompt = request.system_text + "\n" + request.user_text;
    if (script_.strict) {
        if (next_ >= script_.entries.size())
            throw MockScriptExhausted("mock script exhausted at call " +
                                      std::to_string(next_ + 1));
        const auto& entry = script_.entries[next_];
        if (!matches(entry.matcher, prompt))
            throw MockMatcherMismatch("mock matcher mismatch at entry " +
                                      std::to_string(next_ + 1) +
                                      ": expected \"" + entry.matcher + "\"");
        ++next_;
        return ChatResponse{entry.response};
    }
    for (const auto& entry : script_.entries) {
        if (matches(entry.matcher, prompt)) return ChatResponse{entry.response};
    }
    throw MockMatcherMismatch("no mock entry matches the prompt");
}

std::size_t MockBackend::consumed() const {
    std::lock_guard lock(mutex_);
    return next_;
}

bool MockBackend::exhausted() const {
    std::lock_guard lock(mutex_);
    return next_ >= script_.entries.size();
}

HttpBackend::HttpBackend(BackendConfig config) : config_(std::move(config)) {
    config_.validate();
}

ChatResponse HttpBackend::complete(const ChatRequest& request) {
    std::string api_key;
    if (!config_.api_key_env.empty()) {
        const char* value = std::getenv(config_.api_key_env.c_str());
        if (!value)
            throw HttpBackendError("environment variable " +
                                   config_.api_key_env + " is not set");
        api_key = value;
    }

    nlohmann::json body;
    body["model"] = request.model_id.empty() ? config_.model_id
                                             : request.model_id;
    body["messages"] = nlohmann::json::array();
    if (!request.system_text.empty())
        body["messages"].push_back(
            {{"role", "system"}, {"content", request.system_text}});
    body["messages"].push_back(
        {{"role", "user"}, {"content", request.user_text}});
    body["temperature"] = request.temperature;
    body["max_tokens"] = request.max_tokens;

    std::string last_error;
    auto backoff = config_.retry.backoff_base;
    for (int attempt = 1; attempt <= config_.retry.max_attempts; ++attempt) {
        if (attempt > 1) {
            std::this_thread::sleep_for(backoff);
            backoff *= 2;
        }
        httplib::Client client(config_.endpoint);
        client.set_read_timeout(config_.timeout);
        client.set_connection_timeout(config_.timeout);
        httplib::Headers headers;
        if (!api_key.empty())
            headers.emplace("Authorization", "Bearer " + api_key);

        auto start = std::chrono::steady_clock::now();
        auto res = client.Post("/v1/chat/completions", headers, body.dump(),
                               "application/json");
        auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - start);

        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 429 || res->status >= 500) {
            last_error = "http status " + std::to_string(res->status);
            continue;
        }
        if (res->status < 200 || res->status >= 300)
            throw HttpBackendError("chat completion failed with status " +
                                   std::to_string(res->status) + ": " +
                                   res->body);

        auto j = nlohmann::json::parse(res->body);
        ChatResponse response;
        response.text =
            j.at("choices").at(0).at("message").at("content").get<std::string>();
        if (j.contains("usage")) {
            response.prompt_tokens = j["usage"].value("prompt_tokens", 0);
            response.completion_tokens =
                j["usage"].value("completion_tokens", 0);
        }
        response.latency = elapsed;
        return response;
    }
    throw HttpBackendError("chat completion failed after " +
                           std::to_string(config_.retry.max_attempts) +
                           " attempts: " + last_error);
}

std::unique_ptr<Backend> make_backend(const BackendConfig& config,
                                      const MockScript* script) {
    config.validate();
    if (config.kind == BackendConfig::Kind::Mock) {
        return std::make_unique<MockBackend>(script ? *script : MockScript{});
    }
    return std::make_unique<HttpBackend>(config);
}

ChatResponse complete(const ChatRequest& request, const BackendConfig& config,
                      const MockScript* script) {
    return make_backend(config, script)->complete(request);
}

}  // namespace sara::backend
