#pragma once

#include <nlohmann/json.hpp>

#include <chrono>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace sara::backend {

struct ChatRequest {
    std::string system_text;
    std::string user_text;
    double temperature = 0.0;
    int max_tokens = 1024;
    std::string model_id;
};

struct ChatResponse {
    std::string text;
    int prompt_tokens = 0;
    int completion_tokens = 0;
    std::chrono::milliseconds latency{0};
};

struct RetryPolicy {
    int max_attempts = 3;
    std::chrono::milliseconds backoff_base{100};
};

struct BackendConfig {
    enum class Kind { Mock, Http };
    Kind kind = Kind::Mock;
    std::string endpoint;     // http only, e.g. http://host:port
    std::string api_key_env;  // name of the env var holding the key
    std::string model_id;
    std::chrono::milliseconds timeout{30000};
    RetryPolicy retry;

    void validate() const;
};

// Errors are distinct so tests and callers can tell them apart.
struct BackendError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MockScriptExhausted : BackendError {
    using BackendError::BackendError;
};
struct MockMatcherMismatch : BackendError {
    using BackendError::BackendError;
};
struct HttpBackendError : BackendError {
    using BackendError::BackendError;
};

/// One scripted exchange: the matcher must appear in the rendered prompt
/// (plain substring, or a regex when prefixed with "re:").
struct MockScriptEntry {
    std::string matcher;
    std::string response;
};

struct MockScript {
    std::vector<MockScriptEntry> entries;
    bool strict = true;  // consume entries in order, matcher must match

    static MockScript from_json(const nlohmann::json& j);
    static MockScript load(const std::string& path);
};

class Backend {
public:
    virtual ~Backend() = default;
    virtual ChatResponse complete(const ChatRequest& request) = 0;
};

/// Deterministic scripted backend. Strict mode serializes calls and fails
/// loudly on any deviation from the script.
class MockBackend : public Backend {
public:
    explicit MockBackend(MockScript script);

    ChatResponse complete(const ChatRequest& request) override;

    std::size_t consumed() const;
    bool exhausted() const;

private:
    MockScript script_;
    std::size_t next_ = 0;
    mutable std::mutex mutex_;
};

/// OpenAI-compatible chat-completions client with bounded retries and
/// exponential backoff. Reads the API key from the configured env var.
class HttpBackend : public Backend {
public:
    explicit HttpBackend(BackendConfig config);

    ChatResponse complete(const ChatRequest& request) override;

private:
    BackendConfig config_;
};

std::unique_ptr<Backend> make_backend(const BackendConfig& config,
                                      const MockScript* script = nullptr);

/// Convenience wrapper matching the one-shot call shape.
ChatResponse complete(const ChatRequest& request, const BackendConfig& config,
                      const MockScript* script = nullptr);

}  // namespace sara::backend
