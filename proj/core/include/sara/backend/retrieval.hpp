#pragma once

#include "sara/backend/backend.hpp"

#include <map>
#include <string>
#include <vector>

namespace sara::backend {

struct FetchResult {
    enum class Status { Hit, Miss, Error };
    Status status = Status::Miss;
    std::string text;                       // hit
    std::vector<std::string> suggestions;   // miss: similar entities
    std::string error;                      // error detail

    bool hit() const { return status == Status::Hit; }
};

class KnowledgeSource {
public:
    virtual ~KnowledgeSource() = default;
    virtual std::string id() const = 0;
    virtual FetchResult fetch(const std::string& entity) = 0;
};

/// Offline deterministic source backed by a TSV corpus file, one record per
/// line as entity<TAB>text. Lookup is exact and case-insensitive; misses get
/// nearest-key suggestions by prefix.
class StubCorpusSource : public KnowledgeSource {
public:
    explicit StubCorpusSource(const std::string& corpus_path);
    static StubCorpusSource from_pairs(
        const std::vector<std::pair<std::string, std::string>>& pairs);

    std::string id() const override { return "stub"; }
    FetchResult fetch(const std::string& entity) override;

private:
    StubCorpusSource() = default;
    // lowercase key -> (original entity, text)
    std::map<std::string, std::pair<std::string, std::string>> entries_;
};

/// MediaWiki client: exact-title lookup returning the lead extract; on miss,
/// similar titles via opensearch. The base URL is configurable so tests can
/// point at a recorded local stub.
class WikipediaSource : public KnowledgeSource {
public:
    explicit WikipediaSource(std::string base_url = "https://en.wikipedia.org",
                             std::string api_path = "/w/api.php",
                             RetryPolicy retry = {});

    std::string id() const override { return "wikipedia"; }
    FetchResult fetch(const std::string& entity) override;

private:
    std::string base_url_;
    std::string api_path_;
    RetryPolicy retry_;
};

}  // namespace sara::backend
