#include "sara/backend/retrieval.hpp"

#include <httplib.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <thread>

namespace sara::backend {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

}  // namespace

StubCorpusSource::StubCorpusSource(const std::string& corpus_path) {
    std::ifstream in(corpus_path);
    if (!in)
        throw std::runtime_error("cannot open stub corpus " + corpus_path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw std::runtime_error("stub corpus line missing tab: " + line);
        std::string entity = line.substr(0, tab);
        entries_[lower(entity)] = {entity, line.substr(tab + 1)};
    }
}

StubCorpusSource StubCorpusSource::from_pairs(
    const std::vector<std::pair<std::string, std::string>>& pairs) {
    StubCorpusSource source;
    for (const auto& [entity, text] : pairs)
        source.entries_[lower(entity)] = {entity, text};
    return source;
}

FetchResult StubCorpusSource::fetch(const std::string& entity) {
    auto key = lower(entity);
    auto it = entries_.find(key);
    if (it != entries_.end())
        return {FetchResult::Status::Hit, it->second.second, {}, {}};

    FetchResult miss;
    // Nearest keys by shared prefix length.
    std::vector<std::pair<std::size_t, std::string>> scored;
    for (const auto& [k, v] : entries_) {
        std::size_t common = 0;
        while (common < k.size() && common < key.size() &&
               k[common] == key[common])
            ++common;
        if (common > 0) scored.emplace_back(common, v.first);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    for (std::size_t i = 0; i < scored.size() && i < 5; ++i)
        miss.suggestions.push_back(scored[i].second);
    return miss;
}

WikipediaSource::WikipediaSource(std::string base_url, std::string api_path,
                                 RetryPolicy retry)
    : base_url_(std::move(base_url)),
      api_path_(std::move(api_path)),
      retry_(retry) {}

FetchResult WikipediaSource::fetch(const std::string& entity) {
    if (entity.empty())
        return {FetchResult::Status::Error, {}, {}, "empty entity"};

    auto backoff = retry_.backoff_base;
    std::string last_error;
    for (int attempt = 1; attempt <= retry_.max_attempts; ++attempt) {
        if (attempt > 1) {
            std::this_thread::sleep_for(backoff);
            backoff *= 2;
        }
        httplib::Client client(base_url_);
        client.set_follow_location(true);

        httplib::Params params{{"action", "query"},
                               {"prop", "extracts"},
                               {"exintro", "1"},
                               {"explaintext", "1"},
                               {"redirects", "1"},
                               {"format", "json"},
                               {"titles", entity}};
        auto res = client.Get(api_path_, params, httplib::Headers{});
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 429 || res->status >= 500) {
            last_error = "http status " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200)
            return {FetchResult::Status::Error, {}, {},
                    "http status " + std::to_string(res->status)};

        auto j = nlohmann::json::parse(res->body, nullptr, false);
        if (j.is_discarded())
            return {FetchResult::Status::Error, {}, {}, "bad json body"};
        if (j.contains("query") && j["query"].contains("pages")) {
            for (const auto& [id, page] : j["query"]["pages"].items()) {
                if (page.contains("extract") &&
                    !page["extract"].get<std::string>().empty()) {
                    return {FetchResult::Status::Hit,
                            page["extract"].get<std::string>(), {}, {}};
                }
            }
        }

        // Exact title missing: ask for similar titles.
        httplib::Params search{{"action", "opensearch"},
                               {"search", entity},
                               {"limit", "5"},
                               {"format", "json"}};
        auto sres = client.Get(api_path_, search, httplib::Headers{});
        FetchResult miss;
        if (sres && sres->status == 200) {
            auto sj = nlohmann::json::parse(sres->body, nullptr, false);
            if (!sj.is_discarded() && sj.is_array() && sj.size() >= 2 &&
                sj[1].is_array()) {
                for (const auto& title : sj[1])
                    miss.suggestions.push_back(title.get<std::string>());
            }
        }
        return miss;
    }
    return {FetchResult::Status::Error, {}, {},
            "failed after " + std::to_string(retry_.max_attempts) +
                " attempts: " + last_error};
}

}  // namespace sara::backend
