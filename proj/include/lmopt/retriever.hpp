#pragma once

#include <json.hpp>

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace lmopt {

// Frozen retrieval tool. Implementations are safe to call concurrently.
class Retriever {
public:
    virtual ~Retriever() = default;
    // At most k passages, best first.
    virtual std::vector<std::string> query(std::string_view text, std::size_t k) const = 0;
};

// Deterministic retriever over an in-memory corpus: scripted answers for
// exact queries, otherwise ranking by shared lowercase word count with ties
// broken by corpus order. Passages sharing no word are never returned.
class MockRetriever : public Retriever {
public:
    MockRetriever(std::vector<std::string> passages, std::map<std::string, std::vector<std::string>> scripted = {});

    // {"passages": ["Title | text", ...], "queries": {"<query>": ["...", ...]}}
    static MockRetriever from_json(const nlohmann::json& doc);
    static MockRetriever load(const std::filesystem::path& path);

    std::vector<std::string> query(std::string_view text, std::size_t k) const override;

private:
    std::vector<std::string> passages_;
    std::vector<std::vector<std::string>> passage_words_;
    std::map<std::string, std::vector<std::string>> scripted_;
};

struct HttpRetrieverConfig {
    std::string endpoint;  // base URL
    std::string path = "/search";
    double timeout_s = 30.0;
    int max_retries = 3;

    static HttpRetrieverConfig from_json(const nlohmann::json& doc);
};

// GET <endpoint><path>?query=...&k=... answering {"passages": [...]} or
// ColBERT-server style {"topk": [{"text": ...}, ...]}.
class HttpRetriever : public Retriever {
public:
    explicit HttpRetriever(HttpRetrieverConfig config) : config_(std::move(config)) {}
    std::vector<std::string> query(std::string_view text, std::size_t k) const override;

private:
    HttpRetrieverConfig config_;
};

} // namespace lmopt
