#include "lmopt/retriever.hpp"

#include "lmopt/error.hpp"

#include <httplib.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <set>

namespace lmopt {

namespace {

std::vector<std::string> words_of(std::string_view text) {
    std::set<std::string> words;
    std::string current;
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            current += static_cast<char>(std::tolower(c));
        } else if (!current.empty()) {
            words.insert(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) words.insert(std::move(current));
    return {words.begin(), words.end()};
}

} // namespace

MockRetriever::MockRetriever(std::vector<std::string> passages,
                             std::map<std::string, std::vector<std::string>> scripted)
    : passages_(std::move(passages)), scripted_(std::move(scripted)) {
    passage_words_.reserve(passages_.size());
    for (const auto& p : passages_) passage_words_.push_back(words_of(p));
}

MockRetriever MockRetriever::from_json(const nlohmann::json& doc) {
    std::vector<std::string> passages = doc.value("passages", std::vector<std::string>{});
    std::map<std::string, std::vector<std::string>> scripted;
    if (auto it = doc.find("queries"); it != doc.end()) {
        scripted = it->get<std::map<std::string, std::vector<std::string>>>();
    }
    return MockRetriever(std::move(passages), std::move(scripted));
}

MockRetriever MockRetriever::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open retriever corpus " + path.string());
    try {
        return from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed retriever corpus " + path.string() + ": " + e.what());
    }
}

std::vector<std::string> MockRetriever::query(std::string_view text, std::size_t k) const {
    if (auto it = scripted_.find(std::string(text)); it != scripted_.end()) {
        const auto n = std::min(k, it->second.size());
        return {it->second.begin(), it->second.begin() + static_cast<std::ptrdiff_t>(n)};
    }
    const auto query_words = words_of(text);
    std::vector<std::size_t> overlap(passages_.size(), 0);
    for (std::size_t i = 0; i < passages_.size(); ++i) {
        const auto& pw = passage_words_[i];
        std::vector<std::string> common;
        std::set_intersection(query_words.begin(), query_words.end(), pw.begin(), pw.end(),
                              std::back_inserter(common));
        overlap[i] = common.size();
    }
    std::vector<std::size_t> order(passages_.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return overlap[a] > overlap[b]; });
    std::vector<std::string> out;
    for (std::size_t idx : order) {
        if (out.size() >= k || overlap[idx] == 0) break;
        out.push_back(passages_[idx]);
    }
    return out;
}

HttpRetrieverConfig HttpRetrieverConfig::from_json(const nlohmann::json& doc) {
    HttpRetrieverConfig c;
    c.endpoint = doc.value("endpoint", c.endpoint);
    c.path = doc.value("path", c.path);
    c.timeout_s = doc.value("timeout_s", c.timeout_s);
    c.max_retries = doc.value("max_retries", c.max_retries);
    return c;
}

std::vector<std::string> HttpRetriever::query(std::string_view text, std::size_t k) const {
    httplib::Client client(config_.endpoint);
    const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
        std::chrono::duration<double>(config_.timeout_s));
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    const httplib::Params params{{"query", std::string(text)}, {"k", std::to_string(k)}};

    std::string last_error;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        auto res = client.Get(config_.path, params, httplib::Headers{});
        if (!res) {
            last_error = httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200) throw Error("retriever returned HTTP " + std::to_string(res->status));
        std::vector<std::string> out;
        try {
            const auto doc = nlohmann::json::parse(res->body);
            if (auto it = doc.find("passages"); it != doc.end()) {
                out = it->get<std::vector<std::string>>();
            } else if (auto topk = doc.find("topk"); topk != doc.end()) {
                for (const auto& hit : *topk) {
                    out.push_back(hit.contains("long_text") ? hit.at("long_text").get<std::string>()
                                                            : hit.at("text").get<std::string>());
                }
            } else {
                throw Error("retriever response has neither passages nor topk");
            }
        } catch (const nlohmann::json::exception& e) {
            throw Error(std::string("malformed retriever response: ") + e.what());
        }
        if (out.size() > k) out.resize(k);
        return out;
    }
    throw TransportError("retriever unreachable: " + last_error);
}

} // namespace lmopt
