#include "lmopt/http_lm.hpp"

#include "lmopt/error.hpp"

#include <httplib.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace lmopt {

HttpLmConfig HttpLmConfig::from_json(const nlohmann::json& doc) {
    HttpLmConfig c;
    c.endpoint = doc.value("endpoint", c.endpoint);
    c.path = doc.value("path", c.path);
    c.timeout_s = doc.value("timeout_s", c.timeout_s);
    c.max_retries = doc.value("max_retries", c.max_retries);
    c.backoff_initial_s = doc.value("backoff_initial_s", c.backoff_initial_s);
    c.sampling_field = doc.value("sampling_field", c.sampling_field);
    c.api_key_env = doc.value("api_key_env", c.api_key_env);
    return c;
}

HttpLm::HttpLm(HttpLmConfig config) : config_(std::move(config)) {
    if (config_.sampling_field != "top_p" && config_.sampling_field != "top_k") {
        throw InvalidArgument("sampling_field must be \"top_p\" or \"top_k\"");
    }
    if (config_.max_retries < 0) throw InvalidArgument("max_retries must be >= 0");
}

std::string HttpLm::request_body(const GenerateRequest& request) const {
    const auto& p = request.params;
    const auto prompt_tokens = static_cast<long long>(estimate_prompt_tokens(request.prompt));
    nlohmann::json body;
    body["model"] = request.model.served_name();
    body["prompt"] = request.prompt;
    body["temperature"] = p.temperature;
    if (config_.sampling_field == "top_p") {
        body["top_p"] = p.top_k;
    } else {
        const auto k = std::llround(p.top_k);
        if (k < 1) throw InvalidArgument("top_k rounds to " + std::to_string(k) + "; use sampling_field top_p");
        body["top_k"] = k;
    }
    body["max_tokens"] = std::max(1LL, p.max_total_tokens - prompt_tokens);
    body["stop"] = p.stop_strings;
    return body.dump();
}

std::string HttpLm::complete(const GenerateRequest& request) const {
    const std::string endpoint = request.model.endpoint.value_or(config_.endpoint);
    if (endpoint.empty()) throw InvalidArgument("no inference endpoint configured");
    const std::string body = request_body(request);

    httplib::Client client(endpoint);
    const auto timeout = std::chrono::duration<double>(config_.timeout_s);
    client.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    httplib::Headers headers;
    if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key) {
        headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    std::string last_error;
    double backoff = config_.backoff_initial_s;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::duration<double>(backoff));
            backoff *= 2.0;
        }
        auto res = client.Post(config_.path, headers, body, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 429 || res->status >= 500) {
            last_error = "server returned HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200) {
            throw Error("inference server returned HTTP " + std::to_string(res->status) + ": " + res->body);
        }
        try {
            const auto doc = nlohmann::json::parse(res->body);
            if (auto it = doc.find("choices"); it != doc.end() && !it->empty()) {
                return it->at(0).at("text").get<std::string>();
            }
            if (auto it = doc.find("generated_text"); it != doc.end()) return it->get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw Error(std::string("malformed inference response: ") + e.what());
        }
        throw Error("inference response has neither choices nor generated_text");
    }
    throw TransportError(last_error + " after " + std::to_string(config_.max_retries + 1) + " attempts");
}

} // namespace lmopt
