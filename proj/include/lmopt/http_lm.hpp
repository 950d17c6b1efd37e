#pragma once

#include "lmopt/lm.hpp"

#include <string>

namespace lmopt {

struct HttpLmConfig {
    // Base URL, e.g. "http://localhost:8080". ModelRef::endpoint overrides it.
    std::string endpoint;
    std::string path = "/v1/completions";
    double timeout_s = 60.0;
    int max_retries = 3;
    double backoff_initial_s = 0.5;
    // "top_p": send InferenceParams::top_k as top_p. "top_k": send it rounded as an integer top_k.
    std::string sampling_field = "top_p";
    // Environment variable holding a bearer token; unset or empty means no auth header.
    std::string api_key_env = "LMOPT_API_KEY";

    static HttpLmConfig from_json(const nlohmann::json& doc);
};

// Client for an OpenAI-compatible completions endpoint.
class HttpLm : public LanguageModel {
public:
    explicit HttpLm(HttpLmConfig config);

    // The exact JSON body sent for `request`. Retries reuse this string.
    std::string request_body(const GenerateRequest& request) const;
    const HttpLmConfig& config() const noexcept { return config_; }

protected:
    std::string complete(const GenerateRequest& request) const override;

private:
    HttpLmConfig config_;
};

} // namespace lmopt
