#pragma once

#include <json.hpp>

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lmopt {

// Reference to LM weights. Weights live server-side; a fine-tuning step
// only changes adapter_id.
struct ModelRef {
    std::string base_model_id;
    std::optional<std::string> adapter_id;
    std::optional<std::string> endpoint;

    // Name sent to the inference server: the adapter when one is set.
    const std::string& served_name() const { return adapter_id ? *adapter_id : base_model_id; }
    void validate() const;

    friend bool operator==(const ModelRef&, const ModelRef&) = default;
};

struct InferenceParams {
    double temperature = 0.1;
    // Kept exactly as configured; see HttpLmConfig::sampling_field for how it is sent.
    double top_k = 0.97;
    // Prompt plus completion.
    int max_total_tokens = 1024;
    std::vector<std::string> stop_strings;

    void validate() const;
    friend bool operator==(const InferenceParams&, const InferenceParams&) = default;
};

// temperature 0.1, top_k 0.97, 1024 total tokens, block-separator stop string.
InferenceParams default_inference_params();

struct GenerateRequest {
    ModelRef model;
    std::string prompt;
    InferenceParams params;
    // Routing context; used by scripted mocks and logs, never sent on the wire.
    std::string module_label;
    std::string example_id;
};

// Cuts `text` at the earliest occurrence of any stop string.
std::string truncate_at_stop(std::string_view text, std::span<const std::string> stop_strings);

// Whitespace-separated word count: a lower bound on the token count for
// practical tokenizers.
std::size_t estimate_prompt_tokens(std::string_view prompt);

// Thread-safe once constructed; generate() may be called concurrently.
class LanguageModel {
public:
    virtual ~LanguageModel() = default;

    // Validates the request, delegates to complete(), applies stop strings.
    std::string generate(const GenerateRequest& request) const;

protected:
    virtual std::string complete(const GenerateRequest& request) const = 0;
};

struct MockRule {
    std::optional<std::string> prompt;
    std::optional<std::string> module_label;
    std::optional<std::string> example_id;
    // Exact adapter id; "*" matches any adapter, "" matches the base model only.
    std::optional<std::string> adapter;
    std::optional<std::string> contains;
    std::string completion;

    bool matches(const GenerateRequest& request) const;
};

// Ordered rules; the first matching rule wins, then the default completion.
class MockScript {
public:
    MockScript() = default;
    MockScript(std::vector<MockRule> rules, std::optional<std::string> default_completion);

    // {"default": "...", "rules": [{"prompt"|"module"|"example_id"|"adapter"|"contains", "completion"}],
    //  "prompts": {"<exact prompt>": "<completion>"}}
    static MockScript from_json(const nlohmann::json& doc);
    static MockScript load(const std::filesystem::path& path);
    nlohmann::json to_json() const;

    // nullptr when nothing matches and there is no default.
    const std::string* lookup(const GenerateRequest& request) const;

    const std::vector<MockRule>& rules() const noexcept { return rules_; }
    const std::optional<std::string>& default_completion() const noexcept { return default_; }

private:
    void build_index();

    std::vector<MockRule> rules_;
    std::optional<std::string> default_;
    std::unordered_map<std::string, std::vector<std::size_t>> by_example_;
    std::vector<std::size_t> unkeyed_;
};

class MockLm : public LanguageModel {
public:
    explicit MockLm(MockScript script) : script_(std::move(script)) {}
    const MockScript& script() const noexcept { return script_; }

protected:
    std::string complete(const GenerateRequest& request) const override;

private:
    MockScript script_;
};

// Decorator that logs every request and completion in call order.
class RecordingLm : public LanguageModel {
public:
    struct Call {
        GenerateRequest request;
        std::string completion;
    };

    explicit RecordingLm(std::shared_ptr<const LanguageModel> inner) : inner_(std::move(inner)) {}

    std::vector<Call> calls() const;
    void clear() const;

protected:
    std::string complete(const GenerateRequest& request) const override;

private:
    std::shared_ptr<const LanguageModel> inner_;
    mutable std::mutex mutex_;
    mutable std::vector<Call> calls_;
};

} // namespace lmopt
