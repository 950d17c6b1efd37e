#include "lmopt/lm.hpp"

#include "lmopt/error.hpp"
#include "lmopt/prompt.hpp"

#include <cctype>
#include <fstream>

namespace lmopt {

void ModelRef::validate() const {
    if (base_model_id.empty()) throw InvalidArgument("model reference has an empty base_model_id");
    if (adapter_id && adapter_id->empty()) throw InvalidArgument("model reference has an empty adapter_id");
}

void InferenceParams::validate() const {
    if (!(temperature >= 0.0)) throw InvalidArgument("temperature must be >= 0");
    if (max_total_tokens <= 0) throw InvalidArgument("max_total_tokens must be > 0");
}

InferenceParams default_inference_params() {
    InferenceParams p;
    p.temperature = 0.1;
    p.top_k = 0.97;
    p.max_total_tokens = 1024;
    p.stop_strings = {std::string(kCompletionTerminator)};
    return p;
}

std::string truncate_at_stop(std::string_view text, std::span<const std::string> stop_strings) {
    std::size_t cut = text.size();
    for (const auto& stop : stop_strings) {
        if (stop.empty()) continue;
        cut = std::min(cut, text.find(stop));
    }
    return std::string(text.substr(0, cut));
}

std::size_t estimate_prompt_tokens(std::string_view prompt) {
    std::size_t words = 0;
    bool in_word = false;
    for (unsigned char c : prompt) {
        if (std::isspace(c)) {
            in_word = false;
        } else if (!in_word) {
            in_word = true;
            ++words;
        }
    }
    return words;
}

std::string LanguageModel::generate(const GenerateRequest& request) const {
    if (request.prompt.empty()) throw InvalidArgument("empty prompt");
    request.params.validate();
    const auto estimate = estimate_prompt_tokens(request.prompt);
    if (estimate >= static_cast<std::size_t>(request.params.max_total_tokens)) {
        throw BudgetExceeded("prompt has at least " + std::to_string(estimate) + " tokens, budget is " +
                             std::to_string(request.params.max_total_tokens));
    }
    return truncate_at_stop(complete(request), request.params.stop_strings);
}

bool MockRule::matches(const GenerateRequest& request) const {
    if (prompt && *prompt != request.prompt) return false;
    if (module_label && *module_label != request.module_label) return false;
    if (example_id && *example_id != request.example_id) return false;
    if (adapter) {
        const auto& actual = request.model.adapter_id;
        if (*adapter == "*") {
            if (!actual) return false;
        } else if (adapter->empty()) {
            if (actual) return false;
        } else if (actual != *adapter) {
            return false;
        }
    }
    if (contains && request.prompt.find(*contains) == std::string::npos) return false;
    return true;
}

MockScript::MockScript(std::vector<MockRule> rules, std::optional<std::string> default_completion)
    : rules_(std::move(rules)), default_(std::move(default_completion)) {
    build_index();
}

void MockScript::build_index() {
    by_example_.clear();
    unkeyed_.clear();
    for (std::size_t i = 0; i < rules_.size(); ++i) {
        if (rules_[i].example_id) {
            by_example_[*rules_[i].example_id].push_back(i);
        } else {
            unkeyed_.push_back(i);
        }
    }
}

const std::string* MockScript::lookup(const GenerateRequest& request) const {
    static const std::vector<std::size_t> kNone;
    auto it = by_example_.find(request.example_id);
    const auto& keyed = it == by_example_.end() ? kNone : it->second;
    // Merge the two index lists in rule order so the first matching rule wins.
    std::size_t a = 0;
    std::size_t b = 0;
    while (a < keyed.size() || b < unkeyed_.size()) {
        std::size_t idx;
        if (b >= unkeyed_.size() || (a < keyed.size() && keyed[a] < unkeyed_[b])) {
            idx = keyed[a++];
        } else {
            idx = unkeyed_[b++];
        }
        if (rules_[idx].matches(request)) return &rules_[idx].completion;
    }
    return default_ ? &*default_ : nullptr;
}

namespace {

std::optional<std::string> optional_string(const nlohmann::json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    return it->get<std::string>();
}

} // namespace

MockScript MockScript::from_json(const nlohmann::json& doc) try {
    std::vector<MockRule> rules;
    if (auto it = doc.find("prompts"); it != doc.end()) {
        for (const auto& [prompt, completion] : it->items()) {
            MockRule rule;
            rule.prompt = prompt;
            rule.completion = completion.get<std::string>();
            rules.push_back(std::move(rule));
        }
    }
    if (auto it = doc.find("rules"); it != doc.end()) {
        for (const auto& r : *it) {
            MockRule rule;
            rule.prompt = optional_string(r, "prompt");
            rule.module_label = optional_string(r, "module");
            rule.example_id = optional_string(r, "example_id");
            rule.adapter = optional_string(r, "adapter");
            rule.contains = optional_string(r, "contains");
            rule.completion = r.at("completion").get<std::string>();
            rules.push_back(std::move(rule));
        }
    }
    return MockScript(std::move(rules), optional_string(doc, "default"));
} catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed mock script: ") + e.what());
}

MockScript MockScript::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open mock script " + path.string());
    try {
        return from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed mock script " + path.string() + ": " + e.what());
    }
}

nlohmann::json MockScript::to_json() const {
    nlohmann::json doc;
    if (default_) doc["default"] = *default_;
    auto& rules = doc["rules"] = nlohmann::json::array();
    for (const auto& r : rules_) {
        nlohmann::json j;
        if (r.prompt) j["prompt"] = *r.prompt;
        if (r.module_label) j["module"] = *r.module_label;
        if (r.example_id) j["example_id"] = *r.example_id;
        if (r.adapter) j["adapter"] = *r.adapter;
        if (r.contains) j["contains"] = *r.contains;
        j["completion"] = r.completion;
        rules.push_back(std::move(j));
    }
    return doc;
}

std::string MockLm::complete(const GenerateRequest& request) const {
    if (const auto* completion = script_.lookup(request)) return *completion;
    throw MockMiss("mock has no completion for module `" + request.module_label + "` example `" +
                   request.example_id + "`");
}

std::string RecordingLm::complete(const GenerateRequest& request) const {
    std::string completion = inner_->generate(request);
    std::lock_guard lock(mutex_);
    calls_.push_back({request, completion});
    return completion;
}

std::vector<RecordingLm::Call> RecordingLm::calls() const {
    std::lock_guard lock(mutex_);
    return calls_;
}

void RecordingLm::clear() const {
    std::lock_guard lock(mutex_);
    calls_.clear();
}

} // namespace lmopt
