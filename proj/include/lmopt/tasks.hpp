#pragma once

#include "lmopt/program.hpp"

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace lmopt {

// Multi-hop QA: two query-generation hops with retrieval, then an answer module.
class HotPotQaControl : public ProgramControl {
public:
    explicit HotPotQaControl(std::size_t passages_per_hop = 3) : passages_per_hop_(passages_per_hop) {}
    std::vector<std::string> required_tools() const override { return {std::string(kRetrieverTool)}; }
    FieldMap forward(ProgramContext& ctx, const FieldMap& inputs) const override;

private:
    std::size_t passages_per_hop_;
};

// Calls one module with the program inputs and returns its outputs.
class SingleModuleControl : public ProgramControl {
public:
    explicit SingleModuleControl(std::string module_label) : label_(std::move(module_label)) {}
    FieldMap forward(ProgramContext& ctx, const FieldMap& inputs) const override;

private:
    std::string label_;
};

Signature hotpotqa_query_signature();
Signature hotpotqa_answer_signature();
Signature gsm8k_signature();
Signature iris_signature();

LmProgram make_hotpotqa_program(ModelRef model, std::size_t passages_per_hop = 3);
LmProgram make_gsm8k_program(ModelRef model);
LmProgram make_iris_program(ModelRef model);

// Exact match of final_output["answer"] against metadata["answer"].
Metric exact_match_metric(std::string name);
// Last number of the first answer line against metadata["answer"].
Metric gsm8k_metric();

// context followed by passages, first occurrence kept.
std::vector<std::string> dedup_context(std::span<const std::string> context, std::span<const std::string> passages);

struct SplitSizes {
    std::size_t train = 0;
    std::size_t dev = 0;
    std::size_t test = 0;
};

struct PromptOptSizes {
    std::size_t train = 0;
    std::size_t val = 0;
};

struct TaskSpec {
    std::string name;
    std::function<LmProgram(ModelRef)> make_program;
    Metric metric;
    SplitSizes splits;
    PromptOptSizes prompt_opt;
    std::vector<Example> train;
    std::vector<Example> dev;
    std::vector<Example> test;
};

// "hotpotqa", "gsm8k" or "iris", without data.
TaskSpec task_spec(std::string_view name);

// Loads <data_root>/<task>/ and builds the splits:
//   hotpotqa: train.jsonl -> 1000 train + 500 dev; validation.jsonl -> 1500 test
//   gsm8k:    train.jsonl -> 1000 train + 500 dev; test.jsonl -> all 1319
//   iris:     iris.jsonl (150) -> 50 / 50 / 50
// Split membership is seed-independent; `seed` only permutes the train split.
TaskSpec build_task(std::string_view name, std::uint64_t seed, const std::filesystem::path& data_root);

// JSON lines of {"id", "inputs", "metadata"}.
std::vector<Example> load_examples(const std::filesystem::path& path);
void write_examples(const std::filesystem::path& path, std::span<const Example> examples);

} // namespace lmopt
