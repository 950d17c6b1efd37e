#pragma once

#include "lmopt/lm.hpp"
#include "lmopt/retriever.hpp"
#include "lmopt/signature.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lmopt {

struct LanguageModule {
    // Unique within a program, e.g. "generate_query[0]".
    std::string label;
    Signature signature;
    std::vector<Demo> demos;
};

struct Example {
    std::string id;
    FieldMap inputs;
    // Gold answers or other hints used only by the metric.
    FieldMap metadata;

    friend bool operator==(const Example&, const Example&) = default;
};

struct TraceStep {
    std::string module_label;
    FieldMap inputs;
    FieldMap outputs;
    std::string raw_completion;

    friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

struct Trace {
    std::string example_id;
    std::vector<TraceStep> steps;
    FieldMap final_output;
    std::optional<double> score;
    // Set when execution failed; such traces score 0.
    std::optional<std::string> error;

    friend bool operator==(const Trace&, const Trace&) = default;
};

struct Metric {
    std::string name;
    // Bootstrapping keeps traces scoring at least this much.
    double threshold = 1.0;
    // (final_output, metadata) -> score in [0, 1].
    std::function<double(const FieldMap&, const FieldMap&)> score;
};

// Tools and the LM shared by every module invocation. Shareable across
// concurrent example executions.
struct ExecutionEnv {
    std::shared_ptr<const LanguageModel> lm;
    std::shared_ptr<const Retriever> retriever;
    InferenceParams params = default_inference_params();
    // Worker threads used by evaluate(); results never depend on it.
    std::size_t threads = 1;
};

class LmProgram;

// Handed to a control procedure for one execution. Records a trace step per
// module call.
class ProgramContext {
public:
    ProgramContext(const LmProgram& program, const ExecutionEnv& env, Trace& trace);

    FieldMap call(std::string_view module_label, const FieldMap& inputs);
    std::vector<std::string> retrieve(std::string_view query, std::size_t k);

    std::size_t retrieval_calls() const noexcept { return retrieval_calls_; }

private:
    const LmProgram& program_;
    const ExecutionEnv& env_;
    Trace& trace_;
    std::size_t retrieval_calls_ = 0;
};

// Task-specific execution procedure: which modules fire, in what order, with
// which tool calls. Stateless.
class ProgramControl {
public:
    virtual ~ProgramControl() = default;
    virtual std::vector<std::string> required_tools() const { return {}; }
    virtual FieldMap forward(ProgramContext& ctx, const FieldMap& inputs) const = 0;
};

inline constexpr std::string_view kRetrieverTool = "retriever";

// Modules with their prompts (demos) plus one shared ModelRef. Value type:
// optimizers return modified copies.
class LmProgram {
public:
    LmProgram(std::string name, std::vector<LanguageModule> modules, std::shared_ptr<const ProgramControl> control,
              ModelRef model);

    const std::string& name() const noexcept { return name_; }
    const std::vector<LanguageModule>& modules() const noexcept { return modules_; }
    const LanguageModule& module(std::string_view label) const;
    const LanguageModule* find_module(std::string_view label) const noexcept;
    const ProgramControl& control() const noexcept { return *control_; }

    const ModelRef& model_ref() const noexcept { return model_; }
    void set_model_ref(ModelRef model);

    void set_demos(std::string_view label, std::vector<Demo> demos);
    void clear_demos();
    // Label -> demos, for every module.
    std::map<std::string, std::vector<Demo>> demo_map() const;

    // Stable digest of model reference and all demos.
    std::string fingerprint() const;

private:
    std::string name_;
    std::vector<LanguageModule> modules_;
    std::shared_ptr<const ProgramControl> control_;
    ModelRef model_;
};

struct RunOutput {
    FieldMap final_output;
    Trace trace;
};

// Executes one input. Errors propagate (ParseError carries the module label).
RunOutput run_program(const LmProgram& program, const FieldMap& inputs, const ExecutionEnv& env,
                      std::string_view example_id = {});

// Executes and scores one example, never throwing for execution failures:
// they come back as a trace with `error` set and score 0.
Trace execute_example(const LmProgram& program, const Example& example, const Metric& metric,
                      const ExecutionEnv& env);

struct ExampleOutcome {
    double score = 0.0;
    Trace trace;
    bool failed = false;
};

struct EvalResult {
    double mean_score = 0.0;
    std::vector<ExampleOutcome> per_example;  // dataset order
    std::size_t failures = 0;
};

EvalResult evaluate(const LmProgram& program, std::span<const Example> dataset, const Metric& metric,
                    const ExecutionEnv& env);

// Runs fn(i) for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

} // namespace lmopt
