#include "lmopt/program.hpp"

#include "lmopt/error.hpp"
#include "lmopt/hash.hpp"
#include "lmopt/prompt.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

namespace lmopt {

ProgramContext::ProgramContext(const LmProgram& program, const ExecutionEnv& env, Trace& trace)
    : program_(program), env_(env), trace_(trace) {}

FieldMap ProgramContext::call(std::string_view module_label, const FieldMap& inputs) {
    const auto* module = program_.find_module(module_label);
    if (!module) throw InvalidArgument("control procedure called undeclared module `" + std::string(module_label) + "`");
    if (!env_.lm) throw ToolUnavailable("execution environment has no language model");

    const auto prompt = render_prompt(module->signature, module->demos, inputs, module->label);
    GenerateRequest request{program_.model_ref(), prompt.text, env_.params, module->label, trace_.example_id};
    std::string completion = env_.lm->generate(request);

    TraceStep step;
    step.module_label = module->label;
    for (const auto& f : module->signature.inputs()) step.inputs[f.name] = inputs.at(f.name);
    step.raw_completion = completion;
    // Record the step before parsing so a failed parse keeps the raw text.
    trace_.steps.push_back(step);
    auto outputs = parse_completion(module->signature, completion, module->label);
    trace_.steps.back().outputs = outputs;
    return outputs;
}

std::vector<std::string> ProgramContext::retrieve(std::string_view query, std::size_t k) {
    if (!env_.retriever) throw ToolUnavailable("execution environment has no retriever");
    ++retrieval_calls_;
    return env_.retriever->query(query, k);
}

LmProgram::LmProgram(std::string name, std::vector<LanguageModule> modules,
                     std::shared_ptr<const ProgramControl> control, ModelRef model)
    : name_(std::move(name)), modules_(std::move(modules)), control_(std::move(control)), model_(std::move(model)) {
    if (!control_) throw InvalidArgument("program needs a control procedure");
    model_.validate();
    std::set<std::string_view> labels;
    for (const auto& m : modules_) {
        if (m.label.empty()) throw InvalidArgument("module with empty label");
        if (!labels.insert(m.label).second) throw InvalidArgument("duplicate module label `" + m.label + "`");
        for (const auto& d : m.demos) validate_demo(m.signature, d);
    }
}

const LanguageModule* LmProgram::find_module(std::string_view label) const noexcept {
    auto it = std::find_if(modules_.begin(), modules_.end(), [&](const LanguageModule& m) { return m.label == label; });
    return it == modules_.end() ? nullptr : &*it;
}

const LanguageModule& LmProgram::module(std::string_view label) const {
    if (const auto* m = find_module(label)) return *m;
    throw InvalidArgument("program `" + name_ + "` has no module `" + std::string(label) + "`");
}

void LmProgram::set_model_ref(ModelRef model) {
    model.validate();
    model_ = std::move(model);
}

void LmProgram::set_demos(std::string_view label, std::vector<Demo> demos) {
    auto it = std::find_if(modules_.begin(), modules_.end(), [&](const LanguageModule& m) { return m.label == label; });
    if (it == modules_.end()) throw InvalidArgument("program `" + name_ + "` has no module `" + std::string(label) + "`");
    for (const auto& d : demos) validate_demo(it->signature, d);
    it->demos = std::move(demos);
}

void LmProgram::clear_demos() {
    for (auto& m : modules_) m.demos.clear();
}

std::map<std::string, std::vector<Demo>> LmProgram::demo_map() const {
    std::map<std::string, std::vector<Demo>> out;
    for (const auto& m : modules_) out[m.label] = m.demos;
    return out;
}

std::string LmProgram::fingerprint() const {
    nlohmann::json doc;
    doc["name"] = name_;
    doc["model"] = {{"base", model_.base_model_id},
                    {"adapter", model_.adapter_id ? nlohmann::json(*model_.adapter_id) : nlohmann::json()}};
    auto& modules = doc["modules"] = nlohmann::json::array();
    for (const auto& m : modules_) {
        nlohmann::json demos = nlohmann::json::array();
        for (const auto& d : m.demos) demos.push_back(d.fields);
        modules.push_back({{"label", m.label}, {"demos", std::move(demos)}});
    }
    return sha256_hex(doc.dump()).substr(0, 16);
}

namespace {

void check_tools(const LmProgram& program, const ExecutionEnv& env) {
    for (const auto& tool : program.control().required_tools()) {
        if (tool == kRetrieverTool && !env.retriever) {
            throw ToolUnavailable("program `" + program.name() + "` needs a retriever");
        }
    }
}

// Runs the control procedure, filling `trace` even when it throws.
void execute_into(const LmProgram& program, const FieldMap& inputs, const ExecutionEnv& env, Trace& trace) {
    check_tools(program, env);
    ProgramContext ctx(program, env, trace);
    trace.final_output = program.control().forward(ctx, inputs);
    if (trace.steps.empty()) {
        throw Error("program `" + program.name() + "` invoked no language module");
    }
}

} // namespace

RunOutput run_program(const LmProgram& program, const FieldMap& inputs, const ExecutionEnv& env,
                      std::string_view example_id) {
    RunOutput out;
    out.trace.example_id = std::string(example_id);
    execute_into(program, inputs, env, out.trace);
    out.final_output = out.trace.final_output;
    return out;
}

Trace execute_example(const LmProgram& program, const Example& example, const Metric& metric,
                      const ExecutionEnv& env) {
    Trace trace;
    trace.example_id = example.id;
    try {
        if (example.inputs.empty()) throw InvalidArgument("example `" + example.id + "` has no inputs");
        execute_into(program, example.inputs, env, trace);
    } catch (const std::exception& e) {
        trace.error = e.what();
        trace.score = 0.0;
        return trace;
    }
    const double score = metric.score(trace.final_output, example.metadata);
    if (!(score >= 0.0 && score <= 1.0)) {
        throw InvalidArgument("metric `" + metric.name + "` returned " + std::to_string(score) + ", outside [0, 1]");
    }
    trace.score = score;
    return trace;
}

void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn) {
    threads = std::max<std::size_t>(1, std::min(threads, n));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> workers;
    workers.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& w : workers) w.join();
    if (first_error) std::rethrow_exception(first_error);
}

EvalResult evaluate(const LmProgram& program, std::span<const Example> dataset, const Metric& metric,
                    const ExecutionEnv& env) {
    if (dataset.empty()) throw InvalidArgument("cannot evaluate on an empty dataset");
    EvalResult result;
    result.per_example.resize(dataset.size());
    parallel_for(dataset.size(), env.threads, [&](std::size_t i) {
        auto& slot = result.per_example[i];
        slot.trace = execute_example(program, dataset[i], metric, env);
        slot.failed = slot.trace.error.has_value();
        slot.score = slot.trace.score.value_or(0.0);
    });
    // Summed in sorted order so the mean is bit-identical under permutation.
    std::vector<double> scores;
    scores.reserve(dataset.size());
    for (const auto& r : result.per_example) {
        scores.push_back(r.score);
        if (r.failed) ++result.failures;
    }
    std::sort(scores.begin(), scores.end());
    double sum = 0.0;
    for (double s : scores) sum += s;
    result.mean_score = sum / static_cast<double>(dataset.size());
    return result;
}

} // namespace lmopt
