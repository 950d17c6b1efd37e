#include "lmopt/bfrs.hpp"

#include "lmopt/error.hpp"
#include "lmopt/rng.hpp"
#include "lmopt/trace_store.hpp"

#include <algorithm>
#include <numeric>

namespace lmopt {

void BfrsConfig::validate() const {
    if (n_candidates < 1) throw InvalidArgument("n_candidates must be >= 1");
    if (train_size < 1 || val_size < 1) throw InvalidArgument("prompt-optimization train and validation sizes must be positive");
}

std::pair<std::vector<Example>, std::vector<Example>> split_train_val(std::span<const Example> examples,
                                                                      const BfrsConfig& cfg) {
    cfg.validate();
    if (examples.size() < cfg.train_size + cfg.val_size) {
        throw InvalidArgument("need " + std::to_string(cfg.train_size + cfg.val_size) +
                              " examples for the train/validation split, have " + std::to_string(examples.size()));
    }
    std::vector<std::size_t> order(examples.size());
    std::iota(order.begin(), order.end(), 0);
    seeded_shuffle(std::span(order), derive_seed(cfg.seed, 0));
    std::vector<Example> train;
    std::vector<Example> val;
    train.reserve(cfg.train_size);
    val.reserve(cfg.val_size);
    for (std::size_t i = 0; i < cfg.train_size; ++i) train.push_back(examples[order[i]]);
    for (std::size_t i = 0; i < cfg.val_size; ++i) val.push_back(examples[order[cfg.train_size + i]]);
    return {std::move(train), std::move(val)};
}

namespace {

// Demos a trace contributes, one per module it invoked (first invocation).
std::optional<std::map<std::string, Demo>> demos_from_trace(const Trace& trace, const LmProgram& program) {
    std::map<std::string, Demo> out;
    for (const auto& step : trace.steps) {
        if (out.count(step.module_label)) continue;
        const auto* module = program.find_module(step.module_label);
        if (!module) return std::nullopt;
        Demo demo;
        demo.fields = step.inputs;
        demo.fields.insert(step.outputs.begin(), step.outputs.end());
        if (!is_valid_demo(module->signature, demo)) return std::nullopt;
        out.emplace(step.module_label, std::move(demo));
    }
    if (out.empty()) return std::nullopt;
    return out;
}

} // namespace

std::vector<CandidateAssignment> sample_fewshot_subsets(const TraceSet& kept, const LmProgram& program,
                                                        const BfrsConfig& cfg) {
    cfg.validate();
    std::vector<std::map<std::string, Demo>> pool;
    std::vector<std::string> pool_ids;
    for (const auto& trace : kept.traces) {
        if (auto demos = demos_from_trace(trace, program)) {
            pool.push_back(std::move(*demos));
            pool_ids.push_back(trace.example_id);
        }
    }

    std::vector<CandidateAssignment> out(cfg.n_candidates);
    for (std::size_t k = 0; k < cfg.n_candidates; ++k) {
        auto& cand = out[k];
        cand.candidate_index = k;
        for (const auto& m : program.modules()) cand.demos[m.label];
        if (k == 0 || pool.empty()) continue;

        std::vector<std::size_t> order(pool.size());
        std::iota(order.begin(), order.end(), 0);
        seeded_shuffle(std::span(order), derive_seed(cfg.seed, k));
        const auto take = std::min(cfg.max_demos, pool.size());
        for (std::size_t i = 0; i < take; ++i) {
            for (const auto& [label, demo] : pool[order[i]]) cand.demos[label].push_back(demo);
            cand.source_example_ids.push_back(pool_ids[order[i]]);
        }
    }
    return out;
}

LmProgram construct_fewshot_prompts(const LmProgram& program, const CandidateAssignment& candidate) {
    LmProgram out = program;
    for (const auto& m : program.modules()) {
        auto it = candidate.demos.find(m.label);
        out.set_demos(m.label, it == candidate.demos.end() ? std::vector<Demo>{} : it->second);
    }
    for (const auto& [label, demos] : candidate.demos) {
        if (!program.find_module(label)) throw InvalidArgument("assignment names unknown module `" + label + "`");
    }
    return out;
}

BfrsResult bfrs(const LmProgram& program, std::span<const Example> examples, const Metric& metric,
                const ExecutionEnv& env, const BfrsConfig& cfg) {
    auto [train, val] = split_train_val(examples, cfg);
    auto traces = bootstrap_traces(program, train, metric, env, cfg.seed);
    const auto kept = filter_traces(traces, metric);
    auto candidates = sample_fewshot_subsets(kept, program, cfg);

    std::size_t best = 0;
    for (auto& cand : candidates) {
        const auto candidate_program = construct_fewshot_prompts(program, cand);
        cand.score = evaluate(candidate_program, val, metric, env).mean_score;
        if (*cand.score > *candidates[best].score) best = cand.candidate_index;
    }

    BfrsResult result{construct_fewshot_prompts(program, candidates[best]), best, std::move(candidates),
                      std::move(traces), kept.traces.size()};
    return result;
}

nlohmann::json scoreboard_json(const BfrsResult& result, const BfrsConfig& cfg) {
    nlohmann::json candidates = nlohmann::json::array();
    for (const auto& c : result.scoreboard) {
        nlohmann::json demo_counts = nlohmann::json::object();
        for (const auto& [label, demos] : c.demos) demo_counts[label] = demos.size();
        candidates.push_back({{"candidate_index", c.candidate_index},
                              {"score", c.score ? nlohmann::json(*c.score) : nlohmann::json()},
                              {"demo_example_ids", c.source_example_ids},
                              {"demo_counts", demo_counts}});
    }
    return {{"seed", cfg.seed},
            {"n_candidates", cfg.n_candidates},
            {"max_demos", cfg.max_demos},
            {"train_size", cfg.train_size},
            {"val_size", cfg.val_size},
            {"kept_traces", result.kept},
            {"selected", result.best_index},
            {"candidates", std::move(candidates)}};
}

} // namespace lmopt
