#include "lmopt/strategy.hpp"

#include "lmopt/error.hpp"
#include "lmopt/rng.hpp"
#include "lmopt/trace_store.hpp"

#include <array>

namespace lmopt {

namespace {

constexpr std::array<std::string_view, 8> kStrategyNames{"vanilla", "p",    "w",    "p->p",
                                                         "w->w",    "p->w", "w->p", "p->w->p"};

std::map<std::string, std::size_t> demo_counts(const LmProgram& program) {
    std::map<std::string, std::size_t> out;
    for (const auto& m : program.modules()) out[m.label] = m.demos.size();
    return out;
}

} // namespace

std::string_view to_string(StepKind kind) { return kind == StepKind::PromptOpt ? "bfrs" : "bft"; }

std::span<const std::string_view> strategy_names() { return kStrategyNames; }

StrategyPlan parse_strategy(std::string_view name, std::uint64_t seed) {
    if (std::find(kStrategyNames.begin(), kStrategyNames.end(), name) == kStrategyNames.end()) {
        throw UnknownStrategy("unknown strategy `" + std::string(name) +
                              "` (expected vanilla, p, w, p->p, w->w, p->w, w->p or p->w->p)");
    }
    StrategyPlan plan;
    plan.name = std::string(name);
    plan.seed = seed;
    if (name == "vanilla") return plan;
    for (std::size_t pos = 0; pos < name.size();) {
        plan.steps.push_back(name[pos] == 'p' ? StepKind::PromptOpt : StepKind::WeightOpt);
        pos += 3;  // "x->"
    }
    return plan;
}

nlohmann::json StepRecord::to_json() const {
    nlohmann::json j{{"index", index},
                     {"kind", to_string(kind)},
                     {"seed", seed},
                     {"input_fingerprint", input_fingerprint},
                     {"output_fingerprint", output_fingerprint},
                     {"input_model", input_model},
                     {"output_model", output_model},
                     {"input_demo_counts", input_demo_counts},
                     {"output_demo_counts", output_demo_counts},
                     {"dev_score", dev_score ? nlohmann::json(*dev_score) : nlohmann::json()},
                     {"failed", failed},
                     {"details", details}};
    return j;
}

StrategyOutcome run_strategy(const StrategyPlan& plan, const LmProgram& program, std::span<const Example> train,
                             std::span<const Example> dev, const Metric& metric, const ExecutionEnv& env,
                             Trainer& trainer, const StrategyConfig& cfg, const StepObserver& observer) {
    if (train.empty()) throw InvalidArgument("strategy needs a non-empty training set");
    StrategyOutcome outcome{program, {}, StrategyStatus::Completed, {}};
    const auto original_demos = program.demo_map();

    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
        const StepKind kind = plan.steps[i];
        LmProgram input = outcome.program;
        const bool reset_prompts = kind == StepKind::PromptOpt && i >= 2 &&
                                   plan.steps[i - 1] == StepKind::WeightOpt &&
                                   plan.steps[i - 2] == StepKind::PromptOpt && !cfg.continue_from_optimized_prompts;
        if (reset_prompts) {
            for (const auto& [label, demos] : original_demos) input.set_demos(label, demos);
        }

        StepRecord record;
        record.index = i;
        record.kind = kind;
        record.seed = derive_seed(plan.seed, i);
        record.input_fingerprint = input.fingerprint();
        record.input_model = input.model_ref();
        record.input_demo_counts = demo_counts(input);

        std::optional<LmProgram> output;
        if (kind == StepKind::PromptOpt) {
            BfrsConfig bcfg = cfg.bfrs;
            bcfg.seed = record.seed;
            auto result = bfrs(input, train, metric, env, bcfg);
            record.details = scoreboard_json(result, bcfg);
            record.bootstrapped = std::move(result.bootstrapped);
            output = std::move(result.program);
        } else {
            BftConfig fcfg = cfg.bft;
            fcfg.seed = record.seed;
            fcfg.work_dir = cfg.bft.work_dir / ("step" + std::to_string(i));
            try {
                auto result = bft(input, train, metric, env, trainer, fcfg);
                record.details = {{"dataset", result.manifest.to_json()},
                                  {"kept_traces", result.kept},
                                  {"adapter_id", result.program.model_ref().adapter_id.value_or("")},
                                  {"hyperparams", fcfg.hyperparams.to_json()}};
                record.bootstrapped = std::move(result.bootstrapped);
                output = std::move(result.program);
            } catch (const InsufficientData& e) {
                record.failed = true;
                record.output_fingerprint = record.input_fingerprint;
                record.output_model = record.input_model;
                record.output_demo_counts = record.input_demo_counts;
                record.details = {{"outcome", "--"},
                                  {"error", e.what()},
                                  {"traces_total", e.traces_total},
                                  {"traces_kept", e.traces_kept},
                                  {"records", e.records}};
                if (observer) observer(record, input, input);
                outcome.log.push_back(std::move(record));
                outcome.status = StrategyStatus::InsufficientData;
                outcome.message = e.what();
                return outcome;
            }
        }

        record.output_fingerprint = output->fingerprint();
        record.output_model = output->model_ref();
        record.output_demo_counts = demo_counts(*output);
        if (!dev.empty()) record.dev_score = evaluate(*output, dev, metric, env).mean_score;
        if (observer) observer(record, input, *output);
        outcome.log.push_back(std::move(record));
        outcome.program = std::move(*output);
    }
    return outcome;
}

} // namespace lmopt
