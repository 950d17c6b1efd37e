#pragma once

#include "lmopt/bfrs.hpp"
#include "lmopt/bft.hpp"
#include "lmopt/program.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lmopt {

enum class StepKind { PromptOpt, WeightOpt };
std::string_view to_string(StepKind kind);

struct StrategyPlan {
    std::vector<StepKind> steps;
    // Canonical name, e.g. "p->w->p".
    std::string name;
    std::uint64_t seed = 0;
};

// The eight strategies, in report order.
std::span<const std::string_view> strategy_names();

// "vanilla", "p", "w", "p->p", "w->w", "p->w", "w->p" or "p->w->p".
// Throws UnknownStrategy otherwise.
StrategyPlan parse_strategy(std::string_view name, std::uint64_t seed = 0);

struct StrategyConfig {
    // Seeds are replaced per step by derive_seed(plan.seed, step_index).
    BfrsConfig bfrs;
    // work_dir is extended with "step<i>" per weight step.
    BftConfig bft;
    // The final prompt step of "p->w->p" keeps the optimized demos instead of
    // restarting from the original ones.
    bool continue_from_optimized_prompts = false;
};

struct StepRecord {
    std::size_t index = 0;
    StepKind kind = StepKind::PromptOpt;
    std::uint64_t seed = 0;
    std::string input_fingerprint;
    std::string output_fingerprint;
    ModelRef input_model;
    ModelRef output_model;
    std::map<std::string, std::size_t> input_demo_counts;
    std::map<std::string, std::size_t> output_demo_counts;
    std::optional<double> dev_score;
    // Scoreboard (prompt steps) or dataset manifest and job (weight steps).
    nlohmann::json details;
    TraceSet bootstrapped;
    bool failed = false;

    nlohmann::json to_json() const;
};

enum class StrategyStatus { Completed, InsufficientData };

struct StrategyOutcome {
    LmProgram program;
    std::vector<StepRecord> log;
    StrategyStatus status = StrategyStatus::Completed;
    std::string message;
};

// Called after each step with the program it received and the one it produced.
using StepObserver = std::function<void(const StepRecord&, const LmProgram& input, const LmProgram& output)>;

// Folds the plan's steps over `program`. Prompt steps run BFRS on the current
// program, weight steps run BFT. A prompt step that follows a prompt->weight
// pair restarts from the original demos with the new weights. An
// insufficient-data weight step ends the plan with that status.
StrategyOutcome run_strategy(const StrategyPlan& plan, const LmProgram& program, std::span<const Example> train,
                             std::span<const Example> dev, const Metric& metric, const ExecutionEnv& env,
                             Trainer& trainer, const StrategyConfig& cfg, const StepObserver& observer = {});

} // namespace lmopt
