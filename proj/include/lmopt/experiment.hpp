#pragma once

#include "lmopt/lm.hpp"
#include "lmopt/results.hpp"
#include "lmopt/retriever.hpp"
#include "lmopt/trainer.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

namespace lmopt {

// Run configuration, usually loaded from a JSON file. Relative paths are
// resolved against the file's directory.
//
//   {
//     "data_root": "data", "runs_dir": "runs", "results_csv": "runs/results.csv",
//     "model": "mistral-7b-instruct-v0.2",
//     "lm": {"kind": "mock", "script": "mock_lm.json"}
//         | {"kind": "http", "endpoint": "http://host:port", ...},
//     "retriever": {"kind": "mock", "corpus": "corpus.json"} | {"kind": "http", ...},
//     "trainer": {"kind": "stub"} | {"kind": "process", "command": ["python", "-m", "trainer"]},
//     "inference": {"temperature": 0.1, "top_k": 0.97, "max_total_tokens": 1024, "stop": ["\n\n---"]},
//     "bfrs": {"n_candidates": 6, "max_demos": 3, "train_size": 100, "val_size": 250},
//     "lora": {"rank": 32, ...}, "lambda": 1.0, "min_records": 1, "threads": 1,
//     "continue_from_optimized_prompts": false
//   }
struct ExperimentConfig {
    std::filesystem::path data_root = "data";
    std::filesystem::path runs_dir = "runs";
    std::filesystem::path results_csv;
    std::optional<std::string> run_id;
    std::string model = "mock-7b";
    nlohmann::json lm = {{"kind", "mock"}};
    nlohmann::json retriever = {{"kind", "mock"}};
    nlohmann::json trainer = {{"kind", "stub"}};
    InferenceParams inference = default_inference_params();
    // Per-key overrides of the task's BFRS defaults.
    nlohmann::json bfrs = nlohmann::json::object();
    LoraHyperparams lora;
    double lambda = 1.0;
    std::size_t min_records = 1;
    std::size_t threads = 1;
    bool continue_from_optimized_prompts = false;

    static ExperimentConfig from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
    static ExperimentConfig load(const std::filesystem::path& path);
    // Echo written into summary.json.
    nlohmann::json to_json() const;
};

struct ExperimentServices {
    std::shared_ptr<const LanguageModel> lm;
    std::shared_ptr<const Retriever> retriever;
    std::shared_ptr<Trainer> trainer;
};

// Instantiates the backends named in the config. A mock retriever without a
// corpus is empty.
ExperimentServices make_services(const ExperimentConfig& cfg);

struct ExperimentOutcome {
    std::string run_id;
    std::filesystem::path run_dir;
    nlohmann::json summary;
    RunResult result;
};

// "<task>-<strategy>-s<seed>" with "->" spelled "_".
std::string default_run_id(std::string_view task, std::string_view strategy, std::uint64_t seed);

// Builds the task, runs the strategy, evaluates on test and writes
// runs/<id>/{summary.json, traces.json, bfrs_scoreboard.json, bft/...}; appends
// the run to results.csv.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg, std::string_view task, std::string_view strategy,
                                 std::uint64_t seed, const ExperimentServices& services);
ExperimentOutcome run_experiment(const ExperimentConfig& cfg, std::string_view task, std::string_view strategy,
                                 std::uint64_t seed);

} // namespace lmopt
