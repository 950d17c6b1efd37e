#pragma once

#include "lmopt/bootstrap.hpp"
#include "lmopt/program.hpp"
#include "lmopt/trainer.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace lmopt {

struct FinetuneRecord {
    // Zero-demo render of the module over the step inputs.
    std::string prompt;
    std::string completion;
    std::string module_label;
    std::string trace_id;

    friend bool operator==(const FinetuneRecord&, const FinetuneRecord&) = default;
};

// One record per (kept trace, step), pooled across modules. Prompts are
// vanilla whatever demos produced the trace. Throws InsufficientData when
// `kept` is empty.
std::vector<FinetuneRecord> build_finetune_dataset(const TraceSet& kept, const LmProgram& program);

struct DatasetManifest {
    std::filesystem::path path;
    std::size_t count = 0;
    // SHA-256 of the file bytes.
    std::string checksum;
    std::string source_program_id;

    nlohmann::json to_json() const;
};

// JSON lines {prompt, completion, module_label, trace_id}; also writes
// <stem>.manifest.json next to the dataset.
DatasetManifest export_dataset(std::span<const FinetuneRecord> records, const std::filesystem::path& path,
                               const std::string& source_program_id = {});

struct BftConfig {
    LoraHyperparams hyperparams;
    // Fewer records than this is the insufficient-data ("--") outcome.
    std::size_t min_records = 1;
    std::filesystem::path work_dir = "bft";
    std::chrono::milliseconds poll_interval{100};
    std::uint64_t seed = 0;
};

struct BftResult {
    LmProgram program;
    TraceSet bootstrapped;
    std::size_t kept = 0;
    DatasetManifest manifest;
    TrainerJob job;
};

// Bootstraps on all of `examples` (shuffled by seed), filters, exports the
// dataset, trains, and returns a copy whose ModelRef carries the new adapter.
// Demos are untouched. Throws InsufficientData or TrainerFailed.
BftResult bft(const LmProgram& program, std::span<const Example> examples, const Metric& metric,
              const ExecutionEnv& env, Trainer& trainer, const BftConfig& cfg);

} // namespace lmopt
