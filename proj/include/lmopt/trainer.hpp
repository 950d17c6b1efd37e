#pragma once

#include "lmopt/lm.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lmopt {

struct LoraHyperparams {
    int rank = 32;
    int alpha = 64;
    double dropout = 0.0;
    std::string target_layers = "qk";
    int epochs = 5;
    double learning_rate = 1e-5;
    int effective_batch_size = 8;
    std::string precision = "bf16";

    void validate() const;
    // Contract flags: --rank 32 --alpha 64 --epochs 5 --lr 1e-5 --batch 8 --precision bf16 --target-layers qk
    // (--dropout only when non-zero).
    std::vector<std::string> cli_args() const;

    static LoraHyperparams from_json(const nlohmann::json& doc);
    nlohmann::json to_json() const;
};

// Shortest round-trip decimal without exponent zero padding: 1e-05 -> "1e-5".
std::string format_number(double value);

enum class JobStatus { Pending, Running, Succeeded, Failed };
std::string_view to_string(JobStatus status);

struct TrainerJob {
    std::filesystem::path dataset_path;
    ModelRef base_model;
    LoraHyperparams hyperparams;
    std::filesystem::path output_dir;
    JobStatus status = JobStatus::Pending;
    std::optional<std::string> result_adapter;
    std::string message;
};

// Contents of <output>/result.json.
struct TrainerResult {
    std::string adapter_id;
    std::string base_model;
    nlohmann::json metrics = nlohmann::json::object();

    static TrainerResult from_json(const nlohmann::json& doc);
    nlohmann::json to_json() const;
};

// Asynchronous job contract: submit, poll until terminal, collect.
class Trainer {
public:
    virtual ~Trainer() = default;
    virtual std::string submit(const TrainerJob& job) = 0;
    virtual JobStatus poll(const std::string& job_id) = 0;
    // Valid once poll() returned Succeeded.
    virtual TrainerResult result(const std::string& job_id) = 0;
    virtual std::string failure_message(const std::string& job_id) { return "trainer job " + job_id + " failed"; }
};

// In-process stand-in honoring the file contract: counts dataset lines and
// writes result.json with adapter "<prefix>-<n>" (n = 1, 2, ... per job).
class StubTrainer : public Trainer {
public:
    explicit StubTrainer(std::string adapter_prefix = "adp", bool fail = false)
        : prefix_(std::move(adapter_prefix)), fail_(fail) {}

    std::string submit(const TrainerJob& job) override;
    JobStatus poll(const std::string& job_id) override;
    TrainerResult result(const std::string& job_id) override;

    const std::vector<TrainerJob>& jobs() const noexcept { return jobs_; }

private:
    std::string prefix_;
    bool fail_;
    std::vector<TrainerJob> jobs_;
    std::map<std::string, TrainerResult> results_;
};

// Runs the external trainer command:
//   <command...> --data <path> --base-model <id> --output <dir> <hyperparameter flags>
// and reads <dir>/result.json after a zero exit status. Output goes to <dir>/trainer.log.
class ProcessTrainer : public Trainer {
public:
    explicit ProcessTrainer(std::vector<std::string> command);
    ~ProcessTrainer() override;

    static std::vector<std::string> arguments(const TrainerJob& job);

    std::string submit(const TrainerJob& job) override;
    JobStatus poll(const std::string& job_id) override;
    TrainerResult result(const std::string& job_id) override;
    std::string failure_message(const std::string& job_id) override;

private:
    struct Running {
        int pid = -1;
        TrainerJob job;
        std::optional<int> exit_code;
    };

    std::vector<std::string> command_;
    std::map<std::string, Running> running_;
    std::size_t next_id_ = 0;
};

} // namespace lmopt
