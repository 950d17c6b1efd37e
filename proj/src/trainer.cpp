#include "lmopt/trainer.hpp"

#include "lmopt/error.hpp"
#include "lmopt/trace_store.hpp"

#include <array>
#include <charconv>
#include <cstring>
#include <csignal>
#include <fcntl.h>
#include <fstream>
#include <spawn.h>
#include <sys/wait.h>

extern char** environ;

namespace lmopt {

void LoraHyperparams::validate() const {
    if (rank <= 0 || alpha <= 0 || epochs <= 0 || effective_batch_size <= 0) {
        throw InvalidArgument("LoRA rank, alpha, epochs and batch size must be positive");
    }
    if (!(dropout >= 0.0 && dropout < 1.0)) throw InvalidArgument("LoRA dropout must be in [0, 1)");
    if (!(learning_rate > 0.0)) throw InvalidArgument("learning rate must be positive");
}

std::string format_number(double value) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) throw Error("cannot format number");
    std::string s(buf.data(), end);
    if (auto e = s.find('e'); e != std::string::npos) {
        std::string mantissa = s.substr(0, e);
        std::string exponent = s.substr(e + 1);
        std::string sign;
        if (!exponent.empty() && (exponent[0] == '-' || exponent[0] == '+')) {
            if (exponent[0] == '-') sign = "-";
            exponent.erase(0, 1);
        }
        exponent.erase(0, std::min(exponent.find_first_not_of('0'), exponent.size() - 1));
        s = mantissa + "e" + sign + exponent;
    }
    return s;
}

std::vector<std::string> LoraHyperparams::cli_args() const {
    std::vector<std::string> args{"--rank",   std::to_string(rank),   "--alpha",     std::to_string(alpha),
                                  "--epochs", std::to_string(epochs), "--lr",        format_number(learning_rate),
                                  "--batch",  std::to_string(effective_batch_size), "--precision", precision,
                                  "--target-layers", target_layers};
    if (dropout != 0.0) {
        args.push_back("--dropout");
        args.push_back(format_number(dropout));
    }
    return args;
}

LoraHyperparams LoraHyperparams::from_json(const nlohmann::json& doc) {
    LoraHyperparams hp;
    hp.rank = doc.value("rank", hp.rank);
    hp.alpha = doc.value("alpha", hp.alpha);
    hp.dropout = doc.value("dropout", hp.dropout);
    hp.target_layers = doc.value("target_layers", hp.target_layers);
    hp.epochs = doc.value("epochs", hp.epochs);
    hp.learning_rate = doc.value("learning_rate", hp.learning_rate);
    hp.effective_batch_size = doc.value("effective_batch_size", hp.effective_batch_size);
    hp.precision = doc.value("precision", hp.precision);
    hp.validate();
    return hp;
}

nlohmann::json LoraHyperparams::to_json() const {
    return {{"rank", rank},
            {"alpha", alpha},
            {"dropout", dropout},
            {"target_layers", target_layers},
            {"epochs", epochs},
            {"learning_rate", learning_rate},
            {"effective_batch_size", effective_batch_size},
            {"precision", precision}};
}

std::string_view to_string(JobStatus status) {
    switch (status) {
    case JobStatus::Pending: return "pending";
    case JobStatus::Running: return "running";
    case JobStatus::Succeeded: return "succeeded";
    case JobStatus::Failed: return "failed";
    }
    return "unknown";
}

TrainerResult TrainerResult::from_json(const nlohmann::json& doc) {
    TrainerResult r;
    r.adapter_id = doc.at("adapter_id").get<std::string>();
    r.base_model = doc.at("base_model").get<std::string>();
    r.metrics = doc.value("metrics", nlohmann::json::object());
    if (r.adapter_id.empty()) throw DataError("result.json has an empty adapter_id");
    return r;
}

nlohmann::json TrainerResult::to_json() const {
    return {{"adapter_id", adapter_id}, {"base_model", base_model}, {"metrics", metrics}};
}

namespace {

std::size_t count_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open training data " + path.string());
    std::size_t n = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) ++n;
    }
    return n;
}

} // namespace

std::string StubTrainer::submit(const TrainerJob& job) {
    job.hyperparams.validate();
    const std::string id = std::to_string(jobs_.size());
    jobs_.push_back(job);
    auto& stored = jobs_.back();
    if (fail_) {
        stored.status = JobStatus::Failed;
        stored.message = "stub trainer configured to fail";
        return id;
    }
    TrainerResult r;
    r.adapter_id = prefix_ + "-" + std::to_string(jobs_.size());
    r.base_model = job.base_model.base_model_id;
    r.metrics = {{"record_count", count_lines(job.dataset_path)}, {"train_loss_final", 0.0}};
    write_json_file(job.output_dir / "result.json", r.to_json());
    stored.status = JobStatus::Succeeded;
    stored.result_adapter = r.adapter_id;
    results_[id] = std::move(r);
    return id;
}

JobStatus StubTrainer::poll(const std::string& job_id) { return jobs_.at(std::stoul(job_id)).status; }

TrainerResult StubTrainer::result(const std::string& job_id) {
    auto it = results_.find(job_id);
    if (it == results_.end()) throw TrainerFailed("stub trainer job " + job_id + " has no result");
    return it->second;
}

ProcessTrainer::ProcessTrainer(std::vector<std::string> command) : command_(std::move(command)) {
    if (command_.empty()) throw InvalidArgument("trainer command is empty");
}

ProcessTrainer::~ProcessTrainer() {
    for (auto& [id, run] : running_) {
        if (run.pid > 0 && !run.exit_code) {
            ::kill(run.pid, SIGTERM);
            int status = 0;
            ::waitpid(run.pid, &status, 0);
        }
    }
}

std::vector<std::string> ProcessTrainer::arguments(const TrainerJob& job) {
    std::vector<std::string> args{"--data", job.dataset_path.string(), "--base-model", job.base_model.base_model_id,
                                  "--output", job.output_dir.string()};
    auto hp = job.hyperparams.cli_args();
    args.insert(args.end(), hp.begin(), hp.end());
    return args;
}

std::string ProcessTrainer::submit(const TrainerJob& job) {
    job.hyperparams.validate();
    std::filesystem::create_directories(job.output_dir);
    std::vector<std::string> argv_storage = command_;
    auto args = arguments(job);
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_storage) argv.push_back(a.data());
    argv.push_back(nullptr);

    const std::string log_path = (job.output_dir / "trainer.log").string();
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, log_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    posix_spawn_file_actions_adddup2(&actions, STDOUT_FILENO, STDERR_FILENO);
    pid_t pid = -1;
    const int rc = posix_spawnp(&pid, argv[0], &actions, nullptr, argv.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    if (rc != 0) throw TrainerFailed("cannot start trainer `" + command_.front() + "`: " + std::strerror(rc));

    const std::string id = std::to_string(next_id_++);
    Running run;
    run.pid = pid;
    run.job = job;
    run.job.status = JobStatus::Running;
    running_.emplace(id, std::move(run));
    return id;
}

JobStatus ProcessTrainer::poll(const std::string& job_id) {
    auto& run = running_.at(job_id);
    if (!run.exit_code) {
        int status = 0;
        const pid_t done = ::waitpid(run.pid, &status, WNOHANG);
        if (done == 0) return JobStatus::Running;
        run.exit_code = (done == run.pid && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
    }
    if (*run.exit_code != 0) return run.job.status = JobStatus::Failed;
    if (!std::filesystem::exists(run.job.output_dir / "result.json")) {
        run.job.message = "trainer exited 0 without writing result.json";
        return run.job.status = JobStatus::Failed;
    }
    return run.job.status = JobStatus::Succeeded;
}

TrainerResult ProcessTrainer::result(const std::string& job_id) {
    const auto& run = running_.at(job_id);
    if (run.job.status != JobStatus::Succeeded) throw TrainerFailed(failure_message(job_id));
    return TrainerResult::from_json(read_json_file(run.job.output_dir / "result.json"));
}

std::string ProcessTrainer::failure_message(const std::string& job_id) {
    const auto& run = running_.at(job_id);
    if (!run.job.message.empty()) return run.job.message;
    return "trainer exited with status " + std::to_string(run.exit_code.value_or(-1)) + "; see " +
           (run.job.output_dir / "trainer.log").string();
}

} // namespace lmopt
