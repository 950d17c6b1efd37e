#pragma once

#include "support.hpp"

#include "lmopt/strategy.hpp"
#include "lmopt/synthetic.hpp"
#include "lmopt/tasks.hpp"

#include <mutex>
#include <utility>

namespace test {

struct Call {
    std::string example_id;
    std::optional<std::string> adapter;
    bool with_demos = false;
};

// Forwards to the scripted mock and records every request.
class RecordingLm : public lmopt::LanguageModel {
public:
    RecordingLm(std::shared_ptr<const lmopt::LanguageModel> inner, std::string marker)
        : inner_(std::move(inner)), marker_(std::move(marker)) {}

    std::vector<Call> take() const {
        std::lock_guard lock(mu_);
        return std::exchange(calls_, {});
    }

protected:
    std::string complete(const lmopt::GenerateRequest& request) const override {
        {
            std::lock_guard lock(mu_);
            calls_.push_back({request.example_id, request.model.adapter_id,
                              request.prompt.find(marker_) != std::string::npos});
        }
        return inner_->generate(request);
    }

private:
    std::shared_ptr<const lmopt::LanguageModel> inner_;
    std::string marker_;
    mutable std::mutex mu_;
    mutable std::vector<Call> calls_;
};

// 60 train and 20 dev synthetic GSM8K examples behind a recording mock.
struct Setup {
    std::vector<lmopt::Example> train;
    std::vector<lmopt::Example> dev;
    std::shared_ptr<RecordingLm> lm;
    lmopt::ExecutionEnv env;
    lmopt::StrategyConfig cfg;
    lmopt::LmProgram program = lmopt::make_gsm8k_program(base_model());
};

inline Setup make_setup(const TempDir& dir, bool zero_correct = false) {
    lmopt::SynthOptions opts;
    opts.task = "gsm8k";
    opts.seed = 3;
    opts.zero_correct = zero_correct;
    opts.rates = {0.3, 0.9, 0.5, 0.95};
    auto fixture = lmopt::make_synthetic(opts);
    const auto& rows = fixture.files.at("gsm8k/train.jsonl");
    Setup s;
    s.train.assign(rows.begin(), rows.begin() + 60);
    s.dev.assign(rows.begin() + 60, rows.begin() + 80);
    s.lm = std::make_shared<RecordingLm>(std::make_shared<lmopt::MockLm>(std::move(fixture.script)),
                                         "in order to " + lmopt::synth_demo_marker("gsm8k"));
    s.env = {s.lm, nullptr, lmopt::default_inference_params(), 1};
    s.cfg.bfrs = {4, 3, 20, 20, 0};
    s.cfg.bft.work_dir = dir.path();
    s.cfg.bft.poll_interval = std::chrono::milliseconds(0);
    return s;
}

} // namespace test
