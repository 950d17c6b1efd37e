#include "support.hpp"

#include "lmopt/error.hpp"
#include "lmopt/experiment.hpp"
#include "lmopt/strategy.hpp"
#include "lmopt/synthetic.hpp"
#include "lmopt/trace_store.hpp"

#include <doctest.h>

using namespace lmopt;
namespace fs = std::filesystem;

namespace {

fs::path synth(const test::TempDir& dir, const std::string& task, bool zero_correct = false) {
    SynthOptions opts;
    opts.task = task;
    opts.zero_correct = zero_correct;
    write_synthetic(dir.path(), make_synthetic(opts, test::source_dir() / "data" / "iris" / "iris.jsonl"), opts);
    return dir.path() / "config.json";
}

} // namespace

TEST_CASE("config: defaults, path resolution, validation") {
    const auto d = ExperimentConfig::from_json(nlohmann::json::object(), "/base");
    CHECK(d.data_root == "/base/data");
    CHECK(d.runs_dir == "/base/runs");
    CHECK(d.results_csv == "/base/runs/results.csv");
    CHECK(d.model == "mock-7b");
    CHECK(d.lambda == 1.0);
    CHECK(d.lora.rank == 32);
    CHECK_FALSE(d.continue_from_optimized_prompts);

    const auto c = ExperimentConfig::from_json(nlohmann::json::parse(R"({
        "data_root": "/abs/data", "results_csv": "out.csv", "run_id": "r1",
        "lm": {"kind": "mock", "script": "s.json"}, "inference": {"temperature": 0.5, "top_k": 0.5},
        "lora": {"rank": 8}, "lambda": 0.5, "threads": 4, "continue_from_optimized_prompts": true})"),
                                               "/base");
    CHECK(c.data_root == "/abs/data");
    CHECK(c.results_csv == "/base/out.csv");
    CHECK(c.run_id == "r1");
    CHECK(c.lm.at("script") == "/base/s.json");
    CHECK(c.inference.temperature == 0.5);
    CHECK(c.lora.rank == 8);
    CHECK(c.threads == 4);
    CHECK(c.continue_from_optimized_prompts);

    for (const char* bad : {R"({"lambda": 1.5})", R"({"threads": 0})", R"({"lm": {}})", R"({"trainer": 3})",
                            R"({"inference": {"temperature": -1}})", R"([])"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(ExperimentConfig::from_json(nlohmann::json::parse(bad)), InvalidArgument);
    }
    CHECK_THROWS_AS(make_services(ExperimentConfig::from_json(nlohmann::json::parse(R"({"lm": {"kind": "gpt"}})"))),
                    InvalidArgument);
}

TEST_CASE("default run id") {
    CHECK(default_run_id("gsm8k", "p->w->p", 2) == "gsm8k-p_w_p-s2");
    CHECK(default_run_id("iris", "vanilla", 0) == "iris-vanilla-s0");
}

TEST_CASE("a run writes its summary, traces and scoreboard") {
    test::TempDir dir;
    const auto cfg = ExperimentConfig::load(synth(dir, "gsm8k"));
    const auto out = run_experiment(cfg, "gsm8k", "p->w->p", 0);
    CHECK(out.run_id == "gsm8k-p_w_p-s0");
    CHECK(out.run_dir == dir.path() / "runs" / "gsm8k-p_w_p-s0");

    const auto summary = read_json_file(out.run_dir / "summary.json");
    CHECK(summary == out.summary);
    CHECK(summary.at("status") == "completed");
    CHECK(summary.at("strategy") == "p->w->p");
    REQUIRE(summary.at("steps").size() == 3);
    CHECK(summary.at("steps")[0].at("kind") == "bfrs");
    CHECK(summary.at("steps")[1].at("kind") == "bft");
    CHECK(summary.at("steps")[2].at("kind") == "bfrs");
    CHECK(summary.at("splits").at("test") == 1319);
    const auto dataset = summary.at("steps")[1].at("details").at("dataset").at("path").get<std::string>();
    CHECK(fs::path(dataset).is_relative());
    CHECK(fs::exists(out.run_dir / dataset));
    CHECK(fs::exists(out.run_dir / "traces.json"));
    CHECK(read_json_file(out.run_dir / "bfrs_scoreboard.json").at("steps").size() == 2);

    const double acc = summary.at("test_accuracy").get<double>();
    CHECK(acc >= 0.0);
    CHECK(acc <= 100.0);
    REQUIRE(out.result.accuracy);
    CHECK(*out.result.accuracy == acc);

    const auto rows = read_results_csv(dir.path() / "runs" / "results.csv");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0] == out.result);
}

TEST_CASE("reruns are byte-identical") {
    test::TempDir dir;
    const auto cfg = ExperimentConfig::load(synth(dir, "hotpotqa"));
    const auto a = run_experiment(cfg, "hotpotqa", "p->w", 1);
    const auto first = test::read_file(a.run_dir / "summary.json");
    const auto first_traces = test::read_file(a.run_dir / "traces.json");
    const auto b = run_experiment(cfg, "hotpotqa", "p->w", 1);
    CHECK(test::read_file(b.run_dir / "summary.json") == first);
    CHECK(test::read_file(b.run_dir / "traces.json") == first_traces);
    CHECK(read_results_csv(cfg.results_csv).size() == 2);
}

TEST_CASE("an untrainable run records --") {
    test::TempDir dir;
    const auto cfg = ExperimentConfig::load(synth(dir, "gsm8k", true));
    const auto out = run_experiment(cfg, "gsm8k", "w", 0);
    CHECK(out.summary.at("status") == "insufficient-data");
    CHECK(out.summary.at("test_accuracy") == "--");
    CHECK_FALSE(out.result.accuracy);
    CHECK(test::read_file(cfg.results_csv).find("w,mock-7b,gsm8k,0,--") != std::string::npos);
}

TEST_CASE("every strategy runs on iris") {
    test::TempDir dir;
    auto cfg = ExperimentConfig::load(synth(dir, "iris"));
    for (auto name : strategy_names()) {
        const auto out = run_experiment(cfg, "iris", name, 0);
        CHECK(out.summary.at("steps").size() == parse_strategy(name).steps.size());
    }
    CHECK(aggregate_runs(read_results_csv(cfg.results_csv)).size() == 8);
    CHECK_THROWS_AS(run_experiment(cfg, "iris", "w->p->w", 0), UnknownStrategy);
    CHECK_THROWS_AS(run_experiment(cfg, "mnist", "p", 0), InvalidArgument);
}
