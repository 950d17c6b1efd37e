#include "lmopt/experiment.hpp"

#include "lmopt/bfrs.hpp"
#include "lmopt/bft.hpp"
#include "lmopt/error.hpp"
#include "lmopt/http_lm.hpp"
#include "lmopt/strategy.hpp"
#include "lmopt/tasks.hpp"
#include "lmopt/trace_store.hpp"

namespace lmopt {

namespace fs = std::filesystem;

namespace {

fs::path resolve(const fs::path& base, const fs::path& p) {
    if (p.empty() || p.is_absolute() || base.empty()) return p;
    return base / p;
}

nlohmann::json resolve_paths(nlohmann::json section, const fs::path& base, std::initializer_list<const char*> keys) {
    for (const char* key : keys) {
        if (section.contains(key) && section[key].is_string()) {
            section[key] = resolve(base, section[key].get<std::string>()).string();
        }
    }
    return section;
}

InferenceParams inference_from_json(const nlohmann::json& j) {
    InferenceParams p = default_inference_params();
    p.temperature = j.value("temperature", p.temperature);
    p.top_k = j.value("top_k", p.top_k);
    p.max_total_tokens = j.value("max_total_tokens", p.max_total_tokens);
    if (j.contains("stop")) p.stop_strings = j.at("stop").get<std::vector<std::string>>();
    p.validate();
    return p;
}

BfrsConfig bfrs_config(const TaskSpec& spec, const nlohmann::json& overrides) {
    BfrsConfig c;
    c.train_size = spec.prompt_opt.train;
    c.val_size = spec.prompt_opt.val;
    c.n_candidates = overrides.value("n_candidates", c.n_candidates);
    c.max_demos = overrides.value("max_demos", c.max_demos);
    c.train_size = overrides.value("train_size", c.train_size);
    c.val_size = overrides.value("val_size", c.val_size);
    c.validate();
    return c;
}

std::string kind_of(const nlohmann::json& section, const char* what) {
    if (!section.is_object() || !section.contains("kind")) {
        throw InvalidArgument(std::string(what) + " section needs a \"kind\"");
    }
    return section.at("kind").get<std::string>();
}

nlohmann::json relative_dataset_path(nlohmann::json details, const fs::path& run_dir) {
    if (details.contains("dataset") && details["dataset"].contains("path")) {
        const fs::path p = details["dataset"]["path"].get<std::string>();
        details["dataset"]["path"] = p.lexically_relative(run_dir).generic_string();
    }
    return details;
}

} // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& doc, const fs::path& base_dir) {
    if (!doc.is_object()) throw InvalidArgument("experiment config must be a JSON object");
    ExperimentConfig c;
    c.data_root = resolve(base_dir, doc.value("data_root", c.data_root.string()));
    c.runs_dir = resolve(base_dir, doc.value("runs_dir", c.runs_dir.string()));
    c.results_csv = doc.contains("results_csv") ? resolve(base_dir, doc.at("results_csv").get<std::string>())
                                                : c.runs_dir / "results.csv";
    if (doc.contains("run_id")) c.run_id = doc.at("run_id").get<std::string>();
    c.model = doc.value("model", c.model);
    if (doc.contains("lm")) c.lm = resolve_paths(doc.at("lm"), base_dir, {"script"});
    if (doc.contains("retriever")) c.retriever = resolve_paths(doc.at("retriever"), base_dir, {"corpus"});
    if (doc.contains("trainer")) c.trainer = doc.at("trainer");
    if (doc.contains("inference")) c.inference = inference_from_json(doc.at("inference"));
    if (doc.contains("bfrs")) c.bfrs = doc.at("bfrs");
    if (doc.contains("lora")) c.lora = LoraHyperparams::from_json(doc.at("lora"));
    c.lambda = doc.value("lambda", c.lambda);
    c.min_records = doc.value("min_records", c.min_records);
    c.threads = doc.value("threads", c.threads);
    c.continue_from_optimized_prompts = doc.value("continue_from_optimized_prompts", false);
    if (c.lambda < 0.0 || c.lambda > 1.0) throw InvalidArgument("lambda must lie in [0, 1]");
    if (c.threads == 0) throw InvalidArgument("threads must be positive");
    kind_of(c.lm, "lm");
    kind_of(c.retriever, "retriever");
    kind_of(c.trainer, "trainer");
    return c;
}

ExperimentConfig ExperimentConfig::load(const fs::path& path) {
    return from_json(read_json_file(path), path.parent_path());
}

nlohmann::json ExperimentConfig::to_json() const {
    return {{"model", model},
            {"lm_kind", lm.at("kind")},
            {"retriever_kind", retriever.at("kind")},
            {"trainer_kind", trainer.at("kind")},
            {"inference",
             {{"temperature", inference.temperature},
              {"top_k", inference.top_k},
              {"max_total_tokens", inference.max_total_tokens},
              {"stop", inference.stop_strings}}},
            {"lora", lora.to_json()},
            {"lambda", lambda},
            {"min_records", min_records},
            {"continue_from_optimized_prompts", continue_from_optimized_prompts}};
}

ExperimentServices make_services(const ExperimentConfig& cfg) {
    ExperimentServices s;
    const auto lm_kind = kind_of(cfg.lm, "lm");
    if (lm_kind == "mock") {
        if (!cfg.lm.contains("script")) throw InvalidArgument("mock lm needs a \"script\" path");
        s.lm = std::make_shared<MockLm>(MockScript::load(cfg.lm.at("script").get<std::string>()));
    } else if (lm_kind == "http") {
        s.lm = std::make_shared<HttpLm>(HttpLmConfig::from_json(cfg.lm));
    } else {
        throw InvalidArgument("unknown lm kind `" + lm_kind + "`");
    }

    const auto r_kind = kind_of(cfg.retriever, "retriever");
    if (r_kind == "mock") {
        s.retriever = cfg.retriever.contains("corpus")
                          ? std::make_shared<MockRetriever>(
                                MockRetriever::load(cfg.retriever.at("corpus").get<std::string>()))
                          : std::make_shared<MockRetriever>(std::vector<std::string>{});
    } else if (r_kind == "http") {
        s.retriever = std::make_shared<HttpRetriever>(HttpRetrieverConfig::from_json(cfg.retriever));
    } else {
        throw InvalidArgument("unknown retriever kind `" + r_kind + "`");
    }

    const auto t_kind = kind_of(cfg.trainer, "trainer");
    if (t_kind == "stub") {
        s.trainer = std::make_shared<StubTrainer>(cfg.trainer.value("adapter_prefix", std::string("adp")));
    } else if (t_kind == "process") {
        s.trainer = std::make_shared<ProcessTrainer>(cfg.trainer.at("command").get<std::vector<std::string>>());
    } else {
        throw InvalidArgument("unknown trainer kind `" + t_kind + "`");
    }
    return s;
}

std::string default_run_id(std::string_view task, std::string_view strategy, std::uint64_t seed) {
    std::string s(strategy);
    for (std::size_t pos; (pos = s.find("->")) != std::string::npos;) s.replace(pos, 2, "_");
    return std::string(task) + "-" + s + "-s" + std::to_string(seed);
}

ExperimentOutcome run_experiment(const ExperimentConfig& cfg, std::string_view task, std::string_view strategy,
                                 std::uint64_t seed, const ExperimentServices& services) {
    const StrategyPlan plan = parse_strategy(strategy, seed);
    TaskSpec spec = build_task(task, seed, cfg.data_root);

    ExperimentOutcome outcome;
    outcome.run_id = cfg.run_id.value_or(default_run_id(task, plan.name, seed));
    outcome.run_dir = cfg.runs_dir / outcome.run_id;
    fs::remove_all(outcome.run_dir);
    fs::create_directories(outcome.run_dir);

    const ExecutionEnv env{services.lm, services.retriever, cfg.inference, cfg.threads};
    Metric metric = spec.metric;
    metric.threshold = cfg.lambda;
    const LmProgram program = spec.make_program(ModelRef{cfg.model, std::nullopt, std::nullopt});

    StrategyConfig scfg;
    scfg.bfrs = bfrs_config(spec, cfg.bfrs);
    scfg.bft.hyperparams = cfg.lora;
    scfg.bft.min_records = cfg.min_records;
    scfg.bft.work_dir = outcome.run_dir / "bft";
    scfg.bft.poll_interval = std::chrono::milliseconds(cfg.trainer.value("poll_interval_ms", 100));
    scfg.continue_from_optimized_prompts = cfg.continue_from_optimized_prompts;

    const double initial_dev = evaluate(program, spec.dev, metric, env).mean_score;
    const auto result = run_strategy(plan, program, spec.train, spec.dev, metric, env, *services.trainer, scfg);

    nlohmann::json steps = nlohmann::json::array();
    nlohmann::json scoreboards = nlohmann::json::array();
    TraceStore store{outcome.run_id, seed, cfg.to_json(), {}, nlohmann::json::array()};
    for (const auto& rec : result.log) {
        auto j = rec.to_json();
        j["details"] = relative_dataset_path(j["details"], outcome.run_dir);
        steps.push_back(std::move(j));
        if (rec.kind == StepKind::PromptOpt) {
            auto board = rec.details;
            board["step"] = rec.index;
            scoreboards.push_back(std::move(board));
        }
        store.bootstrap.push_back({{"step", rec.index}, {"kind", to_string(rec.kind)}, {"trace_set", rec.bootstrapped}});
    }

    outcome.result = RunResult{plan.name, cfg.model, spec.name, seed, std::nullopt};
    nlohmann::json final_program;
    std::optional<double> final_dev;
    if (result.status == StrategyStatus::Completed) {
        final_dev = result.log.empty() ? std::optional<double>(initial_dev) : result.log.back().dev_score;
        const auto test = evaluate(result.program, spec.test, metric, env);
        double correct = 0.0;
        for (const auto& o : test.per_example) correct += o.score;
        outcome.result.accuracy = correct * 100.0 / static_cast<double>(test.per_example.size());
        for (const auto& o : test.per_example) store.traces.push_back(o.trace);
        nlohmann::json demos = nlohmann::json::object();
        for (const auto& m : result.program.modules()) demos[m.label] = m.demos.size();
        final_program = {{"fingerprint", result.program.fingerprint()},
                         {"model", result.program.model_ref()},
                         {"demo_counts", demos},
                         {"test_failures", test.failures}};
    }

    outcome.summary = {
        {"run_id", outcome.run_id},
        {"task", spec.name},
        {"strategy", plan.name},
        {"seed", seed},
        {"model", cfg.model},
        {"status", result.status == StrategyStatus::Completed ? "completed" : "insufficient-data"},
        {"message", result.message},
        {"config", cfg.to_json()},
        {"bfrs", {{"n_candidates", scfg.bfrs.n_candidates},
                  {"max_demos", scfg.bfrs.max_demos},
                  {"train_size", scfg.bfrs.train_size},
                  {"val_size", scfg.bfrs.val_size}}},
        {"splits", {{"train", spec.train.size()}, {"dev", spec.dev.size()}, {"test", spec.test.size()}}},
        {"initial_program", program.fingerprint()},
        {"initial_dev_score", initial_dev},
        {"steps", std::move(steps)},
        {"final_program", final_program},
        {"final_dev_score", final_dev ? nlohmann::json(*final_dev) : nlohmann::json()},
        {"test_accuracy", outcome.result.accuracy ? nlohmann::json(*outcome.result.accuracy) : nlohmann::json("--")},
    };

    write_json_file(outcome.run_dir / "summary.json", outcome.summary);
    write_json_file(outcome.run_dir / "traces.json", store);
    write_json_file(outcome.run_dir / "bfrs_scoreboard.json", {{"run_id", outcome.run_id}, {"steps", scoreboards}});
    if (!cfg.results_csv.empty()) append_result_csv(cfg.results_csv, outcome.result);
    return outcome;
}

ExperimentOutcome run_experiment(const ExperimentConfig& cfg, std::string_view task, std::string_view strategy,
                                 std::uint64_t seed) {
    return run_experiment(cfg, task, strategy, seed, make_services(cfg));
}

} // namespace lmopt
