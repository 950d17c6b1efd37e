#include "lmopt/error.hpp"
#include "lmopt/experiment.hpp"
#include "lmopt/prompt.hpp"
#include "lmopt/results.hpp"
#include "lmopt/synthetic.hpp"
#include "lmopt/tasks.hpp"
#include "lmopt/trace_store.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

int optimize(const std::string& task, const std::string& strategy, std::uint64_t seed, const std::string& config,
             const std::string& run_id) {
    auto cfg = lmopt::ExperimentConfig::load(config);
    if (!run_id.empty()) cfg.run_id = run_id;
    const auto out = lmopt::run_experiment(cfg, task, strategy, seed);
    std::cout << out.run_id << ": " << out.summary.at("status").get<std::string>() << ", test accuracy "
              << (out.result.accuracy ? lmopt::format_number(*out.result.accuracy) : std::string("--")) << "\n"
              << "summary: " << (out.run_dir / "summary.json").string() << "\n";
    return 0;
}

int report(const std::string& csv) {
    const auto runs = lmopt::read_results_csv(csv);
    const auto rows = lmopt::aggregate_runs(runs);
    std::cout << lmopt::render_report(rows);
    return 0;
}

int synth(const std::string& task, const std::string& out, std::uint64_t seed, bool zero_correct,
          const std::string& iris_source) {
    lmopt::SynthOptions opts;
    opts.task = task;
    opts.seed = seed;
    opts.zero_correct = zero_correct;
    const auto fixture = lmopt::make_synthetic(opts, iris_source);
    lmopt::write_synthetic(out, fixture, opts);
    std::cout << "wrote " << out << "/config.json\n";
    return 0;
}

int render(const std::string& task, const std::string& module, const std::string& inputs_path) {
    const auto spec = lmopt::task_spec(task);
    const auto program = spec.make_program(lmopt::ModelRef{"base", std::nullopt, std::nullopt});
    const auto doc = lmopt::read_json_file(inputs_path);
    lmopt::FieldMap inputs = doc.at("inputs").get<lmopt::FieldMap>();
    if (doc.contains("passages")) {
        inputs["context"] = lmopt::render_context(doc.at("passages").get<std::vector<std::string>>());
    }
    const auto& m = program.module(module);
    std::cout << lmopt::render_prompt(m.signature, m.demos, inputs, m.label).text;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Prompt and weight optimization for LM programs"};
    app.require_subcommand(1);

    std::string task, strategy, config, run_id;
    std::uint64_t seed = 0;
    auto* opt = app.add_subcommand("optimize", "Run one strategy on one task and write runs/<id>/");
    opt->add_option("--task", task, "hotpotqa, gsm8k or iris")->required();
    opt->add_option("--strategy", strategy, "vanilla, p, w, p->p, w->w, p->w, w->p or p->w->p")->required();
    opt->add_option("--seed", seed, "Run seed");
    opt->add_option("--config", config, "Experiment config JSON")->required()->check(CLI::ExistingFile);
    opt->add_option("--run-id", run_id, "Override the run id");

    std::string csv = "runs/results.csv";
    auto* rep = app.add_subcommand("report", "Aggregate results.csv into a strategy by model/task table");
    rep->add_option("--results", csv, "results.csv path")->check(CLI::ExistingFile);

    std::string out_dir, iris_source = "data/iris/iris.jsonl";
    bool zero_correct = false;
    std::uint64_t synth_seed = 0;
    auto* syn = app.add_subcommand("synth", "Write a synthetic mock dataset, LM script and config");
    syn->add_option("--task", task, "hotpotqa, gsm8k or iris")->required();
    syn->add_option("--out", out_dir, "Output directory")->required();
    syn->add_option("--seed", synth_seed, "Generator seed");
    syn->add_flag("--zero-correct", zero_correct, "Make every vanilla answer wrong");
    syn->add_option("--iris-source", iris_source, "iris.jsonl used for the iris fixture");

    std::string module, inputs;
    auto* ren = app.add_subcommand("render", "Print the vanilla prompt of one module");
    ren->add_option("--task", task, "hotpotqa, gsm8k or iris")->required();
    ren->add_option("--module", module, "Module label")->required();
    ren->add_option("--inputs", inputs, "JSON {\"inputs\": {...}, \"passages\": [...]}")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*opt) return optimize(task, strategy, seed, config, run_id);
        if (*rep) return report(csv);
        if (*syn) return synth(task, out_dir, synth_seed, zero_correct, iris_source);
        if (*ren) return render(task, module, inputs);
    } catch (const lmopt::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
