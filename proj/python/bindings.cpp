#include "lmopt/error.hpp"
#include "lmopt/experiment.hpp"
#include "lmopt/metrics.hpp"
#include "lmopt/prompt.hpp"
#include "lmopt/results.hpp"
#include "lmopt/strategy.hpp"
#include "lmopt/synthetic.hpp"
#include "lmopt/tasks.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;

namespace {

const lmopt::LanguageModule& task_module(const std::string& task, const std::string& module) {
    static std::map<std::string, lmopt::LmProgram> programs;
    auto it = programs.find(task);
    if (it == programs.end()) {
        auto spec = lmopt::task_spec(task);
        it = programs.emplace(task, spec.make_program(lmopt::ModelRef{"base", std::nullopt, std::nullopt})).first;
    }
    return it->second.module(module);
}

std::string render_vanilla_prompt(const std::string& task, const std::string& module, lmopt::FieldMap inputs,
                                  std::optional<std::vector<std::string>> passages) {
    if (passages) inputs["context"] = lmopt::render_context(*passages);
    const auto& m = task_module(task, module);
    return lmopt::render_prompt(m.signature, {}, inputs, m.label).text;
}

lmopt::FieldMap parse(const std::string& task, const std::string& module, const std::string& completion) {
    const auto& m = task_module(task, module);
    return lmopt::parse_completion(m.signature, completion, m.label);
}

std::vector<std::string> strategy_steps(const std::string& name) {
    std::vector<std::string> out;
    for (auto kind : lmopt::parse_strategy(name).steps) out.emplace_back(lmopt::to_string(kind));
    return out;
}

py::list aggregate(const std::vector<std::tuple<std::string, std::string, std::string, std::uint64_t,
                                                std::optional<double>>>& runs) {
    std::vector<lmopt::RunResult> results;
    for (const auto& [strategy, model, task, seed, acc] : runs) results.push_back({strategy, model, task, seed, acc});
    py::list out;
    for (const auto& row : lmopt::aggregate_runs(results)) {
        py::dict d;
        d["strategy"] = row.strategy;
        d["model"] = row.model;
        d["task"] = row.task;
        d["runs"] = row.runs;
        d["mean"] = row.mean;
        d["display"] = row.display();
        out.append(d);
    }
    return out;
}

std::string report(const std::string& csv) {
    const auto runs = lmopt::read_results_csv(csv);
    return lmopt::render_report(lmopt::aggregate_runs(runs));
}

std::string optimize(const std::string& config, const std::string& task, const std::string& strategy,
                     std::uint64_t seed, std::optional<std::string> run_id) {
    auto cfg = lmopt::ExperimentConfig::load(config);
    if (run_id) cfg.run_id = *run_id;
    py::gil_scoped_release release;
    return lmopt::run_experiment(cfg, task, strategy, seed).summary.dump();
}

void synth(const std::string& task, const std::string& out, std::uint64_t seed, bool zero_correct,
           const std::string& iris_source) {
    lmopt::SynthOptions opts;
    opts.task = task;
    opts.seed = seed;
    opts.zero_correct = zero_correct;
    lmopt::write_synthetic(out, lmopt::make_synthetic(opts, iris_source), opts);
}

} // namespace

PYBIND11_MODULE(_lmopt, m) {
    m.doc() = "Prompt and weight optimization for LM programs";

    py::register_exception<lmopt::Error>(m, "LmoptError");

    m.def("render_vanilla_prompt", &render_vanilla_prompt, py::arg("task"), py::arg("module"), py::arg("inputs"),
          py::arg("passages") = py::none());
    m.def("parse_completion", &parse, py::arg("task"), py::arg("module"), py::arg("completion"));
    m.def("normalize_answer", [](const std::string& s) { return lmopt::normalize_answer(s); });
    m.def("exact_match", [](const std::string& a, const std::string& b) { return lmopt::exact_match(a, b); });
    m.def("gsm8k_score", [](const std::string& a, const std::string& b) { return lmopt::gsm8k_score(a, b); },
          py::arg("response"), py::arg("gold"));
    m.def("extract_last_number", [](const std::string& s) { return lmopt::extract_last_number(s); });
    m.def("strategy_names", [] {
        std::vector<std::string> out;
        for (auto n : lmopt::strategy_names()) out.emplace_back(n);
        return out;
    });
    m.def("parse_strategy", &strategy_steps, py::arg("name"));
    m.def("round_one_decimal", &lmopt::round_one_decimal);
    m.def("aggregate_runs", &aggregate, py::arg("runs"));
    m.def("report", &report, py::arg("results_csv"));
    m.def("optimize_json", &optimize, py::arg("config"), py::arg("task"), py::arg("strategy"), py::arg("seed") = 0,
          py::arg("run_id") = py::none());
    m.def("synth", &synth, py::arg("task"), py::arg("out"), py::arg("seed") = 0, py::arg("zero_correct") = false,
          py::arg("iris_source") = "");
}
