#include "lmopt/bft.hpp"

#include "lmopt/error.hpp"
#include "lmopt/hash.hpp"
#include "lmopt/prompt.hpp"
#include "lmopt/rng.hpp"
#include "lmopt/trace_store.hpp"

#include <fstream>
#include <sstream>
#include <thread>

namespace lmopt {

std::vector<FinetuneRecord> build_finetune_dataset(const TraceSet& kept, const LmProgram& program) {
    if (kept.traces.empty()) throw InsufficientData(0, 0, 0, 1);
    std::vector<FinetuneRecord> records;
    for (const auto& trace : kept.traces) {
        for (const auto& step : trace.steps) {
            const auto& module = program.module(step.module_label);
            FinetuneRecord r;
            r.prompt = render_prompt(module.signature, {}, step.inputs, module.label).text;
            r.completion = render_completion(module.signature, step.outputs);
            r.module_label = module.label;
            r.trace_id = trace.example_id;
            records.push_back(std::move(r));
        }
    }
    return records;
}

nlohmann::json DatasetManifest::to_json() const {
    return {{"path", path.string()}, {"count", count}, {"checksum", checksum}, {"source_program_id", source_program_id}};
}

DatasetManifest export_dataset(std::span<const FinetuneRecord> records, const std::filesystem::path& path,
                               const std::string& source_program_id) {
    if (records.empty()) throw InvalidArgument("refusing to export an empty fine-tuning dataset");
    std::ostringstream body;
    for (const auto& r : records) {
        body << nlohmann::json{{"prompt", r.prompt},
                               {"completion", r.completion},
                               {"module_label", r.module_label},
                               {"trace_id", r.trace_id}}
                    .dump()
             << '\n';
    }
    const std::string bytes = body.str();
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    {
        std::ofstream out(path, std::ios::binary);
        if (!out || !out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()))) {
            throw Error("cannot write fine-tuning dataset " + path.string());
        }
    }
    DatasetManifest manifest{path, records.size(), sha256_hex(bytes), source_program_id};
    auto manifest_path = path;
    manifest_path.replace_extension(".manifest.json");
    write_json_file(manifest_path, manifest.to_json());
    return manifest;
}

BftResult bft(const LmProgram& program, std::span<const Example> examples, const Metric& metric,
              const ExecutionEnv& env, Trainer& trainer, const BftConfig& cfg) {
    cfg.hyperparams.validate();
    std::vector<Example> shuffled(examples.begin(), examples.end());
    seeded_shuffle(std::span(shuffled), derive_seed(cfg.seed, 0));

    auto traces = bootstrap_traces(program, shuffled, metric, env, cfg.seed);
    const auto kept = filter_traces(traces, metric);
    std::vector<FinetuneRecord> records;
    if (!kept.traces.empty()) records = build_finetune_dataset(kept, program);
    if (records.size() < std::max<std::size_t>(cfg.min_records, 1)) {
        throw InsufficientData(traces.traces.size(), kept.traces.size(), records.size(),
                               std::max<std::size_t>(cfg.min_records, 1));
    }

    const auto manifest = export_dataset(records, cfg.work_dir / "dataset.jsonl", program.fingerprint());

    TrainerJob job;
    job.dataset_path = manifest.path;
    job.base_model = program.model_ref();
    job.hyperparams = cfg.hyperparams;
    job.output_dir = cfg.work_dir / "trainer";
    const auto job_id = trainer.submit(job);
    job.status = JobStatus::Running;
    for (;;) {
        job.status = trainer.poll(job_id);
        if (job.status == JobStatus::Succeeded || job.status == JobStatus::Failed) break;
        std::this_thread::sleep_for(cfg.poll_interval);
    }
    if (job.status == JobStatus::Failed) throw TrainerFailed(trainer.failure_message(job_id));

    const auto result = trainer.result(job_id);
    job.result_adapter = result.adapter_id;

    LmProgram updated = program;
    ModelRef model = program.model_ref();
    model.adapter_id = result.adapter_id;
    updated.set_model_ref(std::move(model));
    return BftResult{std::move(updated), std::move(traces), kept.traces.size(), manifest, std::move(job)};
}

} // namespace lmopt
