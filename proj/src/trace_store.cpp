#include "lmopt/trace_store.hpp"

#include "lmopt/error.hpp"

#include <fstream>

namespace lmopt {

void to_json(nlohmann::json& j, const TraceStep& step) {
    j = {{"module", step.module_label},
         {"inputs", step.inputs},
         {"outputs", step.outputs},
         {"raw_completion", step.raw_completion}};
}

void from_json(const nlohmann::json& j, TraceStep& step) {
    step.module_label = j.at("module").get<std::string>();
    step.inputs = j.at("inputs").get<FieldMap>();
    step.outputs = j.at("outputs").get<FieldMap>();
    step.raw_completion = j.value("raw_completion", std::string());
}

void to_json(nlohmann::json& j, const Trace& trace) {
    j = {{"example_id", trace.example_id}, {"steps", trace.steps}, {"final_output", trace.final_output}};
    j["score"] = trace.score ? nlohmann::json(*trace.score) : nlohmann::json();
    if (trace.error) j["error"] = *trace.error;
}

void from_json(const nlohmann::json& j, Trace& trace) {
    trace.example_id = j.at("example_id").get<std::string>();
    trace.steps = j.at("steps").get<std::vector<TraceStep>>();
    trace.final_output = j.value("final_output", FieldMap{});
    trace.score = j.contains("score") && !j.at("score").is_null() ? std::optional(j.at("score").get<double>())
                                                                  : std::nullopt;
    trace.error = j.contains("error") ? std::optional(j.at("error").get<std::string>()) : std::nullopt;
}

void to_json(nlohmann::json& j, const TraceSet& set) {
    j = {{"source_program_id", set.source_program_id}, {"seed", set.seed}, {"traces", set.traces}};
}

void from_json(const nlohmann::json& j, TraceSet& set) {
    set.source_program_id = j.at("source_program_id").get<std::string>();
    set.seed = j.at("seed").get<std::uint64_t>();
    set.traces = j.at("traces").get<std::vector<Trace>>();
}

void to_json(nlohmann::json& j, const ModelRef& model) {
    j = {{"base_model_id", model.base_model_id}};
    j["adapter_id"] = model.adapter_id ? nlohmann::json(*model.adapter_id) : nlohmann::json();
    j["endpoint"] = model.endpoint ? nlohmann::json(*model.endpoint) : nlohmann::json();
}

void from_json(const nlohmann::json& j, ModelRef& model) {
    model.base_model_id = j.at("base_model_id").get<std::string>();
    auto opt = [&](const char* key) -> std::optional<std::string> {
        if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
        return j.at(key).get<std::string>();
    };
    model.adapter_id = opt("adapter_id");
    model.endpoint = opt("endpoint");
}

void to_json(nlohmann::json& j, const Demo& demo) { j = demo.fields; }
void from_json(const nlohmann::json& j, Demo& demo) { demo.fields = j.get<FieldMap>(); }

void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << doc.dump(2) << '\n';
    if (!out) throw Error("write failed for " + path.string());
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed JSON in " + path.string() + ": " + e.what());
    }
}

void to_json(nlohmann::json& j, const TraceStore& store) {
    j = {{"run_id", store.run_id},
         {"seed", store.seed},
         {"config", store.config},
         {"traces", store.traces},
         {"bootstrap", store.bootstrap}};
}

void from_json(const nlohmann::json& j, TraceStore& store) {
    store.run_id = j.at("run_id").get<std::string>();
    store.seed = j.at("seed").get<std::uint64_t>();
    store.config = j.value("config", nlohmann::json::object());
    store.traces = j.at("traces").get<std::vector<Trace>>();
    store.bootstrap = j.value("bootstrap", nlohmann::json::array());
}

} // namespace lmopt
