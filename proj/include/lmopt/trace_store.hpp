#pragma once

#include "lmopt/bootstrap.hpp"
#include "lmopt/program.hpp"

#include <json.hpp>

#include <filesystem>
#include <span>

namespace lmopt {

void to_json(nlohmann::json& j, const TraceStep& step);
void from_json(const nlohmann::json& j, TraceStep& step);
void to_json(nlohmann::json& j, const Trace& trace);
void from_json(const nlohmann::json& j, Trace& trace);
void to_json(nlohmann::json& j, const TraceSet& set);
void from_json(const nlohmann::json& j, TraceSet& set);
void to_json(nlohmann::json& j, const ModelRef& model);
void from_json(const nlohmann::json& j, ModelRef& model);
void to_json(nlohmann::json& j, const Demo& demo);
void from_json(const nlohmann::json& j, Demo& demo);

// Writes pretty-printed JSON with a trailing newline, creating parent directories.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc);
nlohmann::json read_json_file(const std::filesystem::path& path);

// runs/<run-id>/traces.json: {"run_id", "seed", "config", "traces": [...], ...extra}.
struct TraceStore {
    std::string run_id;
    std::uint64_t seed = 0;
    nlohmann::json config;
    std::vector<Trace> traces;
    // Per-step bootstrap trace sets, labelled by step.
    nlohmann::json bootstrap = nlohmann::json::array();
};

void to_json(nlohmann::json& j, const TraceStore& store);
void from_json(const nlohmann::json& j, TraceStore& store);

} // namespace lmopt
