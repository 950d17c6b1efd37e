#pragma once

#include "lmopt/lm.hpp"
#include "lmopt/program.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace lmopt {

// Per-example probability that the mock answers correctly, by program state.
struct SynthRates {
    double base = 0.4;
    double demos = 0.5;
    double adapter = 0.45;
    double both = 0.55;
};

struct SynthOptions {
    std::string task = "gsm8k";
    std::uint64_t seed = 0;
    SynthRates rates;
    // Every vanilla base-model answer is wrong.
    bool zero_correct = false;
};

// A self-contained mock setup: datasets in the build_task layout, a mock LM
// script keyed by example id, and (for hotpotqa) a scripted retriever corpus.
struct SynthFixture {
    // Relative path under the data root -> rows.
    std::map<std::string, std::vector<Example>> files;
    MockScript script;
    nlohmann::json corpus;
};

// The mock appends this to the reasoning of every answer, so a prompt
// containing "in order to " + marker carries at least one demo.
std::string synth_demo_marker(std::string_view task);

// For "iris" the rows come from <iris_source> (the 150-row iris.jsonl).
SynthFixture make_synthetic(const SynthOptions& options, const std::filesystem::path& iris_source = {});

// Writes <dir>/data/..., <dir>/mock_lm.json, <dir>/corpus.json and a
// ready-to-run <dir>/config.json.
void write_synthetic(const std::filesystem::path& dir, const SynthFixture& fixture, const SynthOptions& options);

} // namespace lmopt
