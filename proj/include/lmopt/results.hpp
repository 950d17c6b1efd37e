#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lmopt {

// One test-set run. An absent accuracy is the insufficient-data ("--") outcome.
struct RunResult {
    std::string strategy;
    std::string model;
    std::string task;
    std::uint64_t seed = 0;
    std::optional<double> accuracy;

    friend bool operator==(const RunResult&, const RunResult&) = default;
};

struct AggregateRow {
    std::string strategy;
    std::string model;
    std::string task;
    std::size_t runs = 0;
    // Mean rounded to one decimal, half away from zero; absent when every run is "--".
    std::optional<double> mean;

    // "37.6" or "--".
    std::string display() const;
};

// Rounds to one decimal, half away from zero. Exact for inputs with at most
// six decimals.
double round_one_decimal(double value);
// Mean of the numeric values, rounded with round_one_decimal.
std::optional<double> mean_one_decimal(std::span<const std::optional<double>> values);

// Groups by (strategy, model, task) in first-appearance order.
std::vector<AggregateRow> aggregate_runs(std::span<const RunResult> results);

// CSV with header "strategy,model,task,seed,accuracy"; "--" for missing accuracy.
std::vector<RunResult> read_results_csv(const std::filesystem::path& path);
void write_results_csv(const std::filesystem::path& path, std::span<const RunResult> results);
// Appends one row, writing the header when the file is new.
void append_result_csv(const std::filesystem::path& path, const RunResult& result);

// Report label for a strategy name, e.g. "p->w" -> "p -> w", "p" -> "Prompt Optimization (p)".
std::string strategy_label(std::string_view strategy);

// Fixed-width table: one line per strategy (canonical order first), one column
// per (model, task) pair.
std::string render_report(std::span<const AggregateRow> rows);

} // namespace lmopt
