#pragma once

#include "lmopt/bootstrap.hpp"
#include "lmopt/program.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace lmopt {

struct BfrsConfig {
    std::size_t n_candidates = 6;
    std::size_t max_demos = 3;
    std::size_t train_size = 100;
    std::size_t val_size = 250;
    std::uint64_t seed = 0;

    void validate() const;
};

// One point of the random search: a demo list per module.
struct CandidateAssignment {
    std::size_t candidate_index = 0;
    std::map<std::string, std::vector<Demo>> demos;
    // Example ids of the traces the demos came from, in demo order.
    std::vector<std::string> source_example_ids;
    std::optional<double> score;
};

// Seeded shuffle of `examples`, then disjoint T (train_size) and V (val_size).
std::pair<std::vector<Example>, std::vector<Example>> split_train_val(std::span<const Example> examples,
                                                                      const BfrsConfig& cfg);

// Exactly cfg.n_candidates assignments. Candidate 0 has no demos. Candidate
// k >= 1 takes the first min(max_demos, pool) traces of a shuffle seeded by
// (seed, k); each trace contributes one demo to every module it invoked.
std::vector<CandidateAssignment> sample_fewshot_subsets(const TraceSet& kept, const LmProgram& program,
                                                        const BfrsConfig& cfg);

// Copy of `program` with every module's demos replaced by the assignment's
// (modules absent from it get none). ModelRef unchanged.
LmProgram construct_fewshot_prompts(const LmProgram& program, const CandidateAssignment& candidate);

struct BfrsResult {
    LmProgram program;
    std::size_t best_index = 0;
    std::vector<CandidateAssignment> scoreboard;
    TraceSet bootstrapped;
    std::size_t kept = 0;
};

// Split, bootstrap on T, filter, sample candidates, score each on V and
// return the first highest-scoring one.
BfrsResult bfrs(const LmProgram& program, std::span<const Example> examples, const Metric& metric,
                const ExecutionEnv& env, const BfrsConfig& cfg);

nlohmann::json scoreboard_json(const BfrsResult& result, const BfrsConfig& cfg);

} // namespace lmopt
