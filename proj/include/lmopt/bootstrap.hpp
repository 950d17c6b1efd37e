#pragma once

#include "lmopt/program.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace lmopt {

struct TraceSet {
    std::vector<Trace> traces;
    // Fingerprint of the program version that produced the traces.
    std::string source_program_id;
    std::uint64_t seed = 0;
};

// One scored trace per example, in example order; failed runs score 0.
TraceSet bootstrap_traces(const LmProgram& program, std::span<const Example> examples, const Metric& metric,
                          const ExecutionEnv& env, std::uint64_t seed = 0);

// Keeps exactly the traces scoring >= threshold, in order.
TraceSet filter_traces(const TraceSet& traces, double threshold);
inline TraceSet filter_traces(const TraceSet& traces, const Metric& metric) {
    return filter_traces(traces, metric.threshold);
}

} // namespace lmopt
