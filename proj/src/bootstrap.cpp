#include "lmopt/bootstrap.hpp"

#include "lmopt/error.hpp"

namespace lmopt {

TraceSet bootstrap_traces(const LmProgram& program, std::span<const Example> examples, const Metric& metric,
                          const ExecutionEnv& env, std::uint64_t seed) {
    if (examples.empty()) throw InvalidArgument("bootstrapping needs at least one example");
    const auto result = evaluate(program, examples, metric, env);
    TraceSet out;
    out.source_program_id = program.fingerprint();
    out.seed = seed;
    out.traces.reserve(result.per_example.size());
    for (const auto& r : result.per_example) out.traces.push_back(r.trace);
    return out;
}

TraceSet filter_traces(const TraceSet& traces, double threshold) {
    TraceSet out;
    out.source_program_id = traces.source_program_id;
    out.seed = traces.seed;
    for (const auto& t : traces.traces) {
        if (!t.score) throw InvalidArgument("trace for example `" + t.example_id + "` is unscored");
        // Failed executions never pass, whatever the threshold.
        if (t.error) continue;
        if (*t.score >= threshold) out.traces.push_back(t);
    }
    return out;
}

} // namespace lmopt
