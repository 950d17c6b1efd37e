#include "lmopt/tasks.hpp"

#include "lmopt/error.hpp"
#include "lmopt/metrics.hpp"
#include "lmopt/prompt.hpp"
#include "lmopt/rng.hpp"

#include <fstream>
#include <set>
#include <unordered_set>

namespace lmopt {

namespace {

// Fixed stream for split membership, independent of any run seed.
constexpr std::uint64_t kSplitSeed = 0x5eed5eedULL;

FieldMap select_inputs(const Signature& sig, const FieldMap& inputs) {
    FieldMap out;
    for (const auto& f : sig.inputs()) {
        auto it = inputs.find(f.name);
        if (it == inputs.end()) throw InvalidArgument("missing input field `" + f.name + "`");
        out.emplace(f.name, it->second);
    }
    return out;
}

std::string query_label(std::size_t hop) { return "generate_query[" + std::to_string(hop) + "]"; }

} // namespace

FieldMap HotPotQaControl::forward(ProgramContext& ctx, const FieldMap& inputs) const {
    const auto question_it = inputs.find("question");
    if (question_it == inputs.end()) throw InvalidArgument("missing input field `question`");
    const std::string& question = question_it->second;

    std::vector<std::string> context;
    for (std::size_t hop = 0; hop < 2; ++hop) {
        const auto out = ctx.call(query_label(hop), {{"context", render_context(context)}, {"question", question}});
        const auto passages = ctx.retrieve(out.at("search_query"), passages_per_hop_);
        context = dedup_context(context, passages);
    }
    auto answer = ctx.call("generate_answer", {{"context", render_context(context)}, {"question", question}});
    answer["context"] = render_context(context);
    return answer;
}

FieldMap SingleModuleControl::forward(ProgramContext& ctx, const FieldMap& inputs) const {
    return ctx.call(label_, inputs);
}

Signature hotpotqa_query_signature() {
    return chain_of_thought(Signature::from_names({"context", "question"}, {"search_query"}));
}

Signature hotpotqa_answer_signature() {
    return chain_of_thought(Signature::from_names({"context", "question"}, {"answer"}));
}

Signature gsm8k_signature() { return chain_of_thought(Signature::from_names({"question"}, {"answer"})); }

Signature iris_signature() {
    return chain_of_thought(Signature("Given the petal and sepal dimensions in cm, predict the iris species.",
                                      {{"petal_length", {}}, {"petal_width", {}}, {"sepal_length", {}}, {"sepal_width", {}}},
                                      {{"answer", "setosa, versicolor, or virginica"}}));
}

LmProgram make_hotpotqa_program(ModelRef model, std::size_t passages_per_hop) {
    std::vector<LanguageModule> modules{
        {query_label(0), hotpotqa_query_signature(), {}},
        {query_label(1), hotpotqa_query_signature(), {}},
        {"generate_answer", hotpotqa_answer_signature(), {}},
    };
    return LmProgram("hotpotqa", std::move(modules), std::make_shared<HotPotQaControl>(passages_per_hop),
                     std::move(model));
}

namespace {

class FilteredSingleModule : public SingleModuleControl {
public:
    FilteredSingleModule(std::string label, Signature sig) : SingleModuleControl(std::move(label)), sig_(std::move(sig)) {}
    FieldMap forward(ProgramContext& ctx, const FieldMap& inputs) const override {
        return SingleModuleControl::forward(ctx, select_inputs(sig_, inputs));
    }

private:
    Signature sig_;
};

} // namespace

LmProgram make_gsm8k_program(ModelRef model) {
    return LmProgram("gsm8k", {{"generate_answer", gsm8k_signature(), {}}},
                     std::make_shared<FilteredSingleModule>("generate_answer", gsm8k_signature()), std::move(model));
}

LmProgram make_iris_program(ModelRef model) {
    return LmProgram("iris", {{"generate_answer", iris_signature(), {}}},
                     std::make_shared<FilteredSingleModule>("generate_answer", iris_signature()), std::move(model));
}

namespace {

std::string field_or_empty(const FieldMap& map, const char* key) {
    auto it = map.find(key);
    return it == map.end() ? std::string() : it->second;
}

} // namespace

Metric exact_match_metric(std::string name) {
    return Metric{std::move(name), 1.0, [](const FieldMap& output, const FieldMap& metadata) {
                      return exact_match(field_or_empty(output, "answer"), field_or_empty(metadata, "answer"));
                  }};
}

Metric gsm8k_metric() {
    return Metric{"gsm8k_last_number", 1.0, [](const FieldMap& output, const FieldMap& metadata) {
                      return gsm8k_score(field_or_empty(output, "answer"), field_or_empty(metadata, "answer"));
                  }};
}

std::vector<std::string> dedup_context(std::span<const std::string> context, std::span<const std::string> passages) {
    std::vector<std::string> out;
    std::unordered_set<std::string_view> seen;
    auto add = [&](const std::string& p) {
        if (seen.insert(p).second) out.push_back(p);
    };
    for (const auto& p : context) add(p);
    for (const auto& p : passages) add(p);
    return out;
}

TaskSpec task_spec(std::string_view name) {
    TaskSpec t;
    t.name = std::string(name);
    if (name == "hotpotqa") {
        t.make_program = [](ModelRef m) { return make_hotpotqa_program(std::move(m)); };
        t.metric = exact_match_metric("hotpotqa_exact_match");
        t.splits = {1000, 500, 1500};
        t.prompt_opt = {100, 250};
    } else if (name == "gsm8k") {
        t.make_program = [](ModelRef m) { return make_gsm8k_program(std::move(m)); };
        t.metric = gsm8k_metric();
        t.splits = {1000, 500, 1319};
        t.prompt_opt = {100, 250};
    } else if (name == "iris") {
        t.make_program = [](ModelRef m) { return make_iris_program(std::move(m)); };
        t.metric = exact_match_metric("iris_exact_match");
        t.splits = {50, 50, 50};
        t.prompt_opt = {15, 35};
    } else {
        throw InvalidArgument("unknown task `" + std::string(name) + "` (expected hotpotqa, gsm8k or iris)");
    }
    return t;
}

std::vector<Example> load_examples(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open dataset file " + path.string());
    std::vector<Example> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const auto doc = nlohmann::json::parse(line);
            Example ex;
            ex.id = doc.at("id").is_string() ? doc.at("id").get<std::string>() : doc.at("id").dump();
            ex.inputs = doc.at("inputs").get<FieldMap>();
            ex.metadata = doc.value("metadata", FieldMap{});
            out.push_back(std::move(ex));
        } catch (const nlohmann::json::exception& e) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

void write_examples(const std::filesystem::path& path, std::span<const Example> examples) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write dataset file " + path.string());
    for (const auto& ex : examples) {
        out << nlohmann::json{{"id", ex.id}, {"inputs", ex.inputs}, {"metadata", ex.metadata}}.dump() << '\n';
    }
}

namespace {

std::vector<Example> take(std::vector<Example>& pool, std::size_t offset, std::size_t n) {
    return {pool.begin() + static_cast<std::ptrdiff_t>(offset),
            pool.begin() + static_cast<std::ptrdiff_t>(offset + n)};
}

void require_size(const std::filesystem::path& path, std::size_t have, std::size_t need) {
    if (have < need) {
        throw DataError(path.string() + " has " + std::to_string(have) + " examples, need " + std::to_string(need));
    }
}

void check_unique_ids(const TaskSpec& t) {
    std::set<std::string_view> ids;
    for (const auto* split : {&t.train, &t.dev, &t.test}) {
        for (const auto& ex : *split) {
            if (!ids.insert(ex.id).second) throw DataError("duplicate example id `" + ex.id + "` across splits");
        }
    }
}

} // namespace

TaskSpec build_task(std::string_view name, std::uint64_t seed, const std::filesystem::path& data_root) {
    TaskSpec t = task_spec(name);
    const auto dir = data_root / t.name;
    const auto& s = t.splits;

    if (t.name == "iris") {
        const auto path = dir / "iris.jsonl";
        auto pool = load_examples(path);
        require_size(path, pool.size(), s.train + s.dev + s.test);
        seeded_shuffle(std::span(pool), kSplitSeed);
        t.train = take(pool, 0, s.train);
        t.dev = take(pool, s.train, s.dev);
        t.test = take(pool, s.train + s.dev, s.test);
    } else {
        const auto train_path = dir / "train.jsonl";
        auto pool = load_examples(train_path);
        require_size(train_path, pool.size(), s.train + s.dev);
        seeded_shuffle(std::span(pool), kSplitSeed);
        t.train = take(pool, 0, s.train);
        t.dev = take(pool, s.train, s.dev);

        const auto test_path = dir / (t.name == "hotpotqa" ? "validation.jsonl" : "test.jsonl");
        auto test_pool = load_examples(test_path);
        require_size(test_path, test_pool.size(), s.test);
        if (t.name == "hotpotqa") seeded_shuffle(std::span(test_pool), kSplitSeed);
        t.test = take(test_pool, 0, s.test);
    }
    check_unique_ids(t);
    seeded_shuffle(std::span(t.train), derive_seed(seed, 0));
    return t;
}

} // namespace lmopt
