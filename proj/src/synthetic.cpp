#include "lmopt/synthetic.hpp"

#include "lmopt/error.hpp"
#include "lmopt/rng.hpp"
#include "lmopt/tasks.hpp"
#include "lmopt/trace_store.hpp"

#include <array>
#include <cstdio>

namespace lmopt {

namespace {

double unit(std::uint64_t seed, std::uint64_t index) {
    return static_cast<double>(derive_seed(seed, index) >> 11) * 0x1.0p-53;
}

std::string padded(std::string_view prefix, std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%05zu", i);
    return std::string(prefix) + buf;
}

// Rules for one example, most specific first.
void add_answer_rules(std::vector<MockRule>& rules, const std::string& id, const std::string& module,
                      const std::string& marker, double u, const SynthOptions& o,
                      const std::function<std::string(bool)>& completion) {
    const SynthRates& r = o.rates;
    rules.push_back({std::nullopt, module, id, "*", marker, completion(u < r.both)});
    rules.push_back({std::nullopt, module, id, "*", std::nullopt, completion(u < r.adapter)});
    rules.push_back({std::nullopt, module, id, std::nullopt, marker, completion(u < r.demos)});
    rules.push_back({std::nullopt, module, id, std::nullopt, std::nullopt, completion(!o.zero_correct && u < r.base)});
}

constexpr std::array<const char*, 8> kSyllables{"ka", "lor", "vin", "des", "mu", "tra", "zel", "on"};
constexpr std::array<const char*, 6> kCountries{"Arvenia", "Belmora", "Calistan", "Dorvany", "Estoria", "Fenwick"};

std::string place_name(std::size_t i) {
    std::string s;
    std::size_t n = i;
    for (int k = 0; k < 4; ++k) {
        s += kSyllables[n % kSyllables.size()];
        n /= kSyllables.size();
    }
    s[0] = static_cast<char>(s[0] - 'a' + 'A');
    return s + std::to_string(i);
}

SynthFixture gsm8k_fixture(const SynthOptions& o) {
    SynthFixture f;
    std::vector<MockRule> rules;
    const std::string marker = "in order to " + synth_demo_marker("gsm8k");
    auto make = [&](const std::string& file, std::string_view prefix, std::size_t n, std::uint64_t stream) {
        auto& rows = f.files[file];
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint64_t a = derive_seed(o.seed, stream * 100000 + 2 * i) % 900 + 10;
            const std::uint64_t b = derive_seed(o.seed, stream * 100000 + 2 * i + 1) % 900 + 10;
            const std::string id = padded(prefix, i);
            const std::string gold = std::to_string(a * b);
            rows.push_back({id, {{"question", "A crate holds " + std::to_string(a) + " boxes of " + std::to_string(b) +
                                                  " pens each. How many pens are in the crate?"}},
                            {{"answer", gold}}});
            const std::string wrong = std::to_string(a * b + 1);
            add_answer_rules(rules, id, "generate_answer", marker, unit(o.seed ^ stream, i), o, [&](bool ok) {
                return " " + synth_demo_marker("gsm8k") + ". We multiply " + std::to_string(a) + " by " +
                       std::to_string(b) + ".\nAnswer: " + (ok ? gold : wrong);
            });
        }
    };
    make("gsm8k/train.jsonl", "gsm8k-train-", 1500, 1);
    make("gsm8k/test.jsonl", "gsm8k-test-", 1319, 2);
    f.script = MockScript(std::move(rules), std::nullopt);
    return f;
}

SynthFixture hotpotqa_fixture(const SynthOptions& o) {
    SynthFixture f;
    std::vector<MockRule> rules;
    const std::string marker = "in order to " + synth_demo_marker("hotpotqa");
    nlohmann::json passages = nlohmann::json::array();
    nlohmann::json queries = nlohmann::json::object();
    std::size_t entity = 0;
    auto make = [&](const std::string& file, std::string_view prefix, std::size_t n, std::uint64_t stream) {
        auto& rows = f.files[file];
        for (std::size_t i = 0; i < n; ++i, ++entity) {
            const std::string town = place_name(entity);
            const std::string river = place_name(entity + 100000);
            const std::string country = kCountries[derive_seed(o.seed, entity) % kCountries.size()];
            const std::string p1 = town + " | " + town + " is a town on the " + river + " river.";
            const std::string p2 = river + " | The " + river + " river flows through " + country + ".";
            passages.push_back(p1);
            passages.push_back(p2);
            queries[town] = nlohmann::json::array({p1});
            queries[river] = nlohmann::json::array({p2});
            const std::string id = padded(prefix, i);
            rows.push_back({id, {{"question", "Which country does the river at " + town + " flow through?"}},
                            {{"answer", country}}});
            rules.push_back({std::nullopt, "generate_query[0]", id, std::nullopt, std::nullopt,
                             " find the town. We look it up.\n\nSearch Query: " + town});
            rules.push_back({std::nullopt, "generate_query[1]", id, std::nullopt, std::nullopt,
                             " find the river. We follow the passage.\n\nSearch Query: " + river});
            const std::string wrong = kCountries[(derive_seed(o.seed, entity) + 1) % kCountries.size()];
            add_answer_rules(rules, id, "generate_answer", marker, unit(o.seed ^ stream, i), o, [&](bool ok) {
                return " " + synth_demo_marker("hotpotqa") + ". We read the passages.\n\nAnswer: " +
                       (ok ? country : wrong);
            });
        }
    };
    make("hotpotqa/train.jsonl", "hotpotqa-train-", 1500, 1);
    make("hotpotqa/validation.jsonl", "hotpotqa-val-", 1500, 2);
    f.script = MockScript(std::move(rules), std::nullopt);
    f.corpus = {{"passages", passages}, {"queries", queries}};
    return f;
}

SynthFixture iris_fixture(const SynthOptions& o, const std::filesystem::path& source) {
    if (source.empty()) throw InvalidArgument("iris fixture needs the iris.jsonl source");
    SynthFixture f;
    auto rows = load_examples(source);
    std::vector<MockRule> rules;
    const std::string marker = "in order to " + synth_demo_marker("iris");
    static const std::array<std::string, 3> species{"setosa", "versicolor", "virginica"};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::string gold = rows[i].metadata.at("answer");
        const auto pos = std::find(species.begin(), species.end(), gold) - species.begin();
        const std::string wrong = species[(pos + 1) % species.size()];
        add_answer_rules(rules, rows[i].id, "generate_answer", marker, unit(o.seed, i), o, [&](bool ok) {
            return " " + synth_demo_marker("iris") + ". We compare the petal sizes.\n\nAnswer: " + (ok ? gold : wrong);
        });
    }
    f.files["iris/iris.jsonl"] = std::move(rows);
    f.script = MockScript(std::move(rules), std::nullopt);
    return f;
}

} // namespace

std::string synth_demo_marker(std::string_view task) {
    if (task == "gsm8k") return "work out the product";
    if (task == "hotpotqa") return "answer from the passages";
    if (task == "iris") return "classify by measurement";
    throw InvalidArgument("unknown task `" + std::string(task) + "`");
}

SynthFixture make_synthetic(const SynthOptions& options, const std::filesystem::path& iris_source) {
    for (double r : {options.rates.base, options.rates.demos, options.rates.adapter, options.rates.both}) {
        if (r < 0.0 || r > 1.0) throw InvalidArgument("synthetic rates must lie in [0, 1]");
    }
    if (options.task == "gsm8k") return gsm8k_fixture(options);
    if (options.task == "hotpotqa") return hotpotqa_fixture(options);
    if (options.task == "iris") return iris_fixture(options, iris_source);
    throw InvalidArgument("unknown task `" + options.task + "`");
}

void write_synthetic(const std::filesystem::path& dir, const SynthFixture& fixture, const SynthOptions& options) {
    for (const auto& [rel, rows] : fixture.files) write_examples(dir / "data" / rel, rows);
    write_json_file(dir / "mock_lm.json", fixture.script.to_json());
    nlohmann::json config{{"data_root", "data"},
                          {"runs_dir", "runs"},
                          {"model", "mock-7b"},
                          {"lm", {{"kind", "mock"}, {"script", "mock_lm.json"}}},
                          {"retriever", {{"kind", "mock"}}},
                          {"trainer", {{"kind", "stub"}, {"poll_interval_ms", 0}}},
                          {"threads", 1}};
    if (!fixture.corpus.is_null()) {
        write_json_file(dir / "corpus.json", fixture.corpus);
        config["retriever"]["corpus"] = "corpus.json";
    }
    config["synthetic"] = {{"task", options.task}, {"seed", options.seed}, {"zero_correct", options.zero_correct}};
    write_json_file(dir / "config.json", config);
}

} // namespace lmopt
