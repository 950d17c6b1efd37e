#include "support.hpp"

#include "lmopt/error.hpp"
#include "lmopt/prompt.hpp"
#include "lmopt/signature.hpp"
#include "lmopt/tasks.hpp"
#include "lmopt/trace_store.hpp"

#include <doctest.h>

using namespace lmopt;

namespace {

struct GoldenCase {
    std::string task;
    std::string module;
};

const std::vector<GoldenCase> kGoldens{{"hotpotqa", "generate_query[0]"},
                                       {"hotpotqa", "generate_query[1]"},
                                       {"hotpotqa", "generate_answer"},
                                       {"gsm8k", "generate_answer"},
                                       {"iris", "generate_answer"}};

LmProgram program_for(const std::string& task) { return task_spec(task).make_program(test::base_model()); }

FieldMap golden_inputs(const GoldenCase& g) {
    const auto doc = read_json_file(test::source_dir() / "goldens" / g.task / (g.module + ".inputs.json"));
    FieldMap inputs = doc.at("inputs").get<FieldMap>();
    if (doc.contains("passages")) inputs["context"] = render_context(doc.at("passages").get<std::vector<std::string>>());
    return inputs;
}

FieldMap random_outputs(const Signature& sig, std::mt19937_64& rng) {
    FieldMap out;
    std::uniform_int_distribution<int> multiline(0, 3);
    for (const auto& f : sig.outputs()) {
        std::string v = test::random_text(rng);
        if (multiline(rng) == 0) v += "\n" + test::random_text(rng);
        out[f.name] = v;
    }
    return out;
}

} // namespace

TEST_CASE("vanilla prompts match the goldens byte for byte") {
    for (const auto& g : kGoldens) {
        CAPTURE(g.module);
        const auto program = program_for(g.task);
        const auto& m = program.module(g.module);
        const auto rendered = render_prompt(m.signature, m.demos, golden_inputs(g), m.label);
        CHECK(rendered.text == test::read_file(test::source_dir() / "goldens" / g.task / (g.module + ".txt")));
        CHECK(rendered.demo_count == 0);
        CHECK(rendered.module_label == g.module);
    }
}

TEST_CASE("golden completions parse into their fields") {
    const auto gsm = program_for("gsm8k");
    const auto completion = test::read_file(test::source_dir() / "goldens/gsm8k/generate_answer.completion.txt");
    const auto out = parse_completion(gsm.module("generate_answer").signature, completion);
    CHECK(out.at("answer") == "Isaiah can type 1200 more words than Micah in an hour.");
    CHECK(out.at("reasoning").rfind("find out how many more words", 0) == 0);

    const auto hotpot = program_for("hotpotqa");
    const auto q0 = parse_completion(hotpot.module("generate_query[0]").signature,
                                     test::read_file(test::source_dir() / "goldens/hotpotqa/generate_query[0].completion.txt"));
    CHECK(q0.at("search_query") == "North American deer ear surface area Foster's rule smallest species");
    CHECK(q0.at("reasoning").find("4. Therefore") != std::string::npos);
    const auto ans = parse_completion(hotpot.module("generate_answer").signature,
                                      test::read_file(test::source_dir() / "goldens/hotpotqa/generate_answer.completion.txt"));
    CHECK(ans.at("answer") == "Key deer");

    const auto iris = program_for("iris");
    const auto iris_out = parse_completion(iris.module("generate_answer").signature,
                                           test::read_file(test::source_dir() / "goldens/iris/generate_answer.completion.txt"));
    CHECK(iris_out.at("answer") == "setosa.");
}

TEST_CASE("separator follows the field layout") {
    CHECK(gsm8k_signature().separator() == "\n");
    CHECK(hotpotqa_answer_signature().separator() == "\n\n");
    CHECK(iris_signature().separator() == "\n\n");
    const Signature forced("Do it.", {{"a", {}}}, {{"b", {}}}, FieldSeparator::BlankLine);
    CHECK(forced.separator() == "\n\n");
}

TEST_CASE("signature validation") {
    CHECK_THROWS_AS(Signature("x", {}, {{"b", {}}}), InvalidArgument);
    CHECK_THROWS_AS(Signature("x", {{"a", {}}}, {}), InvalidArgument);
    CHECK_THROWS_AS(Signature("x", {{"a", {}}}, {{"a", {}}}), InvalidArgument);
    CHECK_THROWS_AS(Signature("x", {{"a", {}}}, {{"b", {}}, {"reasoning", {}}}), InvalidArgument);
    const auto cot = chain_of_thought(Signature::from_names({"question"}, {"answer"}));
    CHECK(cot.is_chain_of_thought());
    CHECK(cot.outputs().front().name == "reasoning");
    CHECK(cot.instruction() == "Given the fields `question`, produce the fields `answer`.");
    CHECK(title_case("search_query") == "Search Query");
}

TEST_CASE("render_context") {
    CHECK(render_context({}) == "N/A");
    const std::vector<std::string> two{"a | first", "b | second"};
    CHECK(render_context(two) == "[1] «a | first»\n[2] «b | second»");
}

TEST_CASE("demo validation") {
    const auto sig = gsm8k_signature();
    CHECK(is_valid_demo(sig, Demo{{{"question", "q"}, {"reasoning", "r"}, {"answer", "a"}}}));
    CHECK_FALSE(is_valid_demo(sig, Demo{{{"question", "q"}, {"answer", "a"}}}));
    CHECK_FALSE(is_valid_demo(sig, Demo{{{"question", "q"}, {"reasoning", ""}, {"answer", "a"}}}));
    CHECK_FALSE(is_valid_demo(sig, Demo{{{"question", "q"}, {"reasoning", "r"}, {"answer", "a"}, {"x", "y"}}}));
    CHECK_THROWS_AS(validate_demo(sig, Demo{{{"question", "q"}}}), InvalidArgument);
}

TEST_CASE("demos render between the format block and the live block") {
    const auto sig = gsm8k_signature();
    const std::vector<Demo> demos{Demo{{{"question", "What is 2+2?"}, {"reasoning", "add. We get 4."}, {"answer", "4"}}}};
    const auto p = render_prompt(sig, demos, {{"question", "What is 3+3?"}});
    CHECK(p.demo_count == 1);
    CHECK(p.text.find("---\n\nQuestion: What is 2+2?\nReasoning: Let's think step by step in order to add. We get 4.\n"
                      "Answer: 4\n\n---\n\nQuestion: What is 3+3?\nReasoning: Let's think step by step in order to") !=
          std::string::npos);
    CHECK(p.text.ends_with("in order to"));
}

TEST_CASE("parse errors name the module") {
    const auto sig = gsm8k_signature();
    CHECK_THROWS_AS(parse_completion(sig, "", "m"), ParseError);
    try {
        parse_completion(sig, "thinking only, no answer marker", "generate_answer");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.module_label() == "generate_answer");
    }
}

TEST_CASE("parse tolerates a restated cue and trailing separators") {
    const auto sig = gsm8k_signature();
    const auto out = parse_completion(sig, "Reasoning: Let's think step by step in order to add. We get 4.\nAnswer: 4\n\n---");
    CHECK(out.at("reasoning") == "add. We get 4.");
    CHECK(out.at("answer") == "4");
}

TEST_CASE("render_completion round trips over random outputs") {
    std::mt19937_64 rng(7);
    const std::vector<Signature> sigs{hotpotqa_query_signature(), hotpotqa_answer_signature(), gsm8k_signature(),
                                      iris_signature()};
    for (int i = 0; i < 300; ++i) {
        const auto& sig = sigs[i % sigs.size()];
        const auto outputs = random_outputs(sig, rng);
        const auto completion = render_completion(sig, outputs);
        CHECK(completion.ends_with(kCompletionTerminator));
        CHECK(parse_completion(sig, completion) == outputs);
    }
}

TEST_CASE("a rendered demo's output block parses back to the demo outputs") {
    std::mt19937_64 rng(11);
    const auto sig = hotpotqa_answer_signature();
    for (int i = 0; i < 50; ++i) {
        const auto outputs = random_outputs(sig, rng);
        Demo demo;
        demo.fields = outputs;
        demo.fields["context"] = test::random_text(rng);
        demo.fields["question"] = test::random_text(rng);
        const std::vector<Demo> demos{demo};
        const auto text = render_prompt(sig, demos, {{"context", "N/A"}, {"question", "q"}}).text;
        // Blocks: instruction, format, demo, live.
        std::vector<std::string> blocks;
        std::size_t pos = 0;
        for (std::size_t next; (next = text.find(kBlockSeparator, pos)) != std::string::npos;
             pos = next + kBlockSeparator.size()) {
            blocks.push_back(text.substr(pos, next - pos));
        }
        REQUIRE(blocks.size() == 3);
        const auto& block = blocks[2];
        const auto cue = block.find(kReasoningPrefix);
        REQUIRE(cue != std::string::npos);
        CHECK(parse_completion(sig, block.substr(cue + kReasoningPrefix.size())) == outputs);
    }
}
