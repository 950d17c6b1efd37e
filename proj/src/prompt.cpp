#include "lmopt/prompt.hpp"

#include "lmopt/error.hpp"

namespace lmopt {

namespace {

constexpr std::string_view kWhitespace = " \t\r\n";

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(kWhitespace);
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(kWhitespace);
    return s.substr(first, last - first + 1);
}

std::string_view ltrim(std::string_view s) {
    const auto first = s.find_first_not_of(kWhitespace);
    return first == std::string_view::npos ? std::string_view{} : s.substr(first);
}

bool starts_with(std::string_view s, std::string_view prefix) {
    return s.substr(0, prefix.size()) == prefix;
}

std::string marker(const FieldSpec& f) { return title_case(f.name) + ":"; }

// A filled field as it appears in a demo or live block.
std::string filled_line(const FieldSpec& f, std::string_view value) {
    if (f.name == kReasoningField) {
        return "Reasoning: " + std::string(kReasoningPrefix) + " " + std::string(value);
    }
    if (value.find('\n') != std::string_view::npos) return marker(f) + "\n" + std::string(value);
    return marker(f) + " " + std::string(value);
}

std::string cue(const FieldSpec& f) {
    if (f.name == kReasoningField) return "Reasoning: " + std::string(kReasoningPrefix);
    return marker(f);
}

const std::string& require(const FieldMap& map, const std::string& name, std::string_view what) {
    auto it = map.find(name);
    if (it == map.end()) throw InvalidArgument("missing " + std::string(what) + " field `" + name + "`");
    return it->second;
}

// Position of `text_marker` at a line start (optionally indented) at or after `from`.
std::size_t find_marker(std::string_view text, std::string_view text_marker, std::size_t from) {
    for (auto pos = text.find(text_marker, from); pos != std::string_view::npos;
         pos = text.find(text_marker, pos + 1)) {
        std::size_t line_start = pos;
        while (line_start > 0 && (text[line_start - 1] == ' ' || text[line_start - 1] == '\t')) --line_start;
        if (line_start == 0 || text[line_start - 1] == '\n') return pos;
    }
    return std::string_view::npos;
}

std::string_view strip_terminators(std::string_view text) {
    text = trim(text);
    while (text.size() >= 3 && text.substr(text.size() - 3) == "---") {
        text = trim(text.substr(0, text.size() - 3));
    }
    return text;
}

} // namespace

RenderedPrompt render_prompt(const Signature& sig, std::span<const Demo> demos, const FieldMap& inputs,
                             std::string_view module_label) {
    const auto sep = sig.separator();

    std::string text = sig.instruction();
    text += kBlockSeparator;
    text += "Follow the following format.\n\n";
    bool first = true;
    auto append_field = [&](std::string line) {
        if (!first) text += sep;
        text += line;
        first = false;
    };
    for (const auto& f : sig.inputs()) append_field(marker(f) + " " + (f.description.empty() ? "${" + f.name + "}" : f.description));
    for (const auto& f : sig.outputs()) append_field(marker(f) + " " + (f.description.empty() ? "${" + f.name + "}" : f.description));

    for (const auto& demo : demos) {
        validate_demo(sig, demo);
        text += kBlockSeparator;
        first = true;
        for (const auto& f : sig.inputs()) append_field(filled_line(f, demo.fields.at(f.name)));
        for (const auto& f : sig.outputs()) append_field(filled_line(f, demo.fields.at(f.name)));
    }

    text += kBlockSeparator;
    first = true;
    for (const auto& f : sig.inputs()) append_field(filled_line(f, require(inputs, f.name, "input")));
    append_field(cue(sig.outputs().front()));

    return RenderedPrompt{std::move(text), std::string(module_label), demos.size()};
}

FieldMap parse_completion(const Signature& sig, std::string_view completion, std::string_view module_label) {
    const std::string label(module_label);
    const std::string_view text = strip_terminators(completion);
    if (text.empty()) throw ParseError(label, "empty completion");

    const auto& outputs = sig.outputs();
    std::vector<std::size_t> begin(outputs.size(), 0);
    std::vector<std::size_t> end(outputs.size(), text.size());

    // Models sometimes restate the cue; skip it when present.
    const std::string_view head = ltrim(text);
    std::size_t first_begin = text.size() - head.size();
    const std::string first_cue = cue(outputs.front());
    if (starts_with(head, first_cue)) {
        first_begin += first_cue.size();
    } else if (outputs.front().name == kReasoningField && starts_with(head, kReasoningPrefix)) {
        first_begin += kReasoningPrefix.size();
    }
    begin[0] = first_begin;

    std::size_t cursor = first_begin;
    for (std::size_t i = 1; i < outputs.size(); ++i) {
        const std::string m = marker(outputs[i]);
        // The first value may be empty, in which case the marker sits at offset 0.
        const auto pos = find_marker(text, m, i == 1 ? std::min(cursor, first_begin) : cursor);
        if (pos == std::string_view::npos) throw ParseError(label, "completion lacks `" + m + "`");
        end[i - 1] = pos;
        begin[i] = pos + m.size();
        cursor = begin[i];
    }

    FieldMap out;
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        const auto b = std::min(begin[i], end[i]);
        out[outputs[i].name] = std::string(trim(text.substr(b, end[i] - b)));
    }
    return out;
}

std::string render_completion(const Signature& sig, const FieldMap& outputs) {
    const auto sep = sig.separator();
    const auto& fields = sig.outputs();
    const std::string& head = require(outputs, fields.front().name, "output");
    std::string text;
    if (fields.front().name != kReasoningField && head.find('\n') != std::string::npos) {
        text = "\n" + head;
    } else {
        text = " " + head;
    }
    for (std::size_t i = 1; i < fields.size(); ++i) {
        text += sep;
        text += filled_line(fields[i], require(outputs, fields[i].name, "output"));
    }
    text += kCompletionTerminator;
    return text;
}

std::string render_context(std::span<const std::string> passages) {
    if (passages.empty()) return "N/A";
    std::string out;
    for (std::size_t i = 0; i < passages.size(); ++i) {
        if (i) out += '\n';
        out += "[" + std::to_string(i + 1) + "] «" + passages[i] + "»";
    }
    return out;
}

} // namespace lmopt
