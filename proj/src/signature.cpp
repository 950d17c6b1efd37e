#include "lmopt/signature.hpp"

#include "lmopt/error.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace lmopt {

namespace {

void check_fields(const std::vector<FieldSpec>& inputs, const std::vector<FieldSpec>& outputs) {
    if (inputs.empty()) throw InvalidArgument("signature needs at least one input field");
    if (outputs.empty()) throw InvalidArgument("signature needs at least one output field");
    std::set<std::string_view> seen;
    auto add = [&](const FieldSpec& f) {
        if (f.name.empty()) throw InvalidArgument("signature field with empty name");
        if (!seen.insert(f.name).second) throw InvalidArgument("duplicate signature field: " + f.name);
    };
    std::for_each(inputs.begin(), inputs.end(), add);
    std::for_each(outputs.begin(), outputs.end(), add);
    for (const auto& f : inputs) {
        if (f.name == kReasoningField) throw InvalidArgument("`reasoning` cannot be an input field");
    }
    for (std::size_t i = 1; i < outputs.size(); ++i) {
        if (outputs[i].name == kReasoningField) {
            throw InvalidArgument("`reasoning` must be the first output field");
        }
    }
}

std::string backtick_list(const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += ", ";
        out += '`' + names[i] + '`';
    }
    return out;
}

} // namespace

Signature::Signature(std::string instruction, std::vector<FieldSpec> inputs, std::vector<FieldSpec> outputs,
                     FieldSeparator separator)
    : instruction_(std::move(instruction)), inputs_(std::move(inputs)), outputs_(std::move(outputs)),
      separator_(separator) {
    check_fields(inputs_, outputs_);
}

Signature Signature::from_names(const std::vector<std::string>& inputs, const std::vector<std::string>& outputs) {
    std::vector<FieldSpec> in;
    std::vector<FieldSpec> out;
    for (const auto& n : inputs) in.push_back({n, {}});
    for (const auto& n : outputs) out.push_back({n, {}});
    std::string instruction =
        "Given the fields " + backtick_list(inputs) + ", produce the fields " + backtick_list(outputs) + ".";
    return Signature(std::move(instruction), std::move(in), std::move(out));
}

bool Signature::is_chain_of_thought() const noexcept {
    return outputs_.front().name == kReasoningField;
}

std::string_view Signature::separator() const noexcept {
    switch (separator_) {
    case FieldSeparator::SingleLine: return "\n";
    case FieldSeparator::BlankLine: return "\n\n";
    case FieldSeparator::Auto: break;
    }
    const bool multiline_desc =
        std::any_of(inputs_.begin(), inputs_.end(),
                    [](const FieldSpec& f) { return f.description.find('\n') != std::string::npos; }) ||
        std::any_of(outputs_.begin(), outputs_.end(),
                    [](const FieldSpec& f) { return f.description.find('\n') != std::string::npos; });
    return (inputs_.size() + outputs_.size() > 3 || multiline_desc) ? "\n\n" : "\n";
}

std::vector<std::string> Signature::field_names() const {
    std::vector<std::string> names;
    names.reserve(inputs_.size() + outputs_.size());
    for (const auto& f : inputs_) names.push_back(f.name);
    for (const auto& f : outputs_) names.push_back(f.name);
    return names;
}

bool Signature::has_input(std::string_view name) const {
    return std::any_of(inputs_.begin(), inputs_.end(), [&](const FieldSpec& f) { return f.name == name; });
}

bool Signature::has_output(std::string_view name) const {
    return std::any_of(outputs_.begin(), outputs_.end(), [&](const FieldSpec& f) { return f.name == name; });
}

Signature chain_of_thought(const Signature& sig) {
    if (sig.is_chain_of_thought()) return sig;
    std::string produce;
    for (std::size_t i = 0; i < sig.outputs().size(); ++i) {
        if (i) produce += ", ";
        produce += sig.outputs()[i].name;
    }
    std::vector<FieldSpec> outputs;
    outputs.push_back({std::string(kReasoningField),
                       std::string(kReasoningPrefix) + " ${produce the " + produce + "}. We ..."});
    outputs.insert(outputs.end(), sig.outputs().begin(), sig.outputs().end());
    return Signature(sig.instruction(), sig.inputs(), std::move(outputs), sig.separator_mode());
}

std::string title_case(std::string_view snake_name) {
    std::string out;
    out.reserve(snake_name.size());
    bool word_start = true;
    for (char c : snake_name) {
        if (c == '_') {
            out += ' ';
            word_start = true;
            continue;
        }
        out += word_start ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c;
        word_start = false;
    }
    return out;
}

void validate_demo(const Signature& sig, const Demo& demo) {
    const auto names = sig.field_names();
    for (const auto& name : names) {
        auto it = demo.fields.find(name);
        if (it == demo.fields.end()) throw InvalidArgument("demo is missing field `" + name + "`");
        if (it->second.empty()) throw InvalidArgument("demo field `" + name + "` is empty");
    }
    if (demo.fields.size() != names.size()) {
        for (const auto& [name, value] : demo.fields) {
            if (std::find(names.begin(), names.end(), name) == names.end()) {
                throw InvalidArgument("demo has field `" + name + "` not in the signature");
            }
        }
    }
}

bool is_valid_demo(const Signature& sig, const Demo& demo) noexcept {
    try {
        validate_demo(sig, demo);
        return true;
    } catch (...) {
        return false;
    }
}

} // namespace lmopt
