#pragma once

#include "lmopt/signature.hpp"

#include <span>
#include <string>
#include <string_view>

namespace lmopt {

inline constexpr std::string_view kBlockSeparator = "\n\n---\n\n";
// Appended to fine-tuning completions; also the default generation stop string.
inline constexpr std::string_view kCompletionTerminator = "\n\n---";

struct RenderedPrompt {
    std::string text;
    std::string module_label;
    std::size_t demo_count = 0;
};

// Instruction, format section, demo blocks and the live block. The text ends
// at the cue of the first output field, so a completion starts with its value.
RenderedPrompt render_prompt(const Signature& sig, std::span<const Demo> demos, const FieldMap& inputs,
                             std::string_view module_label = {});

// Inverse of the prompt tail: the first output value is everything before the
// second field's marker; later values are located by `Title Case:` markers at
// line starts. Throws ParseError when a marker is missing.
FieldMap parse_completion(const Signature& sig, std::string_view completion,
                          std::string_view module_label = {});

// Output fields as the model is expected to produce them after the cue,
// terminated by kCompletionTerminator.
std::string render_completion(const Signature& sig, const FieldMap& outputs);

// "[1] «a»\n[2] «b»", or "N/A" for no passages.
std::string render_context(std::span<const std::string> passages);

} // namespace lmopt
