#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace lmopt {

// Field name -> value. Ordered so serialization and hashing are stable.
using FieldMap = std::map<std::string, std::string>;

inline constexpr std::string_view kReasoningField = "reasoning";
inline constexpr std::string_view kReasoningPrefix = "Let's think step by step in order to";

struct FieldSpec {
    std::string name;
    // Rendered in the format section; empty means "${name}".
    std::string description;
    friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

enum class FieldSeparator {
    Auto,        // blank line when the layout is "augmented", single newline otherwise
    SingleLine,  // "\n"
    BlankLine,   // "\n\n"
};

// Declarative input/output contract of one language module.
class Signature {
public:
    Signature(std::string instruction, std::vector<FieldSpec> inputs, std::vector<FieldSpec> outputs,
              FieldSeparator separator = FieldSeparator::Auto);

    // "Given the fields `a`, `b`, produce the fields `c`." instruction.
    static Signature from_names(const std::vector<std::string>& inputs,
                                const std::vector<std::string>& outputs);

    const std::string& instruction() const noexcept { return instruction_; }
    const std::vector<FieldSpec>& inputs() const noexcept { return inputs_; }
    const std::vector<FieldSpec>& outputs() const noexcept { return outputs_; }
    FieldSeparator separator_mode() const noexcept { return separator_; }

    bool is_chain_of_thought() const noexcept;
    // Resolved field separator ("\n" or "\n\n").
    std::string_view separator() const noexcept;
    std::vector<std::string> field_names() const;
    bool has_input(std::string_view name) const;
    bool has_output(std::string_view name) const;

    friend bool operator==(const Signature&, const Signature&) = default;

private:
    std::string instruction_;
    std::vector<FieldSpec> inputs_;
    std::vector<FieldSpec> outputs_;
    FieldSeparator separator_;
};

// Prepends the `reasoning` output field. Its format placeholder names the
// remaining outputs: "Let's think step by step in order to ${produce the answer}. We ...".
Signature chain_of_thought(const Signature& sig);

// `search_query` -> `Search Query`.
std::string title_case(std::string_view snake_name);

// One module-level input/output example inserted into a prompt.
struct Demo {
    FieldMap fields;
    friend bool operator==(const Demo&, const Demo&) = default;
};

// Throws InvalidArgument unless the demo covers exactly the signature's
// fields with non-empty values.
void validate_demo(const Signature& sig, const Demo& demo);
bool is_valid_demo(const Signature& sig, const Demo& demo) noexcept;

} // namespace lmopt
