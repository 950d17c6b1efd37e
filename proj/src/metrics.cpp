#include "lmopt/metrics.hpp"

#include <cctype>

namespace lmopt {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

// Length of a numeric token starting at text[pos] (a digit), 0 if none.
// Grouping commas must be followed by exactly three digits.
std::size_t scan_number(std::string_view text, std::size_t pos) {
    std::size_t i = pos;
    while (i < text.size() && is_digit(text[i])) ++i;
    const std::size_t lead = i - pos;
    if (lead >= 1 && lead <= 3) {
        while (i + 3 < text.size() && text[i] == ',' && is_digit(text[i + 1]) && is_digit(text[i + 2]) &&
               is_digit(text[i + 3]) && (i + 4 >= text.size() || !is_digit(text[i + 4]))) {
            i += 4;
        }
    }
    if (i + 1 < text.size() && text[i] == '.' && is_digit(text[i + 1])) {
        ++i;
        while (i < text.size() && is_digit(text[i])) ++i;
    }
    return i - pos;
}

} // namespace

std::string normalize_answer(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (unsigned char c : text) {
        if (std::ispunct(c)) continue;
        if (std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out += ' ';
            pending_space = false;
        }
        out += static_cast<char>(std::tolower(c));
    }
    return out;
}

double exact_match(std::string_view prediction, std::string_view gold) {
    return normalize_answer(prediction) == normalize_answer(gold) ? 1.0 : 0.0;
}

std::optional<std::string> canonical_number(std::string_view token) {
    bool negative = false;
    if (!token.empty() && (token.front() == '-' || token.front() == '+')) {
        negative = token.front() == '-';
        token.remove_prefix(1);
    }
    if (token.empty() || !is_digit(token.front()) || scan_number(token, 0) != token.size()) return std::nullopt;

    std::string integer;
    std::string fraction;
    const auto dot = token.find('.');
    for (char c : token.substr(0, dot)) {
        if (c != ',') integer += c;
    }
    if (dot != std::string_view::npos) fraction = std::string(token.substr(dot + 1));

    integer.erase(0, std::min(integer.find_first_not_of('0'), integer.size() - 1));
    while (!fraction.empty() && fraction.back() == '0') fraction.pop_back();

    std::string out = integer;
    if (!fraction.empty()) out += "." + fraction;
    if (negative && out != "0") out.insert(out.begin(), '-');
    return out;
}

std::optional<std::string> extract_last_number(std::string_view text) {
    std::optional<std::string> last;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!is_digit(text[i]) || (i > 0 && (is_digit(text[i - 1]) || text[i - 1] == '.'))) {
            ++i;
            continue;
        }
        const std::size_t len = scan_number(text, i);
        std::size_t start = i;
        if (i > 0 && (text[i - 1] == '-' || text[i - 1] == '+') && (i < 2 || !is_alnum(text[i - 2]))) {
            start = i - 1;
        }
        last = canonical_number(text.substr(start, i + len - start));
        i += len;
    }
    return last;
}

double gsm8k_score(std::string_view response, std::string_view gold) {
    const auto gold_number = canonical_number(gold);
    if (!gold_number) return 0.0;
    // First non-empty line of the answer text.
    std::size_t begin = response.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos) return 0.0;
    auto line = response.substr(begin, response.find('\n', begin) - begin);
    const auto predicted = extract_last_number(line);
    return predicted && *predicted == *gold_number ? 1.0 : 0.0;
}

} // namespace lmopt
