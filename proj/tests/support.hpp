#pragma once

#include "lmopt/lm.hpp"
#include "lmopt/program.hpp"
#include "lmopt/retriever.hpp"
#include "lmopt/trace_store.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>

namespace test {

inline std::filesystem::path source_dir() { return LMOPT_SOURCE_DIR; }

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Fresh directory removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("lmopt-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline lmopt::ExecutionEnv mock_env(lmopt::MockScript script, std::shared_ptr<const lmopt::Retriever> retriever = {}) {
    return {std::make_shared<lmopt::MockLm>(std::move(script)), std::move(retriever),
            lmopt::default_inference_params(), 1};
}

inline lmopt::MockRule rule(std::string completion) {
    lmopt::MockRule r;
    r.completion = std::move(completion);
    return r;
}

inline lmopt::MockRule id_rule(std::string example_id, std::string completion) {
    auto r = rule(std::move(completion));
    r.example_id = std::move(example_id);
    return r;
}

inline lmopt::ModelRef base_model() { return {"base-7b", std::nullopt, std::nullopt}; }

inline std::string random_word(std::mt19937_64& rng) {
    static const std::string alphabet = "abcdefghijklmnopqrstuvwxyzABCDEFG0123456789";
    std::uniform_int_distribution<std::size_t> len(1, 8), ch(0, alphabet.size() - 1);
    std::string w;
    for (std::size_t i = 0, n = len(rng); i < n; ++i) w += alphabet[ch(rng)];
    return w;
}

inline std::string random_text(std::mt19937_64& rng, std::size_t max_words = 12) {
    std::uniform_int_distribution<std::size_t> n(1, max_words);
    std::uniform_int_distribution<int> punct(0, 9);
    std::string s;
    for (std::size_t i = 0, k = n(rng); i < k; ++i) {
        if (i) s += ' ';
        s += random_word(rng);
        if (punct(rng) == 0) s += ',';
        if (punct(rng) == 1) s += '.';
    }
    return s;
}

} // namespace test
