#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

namespace acceptance {

inline constexpr std::optional<double> kNone = std::nullopt;

struct SeedRow {
    std::string_view task;
    std::string_view model;
    std::string_view strategy;
    std::array<std::optional<double>, 3> runs;
    std::optional<double> listed_average;
};

struct AverageCell {
    std::string_view task;
    std::string_view model;
    std::string_view strategy;
    std::optional<double> value;
};

// Three seeds per (task, model, strategy), with the average printed beside them.
inline const std::vector<SeedRow>& seed_rows() {
    static const std::vector<SeedRow> rows{
        {"hotpotqa", "mistral-7b-instruct-v0.2", "vanilla", {17.2, 17.2, 17.2}, 17.2},
        {"hotpotqa", "llama-2-7b-chat", "vanilla", {13.2, 13.2, 13.2}, 13.2},
        {"hotpotqa", "llama-3-8b-instruct", "vanilla", {31.6, 31.6, 31.6}, 31.6},
        {"hotpotqa", "mistral-7b-instruct-v0.2", "p", {32.7, 34.7, 34.0}, 33.8},
        {"hotpotqa", "llama-2-7b-chat", "p", {33.3, 33.3, 33.4}, 33.3},
        {"hotpotqa", "llama-3-8b-instruct", "p", {45.7, 47.4, 47.5}, 46.9},
        {"hotpotqa", "mistral-7b-instruct-v0.2", "w", {22.0, 23.1, 23.5}, 22.9},
        {"hotpotqa", "llama-2-7b-chat", "w", {12.4, 11.8, 12.3}, 12.2},
        {"hotpotqa", "llama-3-8b-instruct", "w", {34.9, 35.3, 34.3}, 34.8},
        {"hotpotqa", "mistral-7b-instruct-v0.2", "p->p", {31.7, 36.0, 33.7}, 33.8},
        {"hotpotqa", "llama-2-7b-chat", "p->p", {31.7, 33.1, 33.1}, 32.6},
        {"hotpotqa", "llama-3-8b-instruct", "p->p", {47.3, 45.4, 46.7}, 46.5},
        {"hotpotqa", "mistral-7b-instruct-v0.2", "w->w", {24.1, 23.9, 23.9}, 24.0},
        {"hotpotqa", "llama-2-7b-chat", "w->w", {12.4, 13.5, 13.3}, 13.0},
        {"hotpotqa", "llama-3-8b-instruct", "w->w", {35.1, 34.1, 34.1}, 34.4},
        {"hotpotqa", "mistral-7b-instruct-v0.2", "p->w", {34.9, 39.1, 34.9}, 36.3},
        {"hotpotqa", "llama-2-7b-chat", "p->w", {32.8, 32.3, 33.1}, 32.7},
        {"hotpotqa", "llama-3-8b-instruct", "p->w", {40.6, 42.1, 45.7}, 42.8},
        {"hotpotqa", "mistral-7b-instruct-v0.2", "w->p", {29.3, 33.8, 35.8}, 33.0},
        {"hotpotqa", "llama-2-7b-chat", "w->p", {36.0, 33.4, 33.1}, 34.2},
        {"hotpotqa", "llama-3-8b-instruct", "w->p", {44.5, 40.9, 45.3}, 43.6},
        {"hotpotqa", "mistral-7b-instruct-v0.2", "p->w->p", {34.9, 40.7, 37.2}, 37.6},
        {"hotpotqa", "llama-2-7b-chat", "p->w->p", {34.7, 34.5, 35.3}, 34.8},
        {"hotpotqa", "llama-3-8b-instruct", "p->w->p", {46.5, 47.1, 46.4}, 46.7},
        {"gsm8k", "mistral-7b-instruct-v0.2", "vanilla", {40.3, 40.3, 40.3}, 40.3},
        {"gsm8k", "llama-2-7b-chat", "vanilla", {24.0, 24.0, 24.0}, 24.0},
        {"gsm8k", "llama-3-8b-instruct", "vanilla", {72.7, 72.7, 72.7}, 72.7},
        {"gsm8k", "mistral-7b-instruct-v0.2", "p", {45.0, 47.2, 47.1}, 46.4},
        {"gsm8k", "llama-2-7b-chat", "p", {27.3, 25.1, 25.5}, 26.0},
        {"gsm8k", "llama-3-8b-instruct", "p", {76.9, 77.9, 78.9}, 77.9},
        {"gsm8k", "mistral-7b-instruct-v0.2", "w", {40.8, 40.0, 41.2}, 40.7},
        {"gsm8k", "llama-2-7b-chat", "w", {23.7, 24.2, 24.0}, 24.0},
        {"gsm8k", "llama-3-8b-instruct", "w", {75.7, 74.8, 74.8}, 75.1},
        {"gsm8k", "mistral-7b-instruct-v0.2", "p->p", {46.3, 47.2, 49.6}, 47.7},
        {"gsm8k", "llama-2-7b-chat", "p->p", {28.4, 24.0, 21.8}, 24.7},
        {"gsm8k", "llama-3-8b-instruct", "p->p", {76.5, 80.1, 76.1}, 77.6},
        {"gsm8k", "mistral-7b-instruct-v0.2", "w->w", {42.9, 41.8, 43.8}, 42.8},
        {"gsm8k", "llama-2-7b-chat", "w->w", {24.0, 24.3, 24.0}, 24.1},
        {"gsm8k", "llama-3-8b-instruct", "w->w", {52.2, 36.6, 43.4}, 44.0},
        {"gsm8k", "mistral-7b-instruct-v0.2", "p->w", {46.4, 47.3, 48.2}, 47.3},
        {"gsm8k", "llama-2-7b-chat", "p->w", {27.8, 28.1, 25.9}, 27.3},
        {"gsm8k", "llama-3-8b-instruct", "p->w", {77.6, 75.4, 79.8}, 77.6},
        {"gsm8k", "mistral-7b-instruct-v0.2", "w->p", {50.1, 46.0, 48.8}, 48.3},
        {"gsm8k", "llama-2-7b-chat", "w->p", {26.8, 26.1, 27.0}, 26.6},
        {"gsm8k", "llama-3-8b-instruct", "w->p", {78.5, 79.8, 78.4}, 78.9},
        {"gsm8k", "mistral-7b-instruct-v0.2", "p->w->p", {44.9, 48.5, 47.1}, 46.8},
        {"gsm8k", "llama-2-7b-chat", "p->w->p", {27.1, 25.9, 25.9}, 26.3},
        {"gsm8k", "llama-3-8b-instruct", "p->w->p", {77.6, 75.4, 77.8}, 77.0},
        {"iris", "mistral-7b-instruct-v0.2", "vanilla", {26.0, 26.0, 26.0}, 26.0},
        {"iris", "llama-2-7b-chat", "vanilla", {0.0, 0.0, 0.0}, 0.0},
        {"iris", "llama-3-8b-instruct", "vanilla", {48.0, 48.0, 48.0}, 48.0},
        {"iris", "mistral-7b-instruct-v0.2", "p", {52.0, 54.0, 66.0}, 57.3},
        {"iris", "llama-2-7b-chat", "p", {44.0, 68.0, 58.0}, 56.7},
        {"iris", "llama-3-8b-instruct", "p", {62.0, 96.0, 80.0}, 79.3},
        {"iris", "mistral-7b-instruct-v0.2", "w", {24.0, 34.0, 30.0}, 29.3},
        {"iris", "llama-2-7b-chat", "w", {kNone, kNone, kNone}, kNone},
        {"iris", "llama-3-8b-instruct", "w", {38.0, 40.0, 34.0}, 37.3},
        {"iris", "mistral-7b-instruct-v0.2", "p->p", {48.0, 64.0, 66.0}, 59.3},
        {"iris", "llama-2-7b-chat", "p->p", {66.0, 70.0, 56.0}, 64.0},
        {"iris", "llama-3-8b-instruct", "p->p", {70.0, 94.0, 82.0}, 82.0},
        {"iris", "mistral-7b-instruct-v0.2", "w->w", {40.0, 36.0, 38.0}, 38.0},
        {"iris", "llama-2-7b-chat", "w->w", {kNone, kNone, kNone}, kNone},
        {"iris", "llama-3-8b-instruct", "w->w", {44.0, 36.0, 38.0}, 39.3},
        {"iris", "mistral-7b-instruct-v0.2", "p->w", {32.0, 26.0, 34.0}, 30.7},
        {"iris", "llama-2-7b-chat", "p->w", {30.0, 26.0, 24.0}, 26.7},
        {"iris", "llama-3-8b-instruct", "p->w", {50.0, 42.0, 40.0}, 44.0},
        {"iris", "mistral-7b-instruct-v0.2", "w->p", {80.0, 54.0, 66.0}, 66.7},
        {"iris", "llama-2-7b-chat", "w->p", {kNone, kNone, kNone}, kNone},
        {"iris", "llama-3-8b-instruct", "w->p", {78.0, 78.0, 80.0}, 78.7},
        {"iris", "mistral-7b-instruct-v0.2", "p->w->p", {52.0, 44.0, 62.0}, 52.7},
        {"iris", "llama-2-7b-chat", "p->w->p", {62.0, 70.0, 64.0}, 65.3},
        {"iris", "llama-3-8b-instruct", "p->w->p", {74.0, 80.0, 84.0}, 79.3},
    };
    return rows;
}

// The averaged results grid.
inline const std::vector<AverageCell>& average_cells() {
    static const std::vector<AverageCell> cells{
        {"hotpotqa", "mistral-7b-instruct-v0.2", "vanilla", 17.2},
        {"gsm8k", "mistral-7b-instruct-v0.2", "vanilla", 40.3},
        {"iris", "mistral-7b-instruct-v0.2", "vanilla", 26.0},
        {"hotpotqa", "llama-2-7b-chat", "vanilla", 13.2},
        {"gsm8k", "llama-2-7b-chat", "vanilla", 24.0},
        {"iris", "llama-2-7b-chat", "vanilla", 0.0},
        {"hotpotqa", "llama-3-8b-instruct", "vanilla", 31.6},
        {"gsm8k", "llama-3-8b-instruct", "vanilla", 72.7},
        {"iris", "llama-3-8b-instruct", "vanilla", 48.0},
        {"hotpotqa", "mistral-7b-instruct-v0.2", "p", 33.8},
        {"gsm8k", "mistral-7b-instruct-v0.2", "p", 46.4},
        {"iris", "mistral-7b-instruct-v0.2", "p", 57.3},
        {"hotpotqa", "llama-2-7b-chat", "p", 33.3},
        {"gsm8k", "llama-2-7b-chat", "p", 26.0},
        {"iris", "llama-2-7b-chat", "p", 56.7},
        {"hotpotqa", "llama-3-8b-instruct", "p", 46.9},
        {"gsm8k", "llama-3-8b-instruct", "p", 77.9},
        {"iris", "llama-3-8b-instruct", "p", 79.3},
        {"hotpotqa", "mistral-7b-instruct-v0.2", "w", 22.9},
        {"gsm8k", "mistral-7b-instruct-v0.2", "w", 40.7},
        {"iris", "mistral-7b-instruct-v0.2", "w", 29.3},
        {"hotpotqa", "llama-2-7b-chat", "w", 12.2},
        {"gsm8k", "llama-2-7b-chat", "w", 24.0},
        {"iris", "llama-2-7b-chat", "w", kNone},
        {"hotpotqa", "llama-3-8b-instruct", "w", 34.8},
        {"gsm8k", "llama-3-8b-instruct", "w", 75.1},
        {"iris", "llama-3-8b-instruct", "w", 37.3},
        {"hotpotqa", "mistral-7b-instruct-v0.2", "p->p", 33.8},
        {"gsm8k", "mistral-7b-instruct-v0.2", "p->p", 47.7},
        {"iris", "mistral-7b-instruct-v0.2", "p->p", 59.3},
        {"hotpotqa", "llama-2-7b-chat", "p->p", 32.6},
        {"gsm8k", "llama-2-7b-chat", "p->p", 24.7},
        {"iris", "llama-2-7b-chat", "p->p", 64.0},
        {"hotpotqa", "llama-3-8b-instruct", "p->p", 46.5},
        {"gsm8k", "llama-3-8b-instruct", "p->p", 77.6},
        {"iris", "llama-3-8b-instruct", "p->p", 82.0},
        {"hotpotqa", "mistral-7b-instruct-v0.2", "w->w", 24.0},
        {"gsm8k", "mistral-7b-instruct-v0.2", "w->w", 42.8},
        {"iris", "mistral-7b-instruct-v0.2", "w->w", 38.0},
        {"hotpotqa", "llama-2-7b-chat", "w->w", 13.0},
        {"gsm8k", "llama-2-7b-chat", "w->w", 24.1},
        {"iris", "llama-2-7b-chat", "w->w", kNone},
        {"hotpotqa", "llama-3-8b-instruct", "w->w", 34.4},
        {"gsm8k", "llama-3-8b-instruct", "w->w", 44.1},
        {"iris", "llama-3-8b-instruct", "w->w", 39.3},
        {"hotpotqa", "mistral-7b-instruct-v0.2", "p->w", 36.3},
        {"gsm8k", "mistral-7b-instruct-v0.2", "p->w", 47.3},
        {"iris", "mistral-7b-instruct-v0.2", "p->w", 30.7},
        {"hotpotqa", "llama-2-7b-chat", "p->w", 32.7},
        {"gsm8k", "llama-2-7b-chat", "p->w", 27.3},
        {"iris", "llama-2-7b-chat", "p->w", 26.7},
        {"hotpotqa", "llama-3-8b-instruct", "p->w", 42.8},
        {"gsm8k", "llama-3-8b-instruct", "p->w", 77.6},
        {"iris", "llama-3-8b-instruct", "p->w", 44.0},
        {"hotpotqa", "mistral-7b-instruct-v0.2", "w->p", 33.0},
        {"gsm8k", "mistral-7b-instruct-v0.2", "w->p", 48.3},
        {"iris", "mistral-7b-instruct-v0.2", "w->p", 66.7},
        {"hotpotqa", "llama-2-7b-chat", "w->p", 34.2},
        {"gsm8k", "llama-2-7b-chat", "w->p", 26.6},
        {"iris", "llama-2-7b-chat", "w->p", kNone},
        {"hotpotqa", "llama-3-8b-instruct", "w->p", 43.6},
        {"gsm8k", "llama-3-8b-instruct", "w->p", 78.9},
        {"iris", "llama-3-8b-instruct", "w->p", 78.7},
        {"hotpotqa", "mistral-7b-instruct-v0.2", "p->w->p", 37.6},
        {"gsm8k", "mistral-7b-instruct-v0.2", "p->w->p", 46.8},
        {"iris", "mistral-7b-instruct-v0.2", "p->w->p", 52.7},
        {"hotpotqa", "llama-2-7b-chat", "p->w->p", 34.8},
        {"gsm8k", "llama-2-7b-chat", "p->w->p", 26.3},
        {"iris", "llama-2-7b-chat", "p->w->p", 65.3},
        {"hotpotqa", "llama-3-8b-instruct", "p->w->p", 46.7},
        {"gsm8k", "llama-3-8b-instruct", "p->w->p", 77.0},
        {"iris", "llama-3-8b-instruct", "p->w->p", 79.3},
    };
    return cells;
}

} // namespace acceptance
