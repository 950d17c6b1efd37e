#include "lmopt/results.hpp"

#include "lmopt/error.hpp"
#include "lmopt/strategy.hpp"
#include "lmopt/trainer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace lmopt {

namespace {

constexpr long long kMicro = 1'000'000;

// value * 1e6 as an integer; the caller's values are decimal percentages.
long long to_micro(double value) {
    if (!std::isfinite(value)) throw InvalidArgument("accuracy must be finite");
    return std::llround(value * static_cast<double>(kMicro));
}

// Integer division rounding half away from zero; den > 0.
long long div_round_half_away(long long num, long long den) {
    const long long q = (2 * (num < 0 ? -num : num) + den) / (2 * den);
    return num < 0 ? -q : q;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

void check_cell(const std::string& cell) {
    if (cell.find_first_of(",\n\r\"") != std::string::npos) {
        throw InvalidArgument("results.csv cell contains a reserved character: " + cell);
    }
}

std::string csv_row(const RunResult& r) {
    check_cell(r.strategy);
    check_cell(r.model);
    check_cell(r.task);
    return r.strategy + "," + r.model + "," + r.task + "," + std::to_string(r.seed) + "," +
           (r.accuracy ? format_number(*r.accuracy) : std::string("--"));
}

constexpr std::string_view kHeader = "strategy,model,task,seed,accuracy";

} // namespace

std::string AggregateRow::display() const {
    if (!mean) return "--";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", *mean);
    return buf;
}

double round_one_decimal(double value) {
    return static_cast<double>(div_round_half_away(to_micro(value), kMicro / 10)) / 10.0;
}

std::optional<double> mean_one_decimal(std::span<const std::optional<double>> values) {
    long long sum = 0;
    long long n = 0;
    for (const auto& v : values) {
        if (!v) continue;
        sum += to_micro(*v);
        ++n;
    }
    if (n == 0) return std::nullopt;
    return static_cast<double>(div_round_half_away(sum, n * (kMicro / 10))) / 10.0;
}

std::vector<AggregateRow> aggregate_runs(std::span<const RunResult> results) {
    std::vector<AggregateRow> rows;
    std::vector<std::vector<std::optional<double>>> values;
    std::map<std::tuple<std::string, std::string, std::string>, std::size_t> index;
    for (const auto& r : results) {
        if (r.accuracy && (*r.accuracy < 0.0 || *r.accuracy > 100.0)) {
            throw InvalidArgument("accuracy outside [0, 100]: " + format_number(*r.accuracy));
        }
        auto [it, inserted] = index.try_emplace({r.strategy, r.model, r.task}, rows.size());
        if (inserted) {
            rows.push_back({r.strategy, r.model, r.task, 0, std::nullopt});
            values.emplace_back();
        }
        rows[it->second].runs += 1;
        values[it->second].push_back(r.accuracy);
    }
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i].mean = mean_one_decimal(values[i]);
    return rows;
}

std::vector<RunResult> read_results_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != kHeader) {
        throw DataError(path.string() + ": expected header `" + std::string(kHeader) + "`");
    }
    std::vector<RunResult> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        const std::string where = path.string() + ":" + std::to_string(lineno);
        if (cells.size() != 5) throw DataError(where + ": expected 5 columns");
        RunResult r{cells[0], cells[1], cells[2], 0, std::nullopt};
        const auto& s = cells[3];
        if (std::from_chars(s.data(), s.data() + s.size(), r.seed).ec != std::errc{}) {
            throw DataError(where + ": bad seed `" + s + "`");
        }
        if (cells[4] != "--") {
            double acc = 0;
            const auto& a = cells[4];
            auto [ptr, ec] = std::from_chars(a.data(), a.data() + a.size(), acc);
            if (ec != std::errc{} || ptr != a.data() + a.size()) throw DataError(where + ": bad accuracy `" + a + "`");
            r.accuracy = acc;
        }
        out.push_back(std::move(r));
    }
    return out;
}

void write_results_csv(const std::filesystem::path& path, std::span<const RunResult> results) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out << kHeader << '\n';
    for (const auto& r : results) out << csv_row(r) << '\n';
}

void append_result_csv(const std::filesystem::path& path, const RunResult& result) {
    const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::app);
    if (!out) throw DataError("cannot write " + path.string());
    if (fresh) out << kHeader << '\n';
    out << csv_row(result) << '\n';
}

std::string strategy_label(std::string_view strategy) {
    if (strategy == "vanilla") return "Vanilla Zero-shot";
    if (strategy == "p") return "Prompt Optimization (p)";
    if (strategy == "w") return "Weight Optimization (w)";
    std::string out;
    for (char c : strategy) {
        if (c == '-') out += " -";
        else if (c == '>') out += "> ";
        else out += c;
    }
    return out;
}

std::string render_report(std::span<const AggregateRow> rows) {
    std::vector<std::pair<std::string, std::string>> columns;
    std::vector<std::string> strategies;
    for (const auto& name : strategy_names()) {
        for (const auto& r : rows) {
            if (r.strategy == name) {
                strategies.emplace_back(name);
                break;
            }
        }
    }
    for (const auto& r : rows) {
        if (std::find(strategies.begin(), strategies.end(), r.strategy) == strategies.end()) {
            strategies.push_back(r.strategy);
        }
        std::pair<std::string, std::string> col{r.model, r.task};
        if (std::find(columns.begin(), columns.end(), col) == columns.end()) columns.push_back(col);
    }
    auto task_rank = [](const std::string& t) {
        static const std::vector<std::string> order{"hotpotqa", "gsm8k", "iris"};
        auto it = std::find(order.begin(), order.end(), t);
        return static_cast<std::size_t>(it - order.begin());
    };
    std::vector<std::string> models;
    for (const auto& c : columns) {
        if (std::find(models.begin(), models.end(), c.first) == models.end()) models.push_back(c.first);
    }
    std::stable_sort(columns.begin(), columns.end(), [&](const auto& a, const auto& b) {
        auto ma = std::find(models.begin(), models.end(), a.first) - models.begin();
        auto mb = std::find(models.begin(), models.end(), b.first) - models.begin();
        if (ma != mb) return ma < mb;
        return task_rank(a.second) < task_rank(b.second);
    });

    std::vector<std::vector<std::string>> table;
    std::vector<std::string> header{"Strategy"};
    for (const auto& [model, task] : columns) header.push_back(model + "/" + task);
    table.push_back(header);
    for (const auto& s : strategies) {
        std::vector<std::string> line{strategy_label(s)};
        for (const auto& [model, task] : columns) {
            std::string cell = "";
            for (const auto& r : rows) {
                if (r.strategy == s && r.model == model && r.task == task) cell = r.display();
            }
            line.push_back(cell);
        }
        table.push_back(std::move(line));
    }

    std::vector<std::size_t> widths(header.size(), 0);
    for (const auto& line : table) {
        for (std::size_t i = 0; i < line.size(); ++i) widths[i] = std::max(widths[i], line[i].size());
    }
    std::ostringstream out;
    for (std::size_t li = 0; li < table.size(); ++li) {
        const auto& line = table[li];
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (i == 0) {
                out << line[i] << std::string(widths[i] - line[i].size(), ' ');
            } else {
                out << "  " << std::string(widths[i] - line[i].size(), ' ') << line[i];
            }
        }
        out << '\n';
        if (li == 0) {
            std::size_t total = widths[0];
            for (std::size_t i = 1; i < widths.size(); ++i) total += widths[i] + 2;
            out << std::string(total, '-') << '\n';
        }
    }
    return out.str();
}

} // namespace lmopt
