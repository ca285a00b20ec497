#include "packbench/report.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <sstream>

#include "packbench/codec.hpp"
#include "packbench/error.hpp"
#include "packbench/evolution.hpp"

namespace fs = std::filesystem;

namespace packbench {
namespace {

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, sep)) out.push_back(cur);
    return out;
}

}  // namespace

MethodSummary summarize_baseline(BaselineAlgo algo, const Dataset& dataset, std::vector<Solution>* solutions) {
    MethodSummary summary;
    summary.method = std::string(to_string(algo));
    std::vector<Score> scores;
    for (const auto& instance : dataset.instances) {
        const auto start = std::chrono::steady_clock::now();
        auto solution = solve_baseline(algo, instance);
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        scores.push_back(score_solution(instance, solution, elapsed));
        summary.bin_utilization.push_back(per_bin_utilization(instance, solution));
        if (solutions) solutions->push_back(std::move(solution));
    }
    summary.mean = aggregate(scores);
    return summary;
}

std::vector<double> mean_bin_profile(const std::vector<std::vector<double>>& per_instance) {
    std::vector<double> sum;
    std::vector<std::size_t> count;
    for (const auto& bins : per_instance) {
        if (bins.size() > sum.size()) {
            sum.resize(bins.size(), 0.0);
            count.resize(bins.size(), 0);
        }
        for (std::size_t k = 0; k < bins.size(); ++k) {
            sum[k] += bins[k];
            ++count[k];
        }
    }
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] /= static_cast<double>(count[k]);
    return sum;
}

std::pair<double, double> first_last_utilization(const std::vector<std::vector<double>>& per_instance) {
    double first = 0.0, last = 0.0;
    std::size_t n = 0;
    for (const auto& bins : per_instance) {
        if (bins.empty()) continue;
        first += bins.front();
        last += bins.back();
        ++n;
    }
    if (n == 0) return {0.0, 0.0};
    return {first / static_cast<double>(n), last / static_cast<double>(n)};
}

std::string report_csv_row(const MethodSummary& row) {
    return row.method + "," + fixed(row.mean.bins_used, 2) + "," + fixed(row.mean.runtime_seconds, 6) + "," +
           fixed(row.mean.utilization, 4);
}

std::string report_csv(std::span<const MethodSummary> rows) {
    std::string out = std::string(kReportHeader) + "\n";
    for (const auto& row : rows) out += report_csv_row(row) + "\n";
    return out;
}

std::string profile_csv(std::span<const MethodSummary> rows) {
    std::string out = "method,bin,mean_utilization,instances\n";
    for (const auto& row : rows) {
        const auto profile = mean_bin_profile(row.bin_utilization);
        for (std::size_t k = 0; k < profile.size(); ++k) {
            std::size_t n = 0;
            for (const auto& bins : row.bin_utilization) n += bins.size() > k ? 1 : 0;
            out += row.method + "," + std::to_string(k + 1) + "," + fixed(profile[k], 4) + "," + std::to_string(n) + "\n";
        }
        const auto [first, last] = first_last_utilization(row.bin_utilization);
        out += row.method + ",first," + fixed(first, 4) + "," + std::to_string(row.bin_utilization.size()) + "\n";
        out += row.method + ",last," + fixed(last, 4) + "," + std::to_string(row.bin_utilization.size()) + "\n";
    }
    return out;
}

std::vector<MethodSummary> parse_report_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kReportHeader)
        throw Error(ErrorCode::kMalformedInput, std::string("report must start with '") + kReportHeader + "'");
    std::vector<MethodSummary> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cols = split(line, ',');
        if (cols.size() != 4) throw Error(ErrorCode::kMalformedInput, "bad report row: " + line);
        MethodSummary row;
        row.method = cols[0];
        try {
            row.mean.bins_used = std::stod(cols[1]);
            row.mean.runtime_seconds = std::stod(cols[2]);
            row.mean.utilization = std::stod(cols[3]);
        } catch (const std::exception&) {
            throw Error(ErrorCode::kMalformedInput, "bad number in report row: " + line);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string report_table(std::span<const MethodSummary> rows) {
    std::size_t name_width = 6;
    for (const auto& row : rows) name_width = std::max(name_width, row.method.size());
    char buf[256];
    std::string out;
    std::snprintf(buf, sizeof buf, "%-*s  %8s  %18s  %17s\n", static_cast<int>(name_width), "Method", "Avg Bins",
                  "Execution Time (s)", "Space Utilization");
    out += buf;
    out += std::string(name_width + 2 + 8 + 2 + 18 + 2 + 17, '-') + "\n";
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof buf, "%-*s  %8.2f  %18.6f  %17.2f\n", static_cast<int>(name_width),
                      row.method.c_str(), row.mean.bins_used, row.mean.runtime_seconds, row.mean.utilization);
        out += buf;
    }
    return out;
}

void emit_report(const RunState& state, const Dataset& dataset, const fs::path& run_dir) {
    std::vector<MethodSummary> rows;
    rows.push_back(summarize_baseline(BaselineAlgo::kFff, dataset));
    rows.push_back(summarize_baseline(BaselineAlgo::kHff, dataset));
    if (state.best_so_far && state.best_so_far->score)
        rows.push_back({"best-evolved", *state.best_so_far->score, state.best_so_far->bin_utilization});

    write_file((run_dir / "report.csv").string(), report_csv(rows));
    write_file((run_dir / "profile.csv").string(), profile_csv(rows));

    std::string trend =
        "generation,best_avg_bins,best_utilization,best_so_far_avg_bins,best_so_far_utilization,valid,disqualified,islands\n";
    for (const auto& g : state.generations) {
        std::size_t valid = 0;
        for (const auto& r : g.population) valid += r.valid() ? 1 : 0;
        trend += std::to_string(g.index) + ",";
        trend += g.best_score ? fixed(g.best_score->bins_used, 2) + "," + fixed(g.best_score->utilization, 4) : ",";
        trend += ",";
        trend += g.best_so_far ? fixed(g.best_so_far->bins_used, 2) + "," + fixed(g.best_so_far->utilization, 4) : ",";
        trend += "," + std::to_string(valid) + "," + std::to_string(g.population.size() - valid) + "," +
                 std::to_string(g.islands.size()) + "\n";
    }
    write_file((run_dir / "trend.csv").string(), trend);
}

}  // namespace packbench
