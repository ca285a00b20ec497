#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "packbench/baselines.hpp"
#include "packbench/metrics.hpp"
#include "packbench/model.hpp"

namespace packbench {

struct RunState;

/// One row of the comparison table plus the per-instance bin fill profile.
struct MethodSummary {
    std::string method;
    Score mean;
    std::vector<std::vector<double>> bin_utilization;  // per instance, per bin
};

/// Solves every instance natively, timing each solve.
MethodSummary summarize_baseline(BaselineAlgo algo, const Dataset& dataset,
                                 std::vector<Solution>* solutions = nullptr);

/// Mean fill of the k-th bin over the instances that use at least k+1 bins.
std::vector<double> mean_bin_profile(const std::vector<std::vector<double>>& per_instance);

/// Means of the first and of the last used bin over all instances.
std::pair<double, double> first_last_utilization(const std::vector<std::vector<double>>& per_instance);

inline constexpr const char* kReportHeader = "method,avg_bins,avg_runtime_s,avg_utilization";

std::string report_csv_row(const MethodSummary& row);
std::string report_csv(std::span<const MethodSummary> rows);
std::string profile_csv(std::span<const MethodSummary> rows);

/// Parses report.csv back into rows (bin utilization left empty).
std::vector<MethodSummary> parse_report_csv(const std::string& text);

/// Plain-text table with the columns of report.csv.
std::string report_table(std::span<const MethodSummary> rows);

/// report.csv, trend.csv and profile.csv for a finished run.
void emit_report(const RunState& state, const Dataset& dataset, const std::filesystem::path& run_dir);

}  // namespace packbench
