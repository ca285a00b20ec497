#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "packbench/metrics.hpp"
#include "packbench/model.hpp"
#include "packbench/protocol.hpp"
#include "packbench/provider.hpp"

namespace packbench {

enum class RuntimeTiebreak { kAuto, kOn, kOff };

struct EvolutionConfig {
    std::uint64_t seed = 0;
    std::size_t population = 20;
    std::size_t generations = 6;
    std::size_t top_islands = 3;
    double timeout_seconds = 10.0;
    // "{source}" is replaced by the path of the persisted candidate source.
    std::vector<std::string> launcher{"packbench-shim", "{source}"};
    std::size_t jobs = 0;  // 0: default_jobs()
    // kAuto: runtime breaks ties for live providers only; mock runs rank on
    // bins and utilization so that persisted state is reproducible.
    RuntimeTiebreak runtime_tiebreak = RuntimeTiebreak::kAuto;
    ProviderConfig provider;

    friend bool operator==(const EvolutionConfig&, const EvolutionConfig&) = default;
};

/// Parses the JSON config document. Unknown keys are rejected.
EvolutionConfig parse_evolution_config(const std::string& text);

struct CandidateRecord {
    std::string id;
    std::size_t generation = 0;
    std::string source;
    std::string provider_id;
    std::string prompt_hash;
    std::optional<Score> score;                         // set iff it passed every instance
    std::vector<std::string> reasons;                   // non-empty iff disqualified
    std::vector<std::vector<double>> bin_utilization;   // per instance, per bin

    bool valid() const { return score.has_value(); }
};

struct Island {
    std::int64_t key = 0;              // mean bins x 100, rounded
    std::vector<std::string> members;  // candidate ids, best first

    double mean_bins() const { return static_cast<double>(key) / 100.0; }
};

struct GenerationRecord {
    std::size_t index = 0;
    std::string prompt_hash;
    std::vector<CandidateRecord> population;
    std::vector<Island> islands;
    std::optional<std::string> best_id;       // best of this generation
    std::optional<Score> best_score;
    std::vector<std::string> exemplars;       // ids fed to the next prompt
    std::optional<Score> best_so_far;         // elitist best after this generation
};

struct RunState {
    EvolutionConfig config;
    std::string dataset_hash;
    std::vector<GenerationRecord> generations;
    std::optional<CandidateRecord> best_so_far;
    std::string provider_state;

    /// First generation whose elitist best equals the final best.
    std::optional<std::size_t> converged_at() const;
};

std::string encode_run_state(const RunState& state);
RunState decode_run_state(const std::string& text);

/// Island key of a mean bin count: round(mean * 100).
std::int64_t island_key(double mean_bins);

/// Groups valid candidates by island key; islands ascend by key, members
/// are ordered best first (ties by id).
std::vector<Island> form_islands(std::span<const CandidateRecord> candidates,
                                 double runtime_tolerance);

/// One member drawn uniformly from each of the `top` lowest-keyed islands.
/// Throws kNoIslands.
std::vector<std::string> select_exemplars(std::span<const Island> islands, std::uint64_t seed,
                                          std::size_t top = 3);

/// One evolution run bound to a run directory. Layout:
///   run.json, dataset.json, gen-<k>/prompt.txt, gen-<k>/candidate-<i>.src,
///   gen-<k>/outcomes.json, report.csv, trend.csv, profile.csv
class EvolutionRun {
public:
    EvolutionRun(EvolutionConfig config, Dataset dataset, Provider& provider,
                 std::filesystem::path run_dir);

    /// Reloads run.json from `run_dir` and continues from the last completed
    /// generation. `generations` overrides the stored budget when non-zero.
    static EvolutionRun resume(Dataset dataset, Provider& provider,
                               std::filesystem::path run_dir, std::size_t generations = 0);

    const RunState& state() const { return state_; }
    bool finished() const { return state_.generations.size() >= state_.config.generations; }

    /// Generates, evaluates, clusters and persists one generation.
    void run_generation();

    /// Runs the remaining generations, then writes the report files.
    const RunState& run();

    double runtime_tolerance() const;

private:
    std::string next_prompt() const;
    void persist() const;

    RunState state_;
    Dataset dataset_;
    Provider* provider_;
    std::filesystem::path run_dir_;
};

RunState run_evolution(const EvolutionConfig& config, const Dataset& dataset, Provider& provider,
                       const std::filesystem::path& run_dir);

}  // namespace packbench
