#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "packbench/metrics.hpp"
#include "packbench/model.hpp"
#include "packbench/validator.hpp"

namespace packbench {

/// How to launch one external candidate heuristic.
struct CandidateSpec {
    std::string id;
    std::vector<std::string> launch;  // program followed by its arguments
    double timeout_seconds = 10.0;
    std::string workdir;              // empty: inherit
};

namespace verdict {

struct Valid {
    Score score;
    std::vector<double> bin_utilization;
};
struct Invalid {
    std::vector<Violation> violations;
};
struct Crashed {
    int exit_code = -1;  // -1 when terminated by a signal
    int signal = 0;
    std::string stderr_excerpt;
};
struct TimedOut {};
struct Malformed {
    std::string detail;
};

}  // namespace verdict

using Verdict = std::variant<verdict::Valid, verdict::Invalid, verdict::Crashed,
                             verdict::TimedOut, verdict::Malformed>;

std::string verdict_name(const Verdict& v);
std::string describe(const Verdict& v);

struct EvalOutcome {
    std::string candidate_id;
    std::size_t instance_index = 0;
    Verdict verdict;
    double wall_time = 0.0;

    bool valid() const { return std::holds_alternative<verdict::Valid>(verdict); }
};

/// Pipes the instance wire form to the candidate's stdin, reads one
/// solution object from stdout, kills the whole process group at the
/// timeout, then decodes, validates and scores. Candidate failures are
/// verdicts; this never throws for anything the candidate does.
EvalOutcome run_candidate(const CandidateSpec& spec, const Instance& instance,
                          std::size_t instance_index = 0);

struct DatasetEvaluation {
    std::vector<EvalOutcome> outcomes;       // one per instance, in instance order
    std::optional<Score> aggregate;          // set iff every instance was Valid
    std::vector<std::string> reasons;        // why it was disqualified

    bool disqualified() const { return !aggregate.has_value(); }
};

/// Aggregates per-instance outcomes: any non-Valid verdict disqualifies.
DatasetEvaluation summarize(std::vector<EvalOutcome> outcomes);

DatasetEvaluation evaluate_on_dataset(const CandidateSpec& spec, const Dataset& dataset,
                                      std::size_t jobs = 1);

/// Runs `fn(i)` for i in [0, count) on up to `jobs` threads.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn&& fn);

std::size_t default_jobs();

}  // namespace packbench

#include "packbench/detail/parallel.hpp"
