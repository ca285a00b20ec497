#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <vector>

#include "packbench/model.hpp"

namespace packbench {

/// Ranking key of a packing result: bins (primary), utilization
/// (secondary), runtime (tertiary).
struct Score {
    double bins_used = 0.0;  // integral for one instance, a mean for a dataset
    double utilization = 0.0;
    double runtime_seconds = 0.0;

    friend bool operator==(const Score&, const Score&) = default;
};

inline constexpr double kRuntimeTolerance = 1e-6;

std::size_t bins_used(const Solution& solution);

/// Total item area over used bin area. Throws kNoBinsUsed when the
/// instance has items but the solution uses no bin; 0 for an empty instance.
double total_utilization(const Instance& instance, const Solution& solution);

/// Fill ratio of each used bin, in bin order.
std::vector<double> per_bin_utilization(const Instance& instance, const Solution& solution);

/// ceil(total item area / bin area).
std::size_t area_lower_bound(const Instance& instance);

/// Lexicographic ranking; `less` means `a` ranks ahead of (is better than) `b`.
/// Runtimes within `runtime_tolerance` seconds compare equal. Pass a negative
/// tolerance to ignore runtime entirely.
std::weak_ordering compare(const Score& a, const Score& b,
                           double runtime_tolerance = kRuntimeTolerance);

inline bool better(const Score& a, const Score& b,
                   double runtime_tolerance = kRuntimeTolerance) {
    return compare(a, b, runtime_tolerance) < 0;
}

Score score_solution(const Instance& instance, const Solution& solution, double runtime_seconds);

/// Arithmetic mean of each component.
Score aggregate(std::span<const Score> scores);

}  // namespace packbench
