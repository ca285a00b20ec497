#pragma once

#include <cstddef>

#include "packbench/model.hpp"

namespace packbench {

struct ExactResult {
    std::size_t bins = 0;
    Solution witness;
};

inline constexpr std::size_t kOracleDefaultMaxItems = 6;

/// Minimum number of bins by exhaustive search, for tiny instances.
/// Throws kTooLarge when the instance has more than `max_n` items.
ExactResult exact_min_bins(const Instance& instance, std::size_t max_n = kOracleDefaultMaxItems);

/// Whether the given items fit together in one bin (no rotation). Exact:
/// searches corner-point placements over every placement order.
bool fits_in_one_bin(const std::vector<Item>& items, const BinSpec& bin,
                     std::vector<Placement>* witness = nullptr);

}  // namespace packbench
