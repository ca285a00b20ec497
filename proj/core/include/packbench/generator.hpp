#pragma once

#include <cstdint>

#include "packbench/model.hpp"

namespace packbench {

inline constexpr const char* kGeneratorName = "splitmix64";

/// `n_items` squares with integer sides uniform on [min_side, max_side]
/// (inclusive), drawn from SplitMix64 seeded with `seed`. Throws kBadParams
/// unless 0 < min_side <= max_side <= min(W, H).
Instance gen_instance(std::uint64_t seed, std::size_t n_items, std::int64_t min_side,
                      std::int64_t max_side, const BinSpec& bin);

/// Instance k uses sub-seed `seed + k`. Throws kBadParams when count < 1.
Dataset gen_dataset(std::uint64_t seed, std::size_t count, const GeneratorParams& params);

}  // namespace packbench
