#include "packbench/generator.hpp"

#include <algorithm>
#include <string>

#include "packbench/error.hpp"
#include "packbench/random.hpp"

namespace packbench {

Instance gen_instance(std::uint64_t seed, std::size_t n_items, std::int64_t min_side,
                      std::int64_t max_side, const BinSpec& bin) {
    if (bin.width <= 0 || bin.height <= 0)
        throw Error(ErrorCode::kBadParams, "bin dimensions must be positive");
    if (min_side <= 0 || min_side > max_side || max_side > std::min(bin.width, bin.height))
        throw Error(ErrorCode::kBadParams, "need 0 < min_side <= max_side <= min(W,H), got " +
                                               std::to_string(min_side) + ".." + std::to_string(max_side));
    SplitMix64 rng(seed);
    Instance instance;
    instance.bin = bin;
    instance.items.reserve(n_items);
    for (std::size_t i = 0; i < n_items; ++i) {
        const auto side = rng.uniform_int(min_side, max_side);
        instance.items.push_back({i, side, side});
    }
    return instance;
}

Dataset gen_dataset(std::uint64_t seed, std::size_t count, const GeneratorParams& params) {
    if (count < 1) throw Error(ErrorCode::kBadParams, "dataset needs at least one instance");
    Dataset dataset;
    dataset.seed = seed;
    dataset.params = params;
    dataset.instances.reserve(count);
    for (std::size_t k = 0; k < count; ++k)
        dataset.instances.push_back(gen_instance(seed + k, params.items, params.min_side, params.max_side, params.bin));
    return dataset;
}

}  // namespace packbench
