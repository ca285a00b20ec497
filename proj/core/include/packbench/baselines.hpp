#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "packbench/model.hpp"

namespace packbench {

struct StripSlot {
    ItemIndex item = 0;
    std::int64_t x = 0;

    friend bool operator==(const StripSlot&, const StripSlot&) = default;
};

/// One level of an FFDH strip packing: items sit on a common base line.
struct Strip {
    std::int64_t height = 0;
    std::int64_t used_width = 0;
    std::vector<StripSlot> slots;

    friend bool operator==(const Strip&, const Strip&) = default;
};

/// Height descending, then width descending, then original index ascending.
std::vector<Item> sorted_decreasing_height(std::span<const Item> items);

/// First-Fit Decreasing Height into strips of width `strip_width`.
/// Throws kItemTooWide.
std::vector<Strip> ffdh_strips(std::span<const Item> items, std::int64_t strip_width);

/// First-Fit of strips (in the given order) into bins by residual height.
/// Throws kStripTooTall.
Solution pack_strips_ffd(std::span<const Strip> strips, const BinSpec& bin);

/// Hybrid First-Fit: FFDH strips, then FFD of strips into bins.
Solution pack_hff(const Instance& instance);

/// Finite First-Fit: FFDH level rules applied directly inside finite bins.
/// Throws kItemTooLarge.
Solution pack_fff(const Instance& instance);

enum class BaselineAlgo { kFff, kHff };

std::string_view to_string(BaselineAlgo algo);
BaselineAlgo parse_baseline_algo(std::string_view name);
Solution solve_baseline(BaselineAlgo algo, const Instance& instance);

}  // namespace packbench
