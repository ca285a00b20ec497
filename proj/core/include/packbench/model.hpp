#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace packbench {

using ItemIndex = std::size_t;

struct BinSpec {
    std::int64_t width = 0;
    std::int64_t height = 0;

    std::int64_t area() const { return width * height; }
    friend bool operator==(const BinSpec&, const BinSpec&) = default;
};

struct Item {
    ItemIndex index = 0;
    std::int64_t width = 0;
    std::int64_t height = 0;

    std::int64_t area() const { return width * height; }
    friend bool operator==(const Item&, const Item&) = default;
};

// Coordinates are real-valued: candidates may emit fractional positions.
struct Placement {
    ItemIndex item = 0;
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Placement&, const Placement&) = default;
};

struct Bin {
    std::vector<Placement> placements;

    bool used() const { return !placements.empty(); }
    friend bool operator==(const Bin&, const Bin&) = default;
};

struct Solution {
    std::vector<Bin> bins;

    friend bool operator==(const Solution&, const Solution&) = default;
};

struct Instance {
    std::vector<Item> items;
    BinSpec bin;

    std::size_t size() const { return items.size(); }
    std::int64_t total_item_area() const;
    friend bool operator==(const Instance&, const Instance&) = default;

    /// Builds an instance from (width, height) pairs; item index = position.
    static Instance from_dims(BinSpec bin,
                              const std::vector<std::pair<std::int64_t, std::int64_t>>& dims);
};

/// Parameters that produced a dataset, kept alongside it so it can be regenerated.
struct GeneratorParams {
    std::size_t items = 50;
    std::int64_t min_side = 10;
    std::int64_t max_side = 50;
    BinSpec bin{200, 100};

    friend bool operator==(const GeneratorParams&, const GeneratorParams&) = default;
};

struct Dataset {
    std::uint64_t seed = 0;
    GeneratorParams params;
    std::vector<Instance> instances;

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

}  // namespace packbench
