#include "packbench/baselines.hpp"

#include <algorithm>
#include <string>

#include "packbench/error.hpp"

namespace packbench {

std::vector<Item> sorted_decreasing_height(std::span<const Item> items) {
    std::vector<Item> sorted(items.begin(), items.end());
    std::sort(sorted.begin(), sorted.end(), [](const Item& a, const Item& b) {
        if (a.height != b.height) return a.height > b.height;
        if (a.width != b.width) return a.width > b.width;
        return a.index < b.index;
    });
    return sorted;
}

std::vector<Strip> ffdh_strips(std::span<const Item> items, std::int64_t strip_width) {
    for (const auto& item : items) {
        if (item.width > strip_width)
            throw Error(ErrorCode::kItemTooWide, "item " + std::to_string(item.index) + " is wider than the strip");
    }
    std::vector<Strip> strips;
    for (const auto& item : sorted_decreasing_height(items)) {
        auto fit = std::find_if(strips.begin(), strips.end(), [&](const Strip& s) {
            return strip_width - s.used_width >= item.width;
        });
        if (fit == strips.end()) {
            strips.push_back({item.height, 0, {}});
            fit = std::prev(strips.end());
        }
        fit->slots.push_back({item.index, fit->used_width});
        fit->used_width += item.width;
    }
    return strips;
}

Solution pack_strips_ffd(std::span<const Strip> strips, const BinSpec& bin) {
    std::vector<std::int64_t> filled;  // stacked height per bin
    Solution solution;
    for (const auto& strip : strips) {
        if (strip.height > bin.height) throw Error(ErrorCode::kStripTooTall, "strip taller than the bin");
        std::size_t b = 0;
        while (b < filled.size() && bin.height - filled[b] < strip.height) ++b;
        if (b == filled.size()) {
            filled.push_back(0);
            solution.bins.emplace_back();
        }
        for (const auto& slot : strip.slots)
            solution.bins[b].placements.push_back(
                {slot.item, static_cast<double>(slot.x), static_cast<double>(filled[b])});
        filled[b] += strip.height;
    }
    return solution;
}

Solution pack_hff(const Instance& instance) {
    return pack_strips_ffd(ffdh_strips(instance.items, instance.bin.width), instance.bin);
}

Solution pack_fff(const Instance& instance) {
    struct Level {
        std::int64_t y;
        std::int64_t height;
        std::int64_t used_width;
    };
    struct OpenBin {
        std::vector<Level> levels;
        std::int64_t top = 0;
    };

    const auto& spec = instance.bin;
    for (const auto& item : instance.items) {
        if (item.width > spec.width || item.height > spec.height)
            throw Error(ErrorCode::kItemTooLarge, "item " + std::to_string(item.index) + " exceeds the bin");
    }

    std::vector<OpenBin> open;
    Solution solution;
    auto place = [&](std::size_t b, Level& level, const Item& item) {
        solution.bins[b].placements.push_back(
            {item.index, static_cast<double>(level.used_width), static_cast<double>(level.y)});
        level.used_width += item.width;
    };

    for (const auto& item : sorted_decreasing_height(instance.items)) {
        bool placed = false;
        for (std::size_t b = 0; b < open.size() && !placed; ++b) {
            auto& bin = open[b];
            for (auto& level : bin.levels) {
                if (spec.width - level.used_width >= item.width && level.height >= item.height) {
                    place(b, level, item);
                    placed = true;
                    break;
                }
            }
            if (!placed && spec.height - bin.top >= item.height) {
                bin.levels.push_back({bin.top, item.height, 0});
                bin.top += item.height;
                place(b, bin.levels.back(), item);
                placed = true;
            }
        }
        if (!placed) {
            open.push_back({});
            solution.bins.emplace_back();
            auto& bin = open.back();
            bin.levels.push_back({0, item.height, 0});
            bin.top = item.height;
            place(open.size() - 1, bin.levels.back(), item);
        }
    }
    return solution;
}

std::string_view to_string(BaselineAlgo algo) {
    return algo == BaselineAlgo::kFff ? "FFF" : "HFF";
}

BaselineAlgo parse_baseline_algo(std::string_view name) {
    if (name == "fff" || name == "FFF") return BaselineAlgo::kFff;
    if (name == "hff" || name == "HFF") return BaselineAlgo::kHff;
    throw Error(ErrorCode::kBadParams, "unknown algorithm '" + std::string(name) + "' (expected fff or hff)");
}

Solution solve_baseline(BaselineAlgo algo, const Instance& instance) {
    return algo == BaselineAlgo::kFff ? pack_fff(instance) : pack_hff(instance);
}

}  // namespace packbench
