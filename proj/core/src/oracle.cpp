#include "packbench/oracle.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>

#include "packbench/error.hpp"
#include "packbench/metrics.hpp"

namespace packbench {
namespace {

struct Rect {
    std::int64_t x, y, w, h;
};

// Depth-first search over corner-point placements. Every feasible packing
// can be pushed down and left until each item touches the floor or an item
// below it and the wall or an item to its left; in two dimensions such a
// packing can be built item by item with each corner taken from
// {0, right edges} x {0, top edges} of already placed items. Trying every
// unplaced item at every such point, with visited-state memoization,
// therefore decides feasibility exactly.
class CornerSearch {
public:
    CornerSearch(const std::vector<Item>& items, const BinSpec& bin) : items_(items), bin_(bin) {}

    bool solve(std::vector<Placement>* witness) {
        placed_.assign(items_.size(), false);
        if (!search()) return false;
        if (witness) {
            witness->clear();
            for (std::size_t k = 0; k < stack_.size(); ++k)
                witness->push_back({items_[order_[k]].index, static_cast<double>(stack_[k].x),
                                    static_cast<double>(stack_[k].y)});
        }
        return true;
    }

private:
    bool fits(const Rect& r) const {
        if (r.x + r.w > bin_.width || r.y + r.h > bin_.height) return false;
        for (const auto& o : stack_) {
            if (r.x < o.x + o.w && o.x < r.x + r.w && r.y < o.y + o.h && o.y < r.y + r.h) return false;
        }
        return true;
    }

    std::vector<std::int64_t> state_key() const {
        std::vector<std::array<std::int64_t, 4>> rects;
        for (const auto& r : stack_) rects.push_back({r.w, r.h, r.x, r.y});
        std::sort(rects.begin(), rects.end());
        std::vector<std::int64_t> key;
        key.reserve(rects.size() * 4);
        for (const auto& r : rects) key.insert(key.end(), r.begin(), r.end());
        return key;
    }

    bool search() {
        if (stack_.size() == items_.size()) return true;
        if (!visited_.insert(state_key()).second) return false;

        std::vector<std::int64_t> xs{0}, ys{0};
        for (const auto& r : stack_) {
            xs.push_back(r.x + r.w);
            ys.push_back(r.y + r.h);
        }
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        std::sort(ys.begin(), ys.end());
        ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

        std::set<std::pair<std::int64_t, std::int64_t>> tried_dims;
        for (std::size_t i = 0; i < items_.size(); ++i) {
            if (placed_[i]) continue;
            const auto& item = items_[i];
            // Items with equal dimensions are interchangeable.
            if (!tried_dims.insert({item.width, item.height}).second) continue;
            for (auto y : ys) {
                for (auto x : xs) {
                    const Rect r{x, y, item.width, item.height};
                    if (!fits(r)) continue;
                    placed_[i] = true;
                    stack_.push_back(r);
                    order_.push_back(i);
                    if (search()) return true;
                    order_.pop_back();
                    stack_.pop_back();
                    placed_[i] = false;
                }
            }
        }
        return false;
    }

    const std::vector<Item>& items_;
    BinSpec bin_;
    std::vector<bool> placed_;
    std::vector<Rect> stack_;
    std::vector<std::size_t> order_;
    std::set<std::vector<std::int64_t>> visited_;
};

class PartitionSearch {
public:
    explicit PartitionSearch(const Instance& instance) : instance_(instance) {}

    bool feasible(std::uint32_t mask) {
        if (auto it = cache_.find(mask); it != cache_.end()) return it->second;
        std::vector<Item> subset;
        for (std::size_t i = 0; i < instance_.size(); ++i)
            if (mask & (1u << i)) subset.push_back(instance_.items[i]);
        std::vector<Placement> witness;
        const bool ok = fits_in_one_bin(subset, instance_.bin, &witness);
        cache_.emplace(mask, ok);
        if (ok) witnesses_[mask] = std::move(witness);
        return ok;
    }

    // Assigns items in index order to at most `max_bins` blocks; the
    // restricted-growth rule (item i may open only block `blocks.size()`)
    // enumerates each set partition once.
    bool assign(std::size_t i, std::size_t max_bins) {
        if (i == instance_.size()) return true;
        const std::uint32_t bit = 1u << i;
        for (std::size_t b = 0; b <= blocks_.size() && b < max_bins; ++b) {
            const bool opening = b == blocks_.size();
            if (opening) blocks_.push_back(0);
            const auto before = blocks_[b];
            if (feasible(before | bit)) {
                blocks_[b] = before | bit;
                if (assign(i + 1, max_bins)) return true;
                blocks_[b] = before;
            }
            if (opening) blocks_.pop_back();
        }
        return false;
    }

    Solution witness() const {
        Solution s;
        for (auto mask : blocks_) s.bins.push_back({witnesses_.at(mask)});
        return s;
    }

private:
    const Instance& instance_;
    std::vector<std::uint32_t> blocks_;
    std::unordered_map<std::uint32_t, bool> cache_;
    std::unordered_map<std::uint32_t, std::vector<Placement>> witnesses_;
};

}  // namespace

bool fits_in_one_bin(const std::vector<Item>& items, const BinSpec& bin, std::vector<Placement>* witness) {
    std::int64_t area = 0;
    for (const auto& item : items) {
        if (item.width > bin.width || item.height > bin.height) return false;
        area += item.area();
    }
    if (area > bin.area()) return false;
    return CornerSearch(items, bin).solve(witness);
}

ExactResult exact_min_bins(const Instance& instance, std::size_t max_n) {
    if (instance.size() > max_n || instance.size() > 31)
        throw Error(ErrorCode::kTooLarge, "exact search is limited to " + std::to_string(max_n) + " items, got " +
                                              std::to_string(instance.size()));
    for (const auto& item : instance.items) {
        if (item.width > instance.bin.width || item.height > instance.bin.height)
            throw Error(ErrorCode::kItemTooLarge, "item " + std::to_string(item.index) + " exceeds the bin");
    }
    if (instance.items.empty()) return {0, {}};

    PartitionSearch search(instance);
    for (std::size_t k = std::max<std::size_t>(1, area_lower_bound(instance)); k <= instance.size(); ++k) {
        if (search.assign(0, k)) {
            auto witness = search.witness();
            return {bins_used(witness), std::move(witness)};
        }
    }
    // Unreachable: one item per bin is always feasible once every item fits.
    throw Error(ErrorCode::kTooLarge, "no feasible partition found");
}

}  // namespace packbench
