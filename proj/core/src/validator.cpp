#include "packbench/validator.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <tuple>

namespace packbench {
namespace {

std::string fmt_rect(const Item& item, const Placement& p) {
    std::ostringstream ss;
    ss << "item " << item.index << " (" << item.width << "x" << item.height << ") at (" << p.x << ","
       << p.y << ")";
    return ss.str();
}

}  // namespace

std::string_view to_string(ViolationKind kind) {
    switch (kind) {
    case ViolationKind::kContainment: return "Containment";
    case ViolationKind::kOverlap: return "Overlap";
    case ViolationKind::kDuplicateItem: return "DuplicateItem";
    case ViolationKind::kMissingItem: return "MissingItem";
    case ViolationKind::kUnknownItem: return "UnknownItem";
    case ViolationKind::kDimensionMismatch: return "DimensionMismatch";
    }
    return "Unknown";
}

std::vector<Violation> validate(const Instance& instance, const Solution& solution) {
    const double eps = kGeometryEpsilon;
    const auto W = static_cast<double>(instance.bin.width);
    const auto H = static_cast<double>(instance.bin.height);
    std::vector<Violation> out;

    for (const auto& item : instance.items) {
        if (item.width <= 0 || item.height <= 0 || item.width > instance.bin.width ||
            item.height > instance.bin.height) {
            out.push_back({ViolationKind::kDimensionMismatch, std::nullopt, {item.index},
                           "item " + std::to_string(item.index) + " cannot fit any bin"});
        }
    }

    std::vector<std::size_t> seen(instance.size(), 0);
    for (std::size_t b = 0; b < solution.bins.size(); ++b) {
        const auto& placements = solution.bins[b].placements;
        std::vector<std::size_t> known;  // positions of placements with a resolvable item
        for (std::size_t k = 0; k < placements.size(); ++k) {
            const auto& p = placements[k];
            if (p.item >= instance.size()) {
                out.push_back({ViolationKind::kUnknownItem, b, {p.item},
                               "item index " + std::to_string(p.item) + " not in instance"});
                continue;
            }
            if (seen[p.item]++ > 0) {
                out.push_back({ViolationKind::kDuplicateItem, b, {p.item},
                               "item " + std::to_string(p.item) + " placed more than once"});
            }
            const auto& item = instance.items[p.item];
            const double w = static_cast<double>(item.width);
            const double h = static_cast<double>(item.height);
            if (!(p.x >= -eps && p.y >= -eps && p.x + w <= W + eps && p.y + h <= H + eps)) {
                out.push_back({ViolationKind::kContainment, b, {p.item},
                               fmt_rect(item, p) + " leaves the bin"});
            }
            known.push_back(k);
        }
        for (std::size_t a = 0; a < known.size(); ++a) {
            const auto& pa = placements[known[a]];
            const auto& ia = instance.items[pa.item];
            for (std::size_t c = a + 1; c < known.size(); ++c) {
                const auto& pc = placements[known[c]];
                const auto& ic = instance.items[pc.item];
                const double dx = std::min(pa.x + ia.width, pc.x + ic.width) - std::max(pa.x, pc.x);
                const double dy = std::min(pa.y + ia.height, pc.y + ic.height) - std::max(pa.y, pc.y);
                if (dx > eps && dy > eps) {
                    auto lo = std::min(pa.item, pc.item);
                    auto hi = std::max(pa.item, pc.item);
                    out.push_back({ViolationKind::kOverlap, b, {lo, hi},
                                   fmt_rect(ia, pa) + " overlaps " + fmt_rect(ic, pc)});
                }
            }
        }
    }

    for (std::size_t i = 0; i < instance.size(); ++i) {
        if (seen[i] == 0)
            out.push_back({ViolationKind::kMissingItem, std::nullopt, {i},
                           "item " + std::to_string(i) + " is not placed"});
    }

    auto key = [](const Violation& v) {
        return std::make_tuple(v.bin.value_or(std::numeric_limits<std::size_t>::max()), v.items,
                               static_cast<int>(v.kind));
    };
    std::stable_sort(out.begin(), out.end(),
                     [&](const Violation& a, const Violation& b) { return key(a) < key(b); });
    return out;
}

}  // namespace packbench
