#include "packbench/metrics.hpp"

#include <cmath>

#include "packbench/error.hpp"

namespace packbench {

std::size_t bins_used(const Solution& solution) {
    std::size_t used = 0;
    for (const auto& bin : solution.bins) used += bin.used() ? 1 : 0;
    return used;
}

double total_utilization(const Instance& instance, const Solution& solution) {
    const std::size_t used = bins_used(solution);
    if (used == 0) {
        if (instance.items.empty()) return 0.0;
        throw Error(ErrorCode::kNoBinsUsed, "solution uses no bins for a non-empty instance");
    }
    return static_cast<double>(instance.total_item_area()) /
           (static_cast<double>(used) * static_cast<double>(instance.bin.area()));
}

std::vector<double> per_bin_utilization(const Instance& instance, const Solution& solution) {
    std::vector<double> out;
    const auto bin_area = static_cast<double>(instance.bin.area());
    for (const auto& bin : solution.bins) {
        if (!bin.used()) continue;
        std::int64_t area = 0;
        for (const auto& p : bin.placements)
            if (p.item < instance.size()) area += instance.items[p.item].area();
        out.push_back(static_cast<double>(area) / bin_area);
    }
    return out;
}

std::size_t area_lower_bound(const Instance& instance) {
    const std::int64_t area = instance.total_item_area();
    const std::int64_t bin = instance.bin.area();
    return static_cast<std::size_t>((area + bin - 1) / bin);
}

std::weak_ordering compare(const Score& a, const Score& b, double runtime_tolerance) {
    if (a.bins_used != b.bins_used)
        return a.bins_used < b.bins_used ? std::weak_ordering::less : std::weak_ordering::greater;
    if (a.utilization != b.utilization)
        return a.utilization > b.utilization ? std::weak_ordering::less : std::weak_ordering::greater;
    if (runtime_tolerance < 0.0) return std::weak_ordering::equivalent;
    const double dt = a.runtime_seconds - b.runtime_seconds;
    if (std::fabs(dt) <= runtime_tolerance) return std::weak_ordering::equivalent;
    return dt < 0.0 ? std::weak_ordering::less : std::weak_ordering::greater;
}

Score score_solution(const Instance& instance, const Solution& solution, double runtime_seconds) {
    return {static_cast<double>(bins_used(solution)), total_utilization(instance, solution),
            runtime_seconds};
}

Score aggregate(std::span<const Score> scores) {
    Score mean;
    if (scores.empty()) return mean;
    for (const auto& s : scores) {
        mean.bins_used += s.bins_used;
        mean.utilization += s.utilization;
        mean.runtime_seconds += s.runtime_seconds;
    }
    const auto n = static_cast<double>(scores.size());
    mean.bins_used /= n;
    mean.utilization /= n;
    mean.runtime_seconds /= n;
    return mean;
}

}  // namespace packbench
