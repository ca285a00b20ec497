#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "packbench/model.hpp"

namespace packbench {

enum class ViolationKind {
    kContainment,
    kOverlap,
    kDuplicateItem,
    kMissingItem,
    kUnknownItem,
    kDimensionMismatch,
};

std::string_view to_string(ViolationKind kind);

// Field population per kind:
//   Containment, UnknownItem : bin, items = {i}
//   Overlap                  : bin, items = {i, j}
//   DuplicateItem            : bin of the repeated occurrence, items = {i}
//   MissingItem              : items = {i}
//   DimensionMismatch        : items = {i}
struct Violation {
    ViolationKind kind;
    std::optional<std::size_t> bin;
    std::vector<ItemIndex> items;
    std::string detail;

    friend bool operator==(const Violation&, const Violation&) = default;
};

inline constexpr double kGeometryEpsilon = 1e-9;

/// Checks containment, pairwise non-overlap (touching edges allowed) and
/// exactly-once assignment. Returns every violation found, ordered by bin
/// index (bin-less violations last), then item index. Empty means valid.
std::vector<Violation> validate(const Instance& instance, const Solution& solution);

inline bool is_valid(const Instance& instance, const Solution& solution) {
    return validate(instance, solution).empty();
}

}  // namespace packbench
