#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "packbench/metrics.hpp"
#include "packbench/model.hpp"

namespace packbench {

/// Problem parameters stated in every prompt.
struct PromptRules {
    BinSpec bin{200, 100};
    std::size_t n_items = 50;
    std::int64_t min_side = 10;
    std::int64_t max_side = 50;
    bool squares = true;
    bool show_runtime = true;  // label exemplars with their runtime
};

PromptRules rules_for(const Dataset& dataset);

struct Exemplar {
    std::string candidate_id;
    std::string source;
    Score score;
};

std::string build_initial_prompt(const PromptRules& rules);

/// Initial prompt plus up to three scored exemplar sources, best first.
/// Throws kNoExemplars for an empty list.
std::string build_refinement_prompt(const PromptRules& rules, std::span<const Exemplar> exemplars);

/// Contents of the first fenced code block; otherwise the whole response
/// when it starts like source code. Throws kNoCodeFound.
std::string extract_code(std::string_view response);

/// 64-bit FNV-1a as 16 lowercase hex digits.
std::string content_hash(std::string_view text);

}  // namespace packbench
