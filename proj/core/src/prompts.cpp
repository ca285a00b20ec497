#include "packbench/prompts.hpp"

#include <cstdio>
#include <sstream>

#include "packbench/error.hpp"

namespace packbench {
namespace {

constexpr const char* kTemplate = R"(def pack(items, capacity):
    """Pack rectangular items into as few bins as possible.

    items:    sequence of (width, height) pairs; item i is items[i].
    capacity: (W, H), the size of every bin.

    Returns a list of bins. Each bin is a dict mapping an item index to
    the (x, y) lower-left corner of that item inside the bin.
    """
    bins = []
    # heuristic goes here
    return bins
)";

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

}  // namespace

PromptRules rules_for(const Dataset& dataset) {
    PromptRules rules;
    rules.bin = dataset.params.bin;
    rules.n_items = dataset.params.items;
    rules.min_side = dataset.params.min_side;
    rules.max_side = dataset.params.max_side;
    if (!dataset.instances.empty()) rules.bin = dataset.instances.front().bin;
    return rules;
}

std::string build_initial_prompt(const PromptRules& rules) {
    std::ostringstream p;
    p << "You are designing a heuristic for the two-dimensional bin packing problem.\n"
      << "\n"
      << "PROBLEM\n"
      << "Pack " << rules.n_items << " " << (rules.squares ? "square" : "rectangular")
      << " items into the minimum number of identical bins of capacity (" << rules.bin.width << ","
      << rules.bin.height << "), i.e. " << rules.bin.width << " units wide and " << rules.bin.height
      << " units high. Item side lengths are integers between " << rules.min_side << " and "
      << rules.max_side << " units. Items keep their orientation; rotation is not allowed.\n"
      << "\n"
      << "RULES (a solution breaking any rule is discarded)\n"
      << "1. Exactly once: every item must be packed exactly once; no item may appear in more than one bin, and no item may be left out.\n"
      << "2. No overlap: no item may overlap another item in the same bin. Touching edges is allowed.\n"
      << "3. Within boundaries: every item must lie completely within the bin boundaries: 0 <= x, 0 <= y, x + width <= "
      << rules.bin.width << ", y + height <= " << rules.bin.height << ".\n"
      << "\n"
      << "OBJECTIVE (in priority order)\n"
      << "1. Use as few bins as possible.\n"
      << "2. Among solutions with equal bin counts, maximize space utilization (total item area divided by used bin area).\n"
      << "3. Among those, prefer faster code.\n"
      << "\n"
      << "INPUT/OUTPUT CONTRACT\n"
      << "Your function is called with the items and the capacity. The evaluation harness wraps it in a process that\n"
      << "reads one JSON object from standard input:\n"
      << "  {\"capacity\":[W,H],\"items\":[[w0,h0],[w1,h1],...]}   (item index = position in the list)\n"
      << "and writes one JSON object to standard output:\n"
      << "  {\"bins\":[{\"placements\":[{\"item\":i,\"x\":x,\"y\":y},...]},...]}\n"
      << "where (x, y) is the lower-left corner of item i. You do not write this I/O code; return the structure\n"
      << "described in the template and the harness converts it.\n"
      << "\n"
      << "TEMPLATE (keep the function name and signature exactly)\n"
      << "```python\n"
      << kTemplate << "```\n"
      << "\n"
      << "Reply with one complete Python function in a single fenced code block. Use only the standard library and numpy.\n";
    return p.str();
}

std::string build_refinement_prompt(const PromptRules& rules, std::span<const Exemplar> exemplars) {
    if (exemplars.empty()) throw Error(ErrorCode::kNoExemplars, "refinement needs at least one exemplar");
    std::ostringstream p;
    p << build_initial_prompt(rules) << "\n"
      << "BEST-SHOT EXAMPLES\n"
      << "The following " << exemplars.size() << " heuristic" << (exemplars.size() == 1 ? " was" : "s were")
      << " the best performers of the previous round, one from each of the top performance islands, best first.\n";
    if (exemplars.size() < 3)
        p << "Only " << exemplars.size() << " island" << (exemplars.size() == 1 ? " was" : "s were")
          << " available, so these examples are less diverse than usual; explore other strategies as well.\n";
    for (std::size_t i = 0; i < exemplars.size(); ++i) {
        const auto& e = exemplars[i];
        p << "\n"
          << "Example " << i + 1 << ": average bins " << fixed(e.score.bins_used, 2) << ", utilization "
          << fixed(e.score.utilization, 4);
        if (rules.show_runtime) p << ", runtime " << fixed(e.score.runtime_seconds, 6) << " s";
        p << "\n"
          << "```python\n"
          << e.source;
        if (e.source.empty() || e.source.back() != '\n') p << "\n";
        p << "```\n";
    }
    p << "\n"
      << "Learn from what makes these examples effective and write a new, improved heuristic that uses fewer bins\n"
      << "or, at equal bins, achieves higher utilization. Follow the same template and rules.\n";
    return p.str();
}

std::string extract_code(std::string_view response) {
    const auto open = response.find("```");
    if (open != std::string_view::npos) {
        auto body = response.find('\n', open);
        if (body != std::string_view::npos) {
            ++body;
            auto close = response.find("```", body);
            if (close == std::string_view::npos) close = response.size();
            return std::string(response.substr(body, close - body));
        }
    }
    std::size_t start = 0;
    while (start < response.size() && (response[start] == ' ' || response[start] == '\n' ||
                                       response[start] == '\r' || response[start] == '\t'))
        ++start;
    const auto rest = response.substr(start);
    for (std::string_view head : {"def ", "#!", "import ", "from "}) {
        if (rest.starts_with(head)) return std::string(rest);
    }
    throw Error(ErrorCode::kNoCodeFound, "response contains no code block");
}

std::string content_hash(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace packbench
