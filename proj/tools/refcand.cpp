// Reference wire-protocol candidate: reads an instance on stdin, writes a
// solution on stdout. Faults simulate misbehaving generated heuristics.
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <iterator>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "packbench/baselines.hpp"
#include "packbench/codec.hpp"
#include "packbench/error.hpp"

using namespace packbench;

namespace {

// Finite next-fit decreasing height: only the newest level of the newest bin is open.
Solution pack_nfdh(const Instance& instance) {
    Solution s;
    std::int64_t level_y = 0, level_h = 0, used_w = 0;
    for (const auto& item : sorted_decreasing_height(instance.items)) {
        if (s.bins.empty()) {
            s.bins.emplace_back();
            level_h = item.height;
        } else if (instance.bin.width - used_w < item.width) {
            if (instance.bin.height - (level_y + level_h) >= item.height) {
                level_y += level_h;
            } else {
                s.bins.emplace_back();
                level_y = 0;
            }
            level_h = item.height;
            used_w = 0;
        }
        s.bins.back().placements.push_back({item.index, static_cast<double>(used_w), static_cast<double>(level_y)});
        used_w += item.width;
    }
    return s;
}

Solution pack_one_per_bin(const Instance& instance) {
    Solution s;
    for (const auto& item : instance.items) s.bins.push_back({{{item.index, 0.0, 0.0}}});
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reference packing candidate speaking the stdin/stdout wire protocol"};
    std::string algo = "hff";
    std::string fault = "none";
    double sleep_seconds = 60.0;
    app.add_option("--algo", algo, "fff | hff | nfdh | one-per-bin")
        ->check(CLI::IsMember({"fff", "hff", "nfdh", "one-per-bin"}));
    app.add_option("--fault", fault,
                   "none | overlap | out-of-bounds | duplicate | missing | prose | crash | truncate | sleep | "
                   "exit-nonzero | spawn-orphan")
        ->check(CLI::IsMember({"none", "overlap", "out-of-bounds", "duplicate", "missing", "prose", "crash",
                               "truncate", "sleep", "exit-nonzero", "spawn-orphan"}));
    app.add_option("--sleep", sleep_seconds, "seconds to sleep for --fault sleep");
    std::size_t fault_when_items = 0;
    app.add_option("--fault-when-items", fault_when_items, "apply the fault only to instances with this many items");
    CLI11_PARSE(app, argc, argv);

    const std::string input{std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    Instance instance;
    try {
        instance = decode_instance(input);
    } catch (const Error& e) {
        std::cerr << "refcand: " << e.what() << "\n";
        return 2;
    }
    if (fault_when_items != 0 && instance.size() != fault_when_items) fault = "none";

    if (fault == "sleep") std::this_thread::sleep_for(std::chrono::duration<double>(sleep_seconds));
    if (fault == "spawn-orphan") {
        // Leaves a background child holding stdout, then hangs.
        if (std::system("sleep 37.25 &") != 0) return 4;
        std::this_thread::sleep_for(std::chrono::duration<double>(sleep_seconds));
    }
    if (fault == "prose") {
        std::cout << "I packed the items carefully into three bins.\n";
        return 0;
    }
    if (fault == "crash") {
        std::cerr << "refcand: simulated crash\n";
        std::abort();
    }

    Solution s;
    if (algo == "fff") s = pack_fff(instance);
    else if (algo == "hff") s = pack_hff(instance);
    else if (algo == "nfdh") s = pack_nfdh(instance);
    else s = pack_one_per_bin(instance);

    auto first_bin_with = [&](std::size_t n) -> Bin* {
        for (auto& b : s.bins)
            if (b.placements.size() >= n) return &b;
        return nullptr;
    };
    if (fault == "overlap") {
        if (auto* b = first_bin_with(2)) b->placements[1].x = b->placements[0].x, b->placements[1].y = b->placements[0].y;
    } else if (fault == "out-of-bounds") {
        if (auto* b = first_bin_with(1)) b->placements[0].x = static_cast<double>(instance.bin.width);
    } else if (fault == "duplicate") {
        if (auto* b = first_bin_with(1)) s.bins.push_back({{b->placements[0]}});
    } else if (fault == "missing") {
        if (auto* b = first_bin_with(1)) b->placements.pop_back();
    }

    std::string out = encode_solution(s);
    if (fault == "truncate") out = out.substr(0, out.size() / 2);
    std::cout << out << "\n";
    return fault == "exit-nonzero" ? 5 : 0;
}
