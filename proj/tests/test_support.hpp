#pragma once

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "packbench/model.hpp"
#include "packbench/random.hpp"

namespace packbench::testing {

namespace fs = std::filesystem;

class TempDir {
public:
    TempDir() {
        std::string pattern = (fs::temp_directory_path() / "packbench-test-XXXXXX").string();
        path_ = ::mkdtemp(pattern.data());
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }

    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

inline void write_text(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path());
    std::ofstream(path) << text;
    fs::permissions(path, fs::perms::owner_all | fs::perms::group_read | fs::perms::others_read);
}

/// A fixture response whose code block execs the reference candidate.
inline std::string refcand_response(const std::string& args) {
    return "Here is my heuristic.\n\n```sh\n#!/bin/sh\nexec \"" PACKBENCH_REFCAND "\" " + args + "\n```\n";
}

/// Shell script that runs the reference candidate with `args`.
inline fs::path refcand_script(const fs::path& dir, const std::string& name, const std::string& args) {
    const auto path = dir / name;
    write_text(path, "#!/bin/sh\nexec \"" PACKBENCH_REFCAND "\" " + args + "\n");
    return path;
}

/// Random rectangles fitting in `bin`, for property tests.
inline Instance random_rect_instance(SplitMix64& rng, std::size_t n, const BinSpec& bin, std::int64_t min_side = 1) {
    Instance instance;
    instance.bin = bin;
    for (std::size_t i = 0; i < n; ++i)
        instance.items.push_back({i, rng.uniform_int(min_side, bin.width), rng.uniform_int(min_side, bin.height)});
    return instance;
}

}  // namespace packbench::testing
