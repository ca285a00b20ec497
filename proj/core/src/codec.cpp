#include "packbench/codec.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "packbench/error.hpp"
#include "packbench/generator.hpp"

namespace packbench {
namespace {

using nlohmann::json;

[[noreturn]] void malformed_input(const std::string& what) {
    throw Error(ErrorCode::kMalformedInput, what);
}

[[noreturn]] void malformed_output(const std::string& what) {
    throw Error(ErrorCode::kMalformedOutput, what);
}

json coordinate(double v) {
    double whole = 0.0;
    if (std::modf(v, &whole) == 0.0 && std::fabs(v) < 9.0e15) return static_cast<std::int64_t>(v);
    return v;
}

std::int64_t positive_int(const json& j, const char* what) {
    if (!j.is_number_integer()) malformed_input(std::string(what) + " must be an integer");
    const auto v = j.get<std::int64_t>();
    if (v <= 0) malformed_input(std::string(what) + " must be positive");
    return v;
}

json instance_json(const Instance& instance) {
    json items = json::array();
    for (const auto& item : instance.items) items.push_back({item.width, item.height});
    return {{"capacity", {instance.bin.width, instance.bin.height}}, {"items", std::move(items)}};
}

Instance instance_from_json(const json& j) {
    if (!j.is_object()) malformed_input("instance must be an object");
    if (!j.contains("capacity") || !j.contains("items")) malformed_input("instance needs capacity and items");
    const auto& cap = j.at("capacity");
    if (!cap.is_array() || cap.size() != 2) malformed_input("capacity must be [W,H]");
    Instance instance;
    instance.bin = {positive_int(cap[0], "bin width"), positive_int(cap[1], "bin height")};
    const auto& items = j.at("items");
    if (!items.is_array()) malformed_input("items must be an array");
    instance.items.reserve(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto& it = items[i];
        if (!it.is_array() || it.size() != 2) malformed_input("item must be [w,h]");
        Item item{i, positive_int(it[0], "item width"), positive_int(it[1], "item height")};
        if (item.width > instance.bin.width || item.height > instance.bin.height)
            malformed_input("item " + std::to_string(i) + " does not fit in the bin");
        instance.items.push_back(item);
    }
    return instance;
}

json params_json(const GeneratorParams& p) {
    return {{"bin", {p.bin.width, p.bin.height}},
            {"items", p.items},
            {"max_side", p.max_side},
            {"min_side", p.min_side}};
}

}  // namespace

std::int64_t Instance::total_item_area() const {
    std::int64_t total = 0;
    for (const auto& item : items) total += item.area();
    return total;
}

Instance Instance::from_dims(BinSpec bin,
                             const std::vector<std::pair<std::int64_t, std::int64_t>>& dims) {
    Instance instance;
    instance.bin = bin;
    for (std::size_t i = 0; i < dims.size(); ++i)
        instance.items.push_back({i, dims[i].first, dims[i].second});
    return instance;
}

std::string encode_instance(const Instance& instance) { return instance_json(instance).dump(); }

Instance decode_instance(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        malformed_input(std::string("instance is not valid JSON: ") + e.what());
    }
    return instance_from_json(j);
}

std::string encode_solution(const Solution& solution) {
    json bins = json::array();
    for (const auto& bin : solution.bins) {
        json placements = json::array();
        for (const auto& p : bin.placements)
            placements.push_back({{"item", p.item}, {"x", coordinate(p.x)}, {"y", coordinate(p.y)}});
        bins.push_back({{"placements", std::move(placements)}});
    }
    return json{{"bins", std::move(bins)}}.dump();
}

Solution decode_solution(std::string_view text, const Instance& instance) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        malformed_output(std::string("not a single JSON object: ") + e.what());
    }
    if (!j.is_object() || !j.contains("bins") || !j.at("bins").is_array())
        malformed_output("expected an object with a \"bins\" array");

    Solution solution;
    for (const auto& jb : j.at("bins")) {
        if (!jb.is_object() || !jb.contains("placements") || !jb.at("placements").is_array())
            malformed_output("each bin must be an object with a \"placements\" array");
        Bin bin;
        for (const auto& jp : jb.at("placements")) {
            if (!jp.is_object() || !jp.contains("item") || !jp.contains("x") || !jp.contains("y"))
                malformed_output("each placement needs item, x and y");
            const auto& ji = jp.at("item");
            if (!ji.is_number_integer()) malformed_output("item index must be an integer");
            if (ji.is_number_unsigned() ? ji.get<std::uint64_t>() >= instance.size()
                                        : (ji.get<std::int64_t>() < 0 ||
                                           static_cast<std::uint64_t>(ji.get<std::int64_t>()) >= instance.size()))
                throw Error(ErrorCode::kUnknownItemIndex,
                            "item index " + ji.dump() + " outside 0.." +
                                std::to_string(instance.size() == 0 ? 0 : instance.size() - 1));
            Placement p;
            p.item = ji.get<std::size_t>();
            const auto& jx = jp.at("x");
            const auto& jy = jp.at("y");
            if (!jx.is_number() || !jy.is_number())
                throw Error(ErrorCode::kNonNumericCoordinate,
                            "coordinates of item " + std::to_string(p.item) + " are not numbers");
            p.x = jx.get<double>();
            p.y = jy.get<double>();
            if (!std::isfinite(p.x) || !std::isfinite(p.y))
                throw Error(ErrorCode::kNonNumericCoordinate, "non-finite coordinate");
            bin.placements.push_back(p);
        }
        solution.bins.push_back(std::move(bin));
    }
    return solution;
}

std::string encode_dataset(const Dataset& dataset) {
    json instances = json::array();
    for (const auto& instance : dataset.instances) instances.push_back(instance_json(instance));
    return json{{"generator", kGeneratorName},
                {"instances", std::move(instances)},
                {"params", params_json(dataset.params)},
                {"seed", dataset.seed}}
        .dump();
}

Dataset decode_dataset(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        malformed_input(std::string("dataset is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("instances") || !j.at("instances").is_array())
        malformed_input("dataset needs an instances array");
    Dataset dataset;
    try {
        if (j.contains("seed")) dataset.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("params")) {
            const auto& p = j.at("params");
            dataset.params.items = p.value("items", dataset.params.items);
            dataset.params.min_side = p.value("min_side", dataset.params.min_side);
            dataset.params.max_side = p.value("max_side", dataset.params.max_side);
            if (p.contains("bin"))
                dataset.params.bin = {p.at("bin").at(0).get<std::int64_t>(), p.at("bin").at(1).get<std::int64_t>()};
        }
    } catch (const json::exception& e) {
        malformed_input(std::string("bad dataset header: ") + e.what());
    }
    for (const auto& ji : j.at("instances")) dataset.instances.push_back(instance_from_json(ji));
    return dataset;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

}  // namespace packbench
