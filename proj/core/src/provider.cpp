#include "packbench/provider.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <numeric>

#include "httplib.h"
#include "json.hpp"
#include "packbench/codec.hpp"
#include "packbench/error.hpp"
#include "packbench/random.hpp"

namespace fs = std::filesystem;

namespace packbench {
namespace {

std::vector<std::string> list_files(const fs::path& dir) {
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const auto name = entry.path().filename().string();
        if (name.empty() || name.front() == '.') continue;
        files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
    return files;
}

std::vector<std::size_t> shuffled(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    SplitMix64 rng(seed);
    for (std::size_t i = n; i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i - 1)));
        std::swap(order[i - 1], order[j]);
    }
    return order;
}

std::string excerpt(const std::string& body) {
    return body.size() > 300 ? body.substr(0, 300) + "..." : body;
}

}  // namespace

MockProvider::MockProvider(std::string fixture_dir, std::uint64_t seed, bool cycle)
    : dir_(std::move(fixture_dir)), seed_(seed), cycle_(cycle) {
    const fs::path dir(dir_);
    if (!fs::is_directory(dir)) throw Error(ErrorCode::kConfig, "fixture directory not found: " + dir_);
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_directory()) continue;
        const auto name = entry.path().filename().string();
        if (!name.starts_with("gen-")) continue;
        char* end = nullptr;
        const auto k = std::strtoull(name.c_str() + 4, &end, 10);
        if (end == name.c_str() + 4 || *end != '\0') continue;
        pools_.push_back({static_cast<std::size_t>(k), list_files(entry.path()), 0});
    }
    if (pools_.empty()) pools_.push_back({0, list_files(dir), 0});
    std::sort(pools_.begin(), pools_.end(),
              [](const Pool& a, const Pool& b) { return a.from_generation < b.from_generation; });
}

std::string MockProvider::id() const { return "mock:" + fs::path(dir_).filename().string(); }

MockProvider::Pool& MockProvider::pool_for(std::size_t generation) {
    Pool* chosen = nullptr;
    for (auto& pool : pools_)
        if (pool.from_generation <= generation) chosen = &pool;
    if (!chosen) chosen = &pools_.front();
    return *chosen;
}

std::size_t MockProvider::pool_size(std::size_t generation) const {
    return const_cast<MockProvider*>(this)->pool_for(generation).files.size();
}

std::string MockProvider::generate(const GenerationRequest& request) {
    auto& pool = pool_for(request.generation);
    const auto n = pool.files.size();
    if (n == 0) throw Error(ErrorCode::kFixtureExhausted, "fixture pool is empty in " + dir_);
    const auto pass = pool.calls / n;
    if (pass > 0 && !cycle_)
        throw Error(ErrorCode::kFixtureExhausted,
                    "all " + std::to_string(n) + " fixtures already returned from " + dir_);
    const auto order = shuffled(n, derive_seed(seed_, (pool.from_generation << 32) ^ pass));
    const auto& file = pool.files[order[pool.calls % n]];
    ++pool.calls;
    return read_file(file);
}

std::string MockProvider::save_state() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& pool : pools_) j[std::to_string(pool.from_generation)] = pool.calls;
    return j.dump();
}

void MockProvider::restore_state(const std::string& state) {
    if (state.empty()) return;
    try {
        const auto j = nlohmann::json::parse(state);
        for (auto& pool : pools_) pool.calls = j.value(std::to_string(pool.from_generation), std::uint64_t{0});
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::kConfig, std::string("bad mock provider state: ") + e.what());
    }
}

HttpProvider::HttpProvider(ProviderConfig config) : config_(std::move(config)) {}

std::string HttpProvider::id() const { return "http:" + config_.model; }

std::string HttpProvider::generate(const GenerationRequest& request) {
    const char* key = std::getenv(config_.api_key_env.c_str());
    if (key == nullptr || *key == '\0')
        throw Error(ErrorCode::kCredentialMissing, "environment variable " + config_.api_key_env + " is not set");

    const auto& url = config_.base_url;
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw Error(ErrorCode::kConfig, "base_url needs a scheme: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    const std::string origin = url.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "" : url.substr(path_start);
    while (!path.empty() && path.back() == '/') path.pop_back();
    path += "/chat/completions";

    nlohmann::json body = {
        {"model", request.model.empty() ? config_.model : request.model},
        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", request.prompt}}})},
        {"temperature", request.temperature},
        {"max_tokens", request.max_tokens},
    };

    httplib::Client client(origin);
    const auto timeout = std::chrono::duration<double>(config_.request_timeout_seconds);
    client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    client.set_connection_timeout(std::chrono::seconds(30));
    httplib::Headers headers{{"Authorization", std::string("Bearer ") + key}};
    auto res = client.Post(path, headers, body.dump(), "application/json");
    if (!res)
        throw Error(ErrorCode::kProviderError, "request to " + origin + path + " failed: " + httplib::to_string(res.error()));
    if (res->status != 200)
        throw Error(ErrorCode::kProviderError,
                    "status " + std::to_string(res->status) + ": " + excerpt(res->body));
    try {
        const auto j = nlohmann::json::parse(res->body);
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception&) {
        throw Error(ErrorCode::kProviderError, "status 200 but unexpected body: " + excerpt(res->body));
    }
}

std::unique_ptr<Provider> make_provider(const ProviderConfig& config, std::uint64_t seed) {
    if (config.kind == ProviderKind::kMock)
        return std::make_unique<MockProvider>(config.fixture_dir, seed, config.cycle);
    return std::make_unique<HttpProvider>(config);
}

ProviderKind parse_provider_kind(const std::string& name) {
    if (name == "mock") return ProviderKind::kMock;
    if (name == "http") return ProviderKind::kHttp;
    throw Error(ErrorCode::kConfig, "unknown provider kind '" + name + "' (expected mock or http)");
}

std::string to_string(ProviderKind kind) { return kind == ProviderKind::kMock ? "mock" : "http"; }

}  // namespace packbench
