#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace packbench {

struct GenerationRequest {
    std::string prompt;
    double temperature = 1.0;
    int max_tokens = 4096;
    std::string model;
    std::size_t generation = 0;  // lets the mock pick a per-generation pool
};

enum class ProviderKind { kMock, kHttp };

struct ProviderConfig {
    ProviderKind kind = ProviderKind::kMock;
    // http
    std::string base_url = "https://api.openai.com/v1";
    std::string model = "gpt-4o";
    std::string api_key_env = "PACKBENCH_API_KEY";
    double request_timeout_seconds = 120.0;
    // shared
    double temperature = 1.0;
    int max_tokens = 4096;
    std::size_t parallelism = 4;
    // mock
    std::string fixture_dir;
    bool cycle = false;
};

class Provider {
public:
    virtual ~Provider() = default;

    virtual std::string id() const = 0;
    virtual std::string generate(const GenerationRequest& request) = 0;

    /// Whether generate() may be called from several threads at once.
    virtual bool concurrent() const { return false; }

    /// Opaque cursor so a resumed run continues the same response sequence.
    virtual std::string save_state() const { return {}; }
    virtual void restore_state(const std::string& /*state*/) {}
};

/// Replays fixture files. A fixture directory holds response files directly,
/// or `gen-<k>/` sub-pools; generation g draws from the highest k <= g.
/// Within a pool, each pass over the files follows a SplitMix64 shuffle
/// keyed on (seed, pass). Without `cycle`, exhausting a pool throws
/// kFixtureExhausted.
class MockProvider final : public Provider {
public:
    MockProvider(std::string fixture_dir, std::uint64_t seed, bool cycle = false);

    std::string id() const override;
    std::string generate(const GenerationRequest& request) override;
    std::string save_state() const override;
    void restore_state(const std::string& state) override;

    std::size_t pool_size(std::size_t generation) const;

private:
    struct Pool {
        std::size_t from_generation = 0;
        std::vector<std::string> files;
        std::uint64_t calls = 0;
    };

    Pool& pool_for(std::size_t generation);

    std::string dir_;
    std::uint64_t seed_;
    bool cycle_;
    std::vector<Pool> pools_;  // ascending from_generation
};

/// Chat-completion style endpoint: POST <base_url>/chat/completions with a
/// bearer credential read from the configured environment variable.
class HttpProvider final : public Provider {
public:
    explicit HttpProvider(ProviderConfig config);

    std::string id() const override;
    std::string generate(const GenerationRequest& request) override;
    bool concurrent() const override { return true; }

private:
    ProviderConfig config_;
};

std::unique_ptr<Provider> make_provider(const ProviderConfig& config, std::uint64_t seed);

ProviderKind parse_provider_kind(const std::string& name);
std::string to_string(ProviderKind kind);

}  // namespace packbench
