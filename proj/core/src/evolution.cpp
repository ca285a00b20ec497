#include "packbench/evolution.hpp"

#include <sys/stat.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "json.hpp"
#include "packbench/codec.hpp"
#include "packbench/error.hpp"
#include "packbench/prompts.hpp"
#include "packbench/random.hpp"
#include "packbench/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace packbench {
namespace {

constexpr std::uint64_t kExemplarStream = 0x65786d706c6172ULL;

std::string tiebreak_name(RuntimeTiebreak t) {
    switch (t) {
    case RuntimeTiebreak::kOn: return "on";
    case RuntimeTiebreak::kOff: return "off";
    case RuntimeTiebreak::kAuto: break;
    }
    return "auto";
}

RuntimeTiebreak parse_tiebreak(const std::string& s) {
    if (s == "auto") return RuntimeTiebreak::kAuto;
    if (s == "on") return RuntimeTiebreak::kOn;
    if (s == "off") return RuntimeTiebreak::kOff;
    throw Error(ErrorCode::kConfig, "runtime_tiebreak must be auto, on or off");
}

json config_json(const EvolutionConfig& c) {
    const auto& p = c.provider;
    return {
        {"seed", c.seed},
        {"population", c.population},
        {"generations", c.generations},
        {"top_islands", c.top_islands},
        {"timeout_seconds", c.timeout_seconds},
        {"launcher", c.launcher},
        {"jobs", c.jobs},
        {"runtime_tiebreak", tiebreak_name(c.runtime_tiebreak)},
        {"provider",
         {{"kind", to_string(p.kind)},
          {"base_url", p.base_url},
          {"model", p.model},
          {"temperature", p.temperature},
          {"max_tokens", p.max_tokens},
          {"parallelism", p.parallelism},
          {"request_timeout_seconds", p.request_timeout_seconds},
          {"fixture_dir", p.fixture_dir},
          {"cycle", p.cycle}}},
    };
}

template <typename T>
void take(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& where) {
    for (const auto& [key, _] : j.items()) {
        if (std::find_if(known.begin(), known.end(), [&](const char* k) { return key == k; }) == known.end())
            throw Error(ErrorCode::kConfig, "unknown key '" + key + "' in " + where);
    }
}

EvolutionConfig config_from_json(const json& j) {
    EvolutionConfig c;
    if (!j.is_object()) throw Error(ErrorCode::kConfig, "config must be an object");
    reject_unknown(j, {"seed", "population", "generations", "top_islands", "timeout_seconds", "launcher", "jobs",
                       "runtime_tiebreak", "provider"},
                   "config");
    take(j, "seed", c.seed);
    take(j, "population", c.population);
    take(j, "generations", c.generations);
    take(j, "top_islands", c.top_islands);
    take(j, "timeout_seconds", c.timeout_seconds);
    take(j, "launcher", c.launcher);
    take(j, "jobs", c.jobs);
    if (j.contains("runtime_tiebreak")) c.runtime_tiebreak = parse_tiebreak(j.at("runtime_tiebreak").get<std::string>());
    if (j.contains("provider")) {
        const auto& p = j.at("provider");
        reject_unknown(p, {"kind", "base_url", "model", "temperature", "max_tokens", "parallelism",
                           "request_timeout_seconds", "fixture_dir", "cycle"},
                       "provider");
        if (p.contains("kind")) c.provider.kind = parse_provider_kind(p.at("kind").get<std::string>());
        take(p, "base_url", c.provider.base_url);
        take(p, "model", c.provider.model);
        take(p, "temperature", c.provider.temperature);
        take(p, "max_tokens", c.provider.max_tokens);
        take(p, "parallelism", c.provider.parallelism);
        take(p, "request_timeout_seconds", c.provider.request_timeout_seconds);
        take(p, "fixture_dir", c.provider.fixture_dir);
        take(p, "cycle", c.provider.cycle);
    }
    if (c.population == 0) throw Error(ErrorCode::kConfig, "population must be positive");
    if (c.top_islands == 0) throw Error(ErrorCode::kConfig, "top_islands must be positive");
    if (!(c.timeout_seconds > 0.0)) throw Error(ErrorCode::kConfig, "timeout_seconds must be positive");
    if (c.launcher.empty()) throw Error(ErrorCode::kConfig, "launcher must name a program");
    return c;
}

json score_json(const Score& s) {
    return {{"bins_used", s.bins_used}, {"utilization", s.utilization}, {"runtime_seconds", s.runtime_seconds}};
}

Score score_from_json(const json& j) {
    return {j.at("bins_used").get<double>(), j.at("utilization").get<double>(),
            j.at("runtime_seconds").get<double>()};
}

json opt_score(const std::optional<Score>& s) { return s ? score_json(*s) : json(nullptr); }

std::optional<Score> opt_score_from(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return score_from_json(j.at(key));
}

json record_json(const CandidateRecord& r) {
    return {{"id", r.id},
            {"generation", r.generation},
            {"source", r.source},
            {"provenance", {{"provider", r.provider_id}, {"prompt_hash", r.prompt_hash}}},
            {"score", opt_score(r.score)},
            {"reasons", r.reasons},
            {"bin_utilization", r.bin_utilization}};
}

CandidateRecord record_from_json(const json& j) {
    CandidateRecord r;
    r.id = j.at("id").get<std::string>();
    r.generation = j.at("generation").get<std::size_t>();
    r.source = j.at("source").get<std::string>();
    r.provider_id = j.at("provenance").at("provider").get<std::string>();
    r.prompt_hash = j.at("provenance").at("prompt_hash").get<std::string>();
    r.score = opt_score_from(j, "score");
    r.reasons = j.at("reasons").get<std::vector<std::string>>();
    r.bin_utilization = j.at("bin_utilization").get<std::vector<std::vector<double>>>();
    return r;
}

json outcome_json(const EvalOutcome& o) {
    json j = {{"instance", o.instance_index},
              {"verdict", verdict_name(o.verdict)},
              {"detail", describe(o.verdict)},
              {"wall_time", o.wall_time}};
    if (const auto* v = std::get_if<verdict::Valid>(&o.verdict)) j["score"] = score_json(v->score);
    if (const auto* inv = std::get_if<verdict::Invalid>(&o.verdict)) {
        json vs = json::array();
        for (const auto& viol : inv->violations) {
            vs.push_back({{"kind", to_string(viol.kind)},
                          {"bin", viol.bin ? json(*viol.bin) : json(nullptr)},
                          {"items", viol.items},
                          {"detail", viol.detail}});
        }
        j["violations"] = std::move(vs);
    }
    return j;
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
    for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
        s.replace(pos, from.size(), to);
    return s;
}

void write_atomically(const fs::path& path, const std::string& contents) {
    const auto tmp = path.string() + ".tmp";
    write_file(tmp, contents);
    fs::rename(tmp, path);
}

std::string pad(std::size_t i, int width) {
    auto s = std::to_string(i);
    return std::string(s.size() < static_cast<std::size_t>(width) ? width - s.size() : 0, '0') + s;
}

}  // namespace

EvolutionConfig parse_evolution_config(const std::string& text) {
    try {
        return config_from_json(json::parse(text));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::kConfig, std::string("bad config: ") + e.what());
    }
}

std::optional<std::size_t> RunState::converged_at() const {
    if (!best_so_far || !best_so_far->score) return std::nullopt;
    for (const auto& g : generations) {
        if (g.best_so_far && compare(*g.best_so_far, *best_so_far->score, -1.0) == 0) return g.index;
    }
    return std::nullopt;
}

std::string encode_run_state(const RunState& state) {
    json gens = json::array();
    for (const auto& g : state.generations) {
        json pop = json::array();
        for (const auto& r : g.population) pop.push_back(record_json(r));
        json islands = json::array();
        for (const auto& is : g.islands)
            islands.push_back({{"key", is.key}, {"mean_bins", is.mean_bins()}, {"members", is.members}});
        gens.push_back({{"index", g.index},
                        {"prompt_hash", g.prompt_hash},
                        {"population", std::move(pop)},
                        {"islands", std::move(islands)},
                        {"best_id", g.best_id ? json(*g.best_id) : json(nullptr)},
                        {"best_score", opt_score(g.best_score)},
                        {"exemplars", g.exemplars},
                        {"best_so_far", opt_score(g.best_so_far)}});
    }
    const auto converged = state.converged_at();
    json j = {{"config", config_json(state.config)},
              {"dataset_hash", state.dataset_hash},
              {"generations", std::move(gens)},
              {"best_so_far", state.best_so_far ? record_json(*state.best_so_far) : json(nullptr)},
              {"converged_at_generation", converged ? json(*converged) : json(nullptr)},
              {"provider_state", state.provider_state}};
    return j.dump(2) + "\n";
}

RunState decode_run_state(const std::string& text) {
    try {
        const auto j = json::parse(text);
        RunState state;
        state.config = config_from_json(j.at("config"));
        state.dataset_hash = j.at("dataset_hash").get<std::string>();
        state.provider_state = j.value("provider_state", std::string{});
        for (const auto& jg : j.at("generations")) {
            GenerationRecord g;
            g.index = jg.at("index").get<std::size_t>();
            g.prompt_hash = jg.at("prompt_hash").get<std::string>();
            for (const auto& jr : jg.at("population")) g.population.push_back(record_from_json(jr));
            for (const auto& ji : jg.at("islands"))
                g.islands.push_back({ji.at("key").get<std::int64_t>(), ji.at("members").get<std::vector<std::string>>()});
            if (!jg.at("best_id").is_null()) g.best_id = jg.at("best_id").get<std::string>();
            g.best_score = opt_score_from(jg, "best_score");
            g.exemplars = jg.at("exemplars").get<std::vector<std::string>>();
            g.best_so_far = opt_score_from(jg, "best_so_far");
            state.generations.push_back(std::move(g));
        }
        if (!j.at("best_so_far").is_null()) state.best_so_far = record_from_json(j.at("best_so_far"));
        return state;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::kMalformedInput, std::string("bad run state: ") + e.what());
    }
}

std::int64_t island_key(double mean_bins) { return std::llround(mean_bins * 100.0); }

std::vector<Island> form_islands(std::span<const CandidateRecord> candidates, double runtime_tolerance) {
    std::map<std::int64_t, std::vector<const CandidateRecord*>> groups;
    for (const auto& c : candidates)
        if (c.score) groups[island_key(c.score->bins_used)].push_back(&c);

    std::vector<Island> islands;
    for (auto& [key, members] : groups) {
        std::stable_sort(members.begin(), members.end(), [&](const CandidateRecord* a, const CandidateRecord* b) {
            const auto& sa = *a->score;
            const auto& sb = *b->score;
            const double ra = runtime_tolerance < 0.0 ? 0.0 : sa.runtime_seconds;
            const double rb = runtime_tolerance < 0.0 ? 0.0 : sb.runtime_seconds;
            return std::make_tuple(sa.bins_used, -sa.utilization, ra, a->id) <
                   std::make_tuple(sb.bins_used, -sb.utilization, rb, b->id);
        });
        Island island{key, {}};
        for (const auto* m : members) island.members.push_back(m->id);
        islands.push_back(std::move(island));
    }
    return islands;
}

std::vector<std::string> select_exemplars(std::span<const Island> islands, std::uint64_t seed, std::size_t top) {
    if (islands.empty()) throw Error(ErrorCode::kNoIslands, "no islands to select exemplars from");
    std::vector<const Island*> order;
    for (const auto& is : islands) order.push_back(&is);
    std::stable_sort(order.begin(), order.end(), [](const Island* a, const Island* b) { return a->key < b->key; });

    SplitMix64 rng(seed);
    std::vector<std::string> picks;
    for (std::size_t i = 0; i < order.size() && i < top; ++i) {
        const auto& members = order[i]->members;
        if (members.empty()) continue;
        const auto k = rng.uniform_int(0, static_cast<std::int64_t>(members.size()) - 1);
        picks.push_back(members[static_cast<std::size_t>(k)]);
    }
    return picks;
}

EvolutionRun::EvolutionRun(EvolutionConfig config, Dataset dataset, Provider& provider, fs::path run_dir)
    : dataset_(std::move(dataset)), provider_(&provider), run_dir_(std::move(run_dir)) {
    state_.config = std::move(config);
    state_.dataset_hash = content_hash(encode_dataset(dataset_));
}

EvolutionRun EvolutionRun::resume(Dataset dataset, Provider& provider, fs::path run_dir, std::size_t generations) {
    const auto state_file = run_dir / "run.json";
    if (!fs::exists(state_file)) throw Error(ErrorCode::kIo, "nothing to resume: " + state_file.string() + " missing");
    auto state = decode_run_state(read_file(state_file.string()));
    if (state.dataset_hash != content_hash(encode_dataset(dataset)))
        throw Error(ErrorCode::kConfig, "dataset does not match the one this run started with");
    if (generations != 0) state.config.generations = generations;
    EvolutionRun run(state.config, std::move(dataset), provider, std::move(run_dir));
    run.state_ = std::move(state);
    provider.restore_state(run.state_.provider_state);
    return run;
}

double EvolutionRun::runtime_tolerance() const {
    switch (state_.config.runtime_tiebreak) {
    case RuntimeTiebreak::kOn: return kRuntimeTolerance;
    case RuntimeTiebreak::kOff: return -1.0;
    case RuntimeTiebreak::kAuto: break;
    }
    return state_.config.provider.kind == ProviderKind::kMock ? -1.0 : kRuntimeTolerance;
}

std::string EvolutionRun::next_prompt() const {
    auto rules = rules_for(dataset_);
    rules.show_runtime = runtime_tolerance() >= 0.0;
    const std::vector<std::string>* ids = nullptr;
    for (auto it = state_.generations.rbegin(); it != state_.generations.rend(); ++it) {
        if (!it->exemplars.empty()) {
            ids = &it->exemplars;
            break;
        }
    }
    if (ids == nullptr) return build_initial_prompt(rules);

    std::vector<Exemplar> exemplars;
    for (const auto& id : *ids) {
        for (const auto& g : state_.generations) {
            for (const auto& r : g.population) {
                if (r.id == id && r.score) exemplars.push_back({r.id, r.source, *r.score});
            }
        }
    }
    std::stable_sort(exemplars.begin(), exemplars.end(),
                     [](const Exemplar& a, const Exemplar& b) { return compare(a.score, b.score, -1.0) < 0; });
    return build_refinement_prompt(rules, exemplars);
}

void EvolutionRun::run_generation() {
    const auto& cfg = state_.config;
    const std::size_t g = state_.generations.size();
    const fs::path gen_dir = run_dir_ / ("gen-" + std::to_string(g));
    fs::create_directories(gen_dir);

    GenerationRecord record;
    record.index = g;
    const std::string prompt = next_prompt();
    record.prompt_hash = content_hash(prompt);
    write_file((gen_dir / "prompt.txt").string(), prompt);

    // Ask the provider for the whole population first.
    std::vector<std::optional<std::string>> responses(cfg.population);
    std::string provider_failure;
    std::mutex failure_mutex;
    auto request_one = [&](std::size_t i) {
        GenerationRequest req{prompt, cfg.provider.temperature, cfg.provider.max_tokens, cfg.provider.model, g};
        try {
            responses[i] = provider_->generate(req);
        } catch (const Error& e) {
            std::lock_guard lock(failure_mutex);
            if (provider_failure.empty()) provider_failure = std::string(to_string(e.code())) + ": " + e.what();
            if (e.code() != ErrorCode::kProviderError && e.code() != ErrorCode::kCredentialMissing &&
                e.code() != ErrorCode::kFixtureExhausted)
                throw;
        }
    };
    if (provider_->concurrent()) {
        parallel_for(cfg.population, std::max<std::size_t>(cfg.provider.parallelism, 1), request_one);
    } else {
        for (std::size_t i = 0; i < cfg.population && provider_failure.empty(); ++i) request_one(i);
    }

    std::vector<CandidateSpec> specs(cfg.population);
    for (std::size_t i = 0; i < cfg.population; ++i) {
        CandidateRecord r;
        r.id = "g" + std::to_string(g) + "-c" + pad(i, 2);
        r.generation = g;
        r.provider_id = provider_->id();
        r.prompt_hash = record.prompt_hash;
        if (responses[i]) {
            try {
                r.source = extract_code(*responses[i]);
            } catch (const Error& e) {
                r.source = *responses[i];
                r.reasons.push_back(std::string(to_string(e.code())) + ": " + e.what());
            }
            const auto src_path = fs::absolute(gen_dir / ("candidate-" + pad(i, 2) + ".src"));
            write_file(src_path.string(), r.source);
            ::chmod(src_path.c_str(), 0755);
            specs[i].id = r.id;
            for (const auto& arg : cfg.launcher) specs[i].launch.push_back(replace_all(arg, "{source}", src_path.string()));
            specs[i].timeout_seconds = cfg.timeout_seconds;
            specs[i].workdir = fs::absolute(gen_dir).string();
        }
        record.population.push_back(std::move(r));
    }

    if (!provider_failure.empty()) {
        json partial = {{"generation", g}, {"partial", true}, {"error", provider_failure}};
        write_file((gen_dir / "outcomes.json").string(), partial.dump(2) + "\n");
        throw Error(ErrorCode::kProviderError, "generation " + std::to_string(g) + " aborted: " + provider_failure);
    }

    // Evaluate every (candidate, instance) pair; aggregate after the barrier.
    std::vector<std::size_t> runnable;
    for (std::size_t i = 0; i < cfg.population; ++i)
        if (record.population[i].reasons.empty()) runnable.push_back(i);
    const std::size_t n_inst = dataset_.instances.size();
    std::vector<std::vector<EvalOutcome>> outcomes(cfg.population, std::vector<EvalOutcome>(n_inst));
    const std::size_t jobs = cfg.jobs == 0 ? default_jobs() : cfg.jobs;
    parallel_for(runnable.size() * n_inst, jobs, [&](std::size_t k) {
        const auto c = runnable[k / n_inst];
        const auto inst = k % n_inst;
        outcomes[c][inst] = run_candidate(specs[c], dataset_.instances[inst], inst);
    });

    json outcome_log = json::array();
    for (std::size_t i = 0; i < cfg.population; ++i) {
        auto& r = record.population[i];
        json entry = {{"id", r.id}};
        if (r.reasons.empty()) {
            auto eval = summarize(std::move(outcomes[i]));
            r.score = eval.aggregate;
            r.reasons = eval.reasons;
            json per = json::array();
            for (const auto& o : eval.outcomes) {
                per.push_back(outcome_json(o));
                if (const auto* v = std::get_if<verdict::Valid>(&o.verdict)) r.bin_utilization.push_back(v->bin_utilization);
            }
            if (!r.score) r.bin_utilization.clear();
            entry["outcomes"] = std::move(per);
        }
        entry["valid"] = r.valid();
        entry["aggregate"] = opt_score(r.score);
        entry["reasons"] = r.reasons;
        outcome_log.push_back(std::move(entry));
    }
    write_file((gen_dir / "outcomes.json").string(), outcome_log.dump(2) + "\n");

    const double tol = runtime_tolerance();
    record.islands = form_islands(record.population, tol);

    const CandidateRecord* best = nullptr;
    for (const auto& r : record.population) {
        if (r.score && (best == nullptr || compare(*r.score, *best->score, tol) < 0)) best = &r;
    }
    if (best) {
        record.best_id = best->id;
        record.best_score = best->score;
        if (!state_.best_so_far || compare(*best->score, *state_.best_so_far->score, tol) < 0)
            state_.best_so_far = *best;
    }
    if (state_.best_so_far) record.best_so_far = state_.best_so_far->score;

    if (!record.islands.empty())
        record.exemplars = select_exemplars(record.islands, derive_seed(cfg.seed ^ kExemplarStream, g), cfg.top_islands);

    state_.generations.push_back(std::move(record));
    state_.provider_state = provider_->save_state();
    persist();
}

void EvolutionRun::persist() const {
    fs::create_directories(run_dir_);
    write_atomically(run_dir_ / "run.json", encode_run_state(state_));
    const auto dataset_file = run_dir_ / "dataset.json";
    if (!fs::exists(dataset_file)) write_file(dataset_file.string(), encode_dataset(dataset_));
}

const RunState& EvolutionRun::run() {
    if (state_.generations.empty()) {
        if (fs::exists(run_dir_ / "run.json"))
            throw Error(ErrorCode::kConfig, run_dir_.string() + " already holds a run; resume it or pick a new directory");
        persist();
    }
    while (!finished()) run_generation();
    emit_report(state_, dataset_, run_dir_);
    return state_;
}

RunState run_evolution(const EvolutionConfig& config, const Dataset& dataset, Provider& provider,
                       const fs::path& run_dir) {
    EvolutionRun run(config, dataset, provider, run_dir);
    return run.run();
}

}  // namespace packbench
