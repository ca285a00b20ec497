// Acceptance suite: `acceptance --criterion N` prints one line per check and
// a final verdict line for criterion N; exit status 0 iff every check passed.
#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <thread>

#include "json.hpp"
#include "packbench/baselines.hpp"
#include "packbench/codec.hpp"
#include "packbench/evolution.hpp"
#include "packbench/generator.hpp"
#include "packbench/metrics.hpp"
#include "packbench/oracle.hpp"
#include "packbench/protocol.hpp"
#include "packbench/report.hpp"
#include "packbench/validator.hpp"
#include "test_support.hpp"

using namespace packbench;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSuiteSeed = 1;

class Checks {
public:
    explicit Checks(int criterion) : criterion_(criterion) {}

    bool check(const std::string& name, bool ok, const std::string& detail) {
        std::printf("criterion %d.%s: %s  %s\n", criterion_, name.c_str(), ok ? "PASS" : "FAIL", detail.c_str());
        std::fflush(stdout);
        all_ &= ok;
        return ok;
    }

    int finish() const {
        std::printf("criterion %d: %s\n", criterion_, all_ ? "PASS" : "FAIL");
        return all_ ? 0 : 1;
    }

private:
    int criterion_;
    bool all_ = true;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Dataset seeded_suite() { return gen_dataset(kSuiteSeed, 20, GeneratorParams{50, 10, 50, {200, 100}}); }

bool has_kind(const std::vector<Violation>& vs, ViolationKind kind) {
    for (const auto& v : vs)
        if (v.kind == kind) return true;
    return false;
}

int criterion_1() {
    Checks c(1);
    const auto suite = seeded_suite();
    const auto t0 = std::chrono::steady_clock::now();
    std::map<BaselineAlgo, Score> mean;
    double slowest = 0;
    for (auto algo : {BaselineAlgo::kFff, BaselineAlgo::kHff}) {
        std::vector<Score> scores;
        for (const auto& instance : suite.instances) {
            const auto s0 = std::chrono::steady_clock::now();
            const auto solution = solve_baseline(algo, instance);
            const double dt = seconds_since(s0);
            slowest = std::max(slowest, dt);
            if (!is_valid(instance, solution)) c.check("valid", false, std::string(to_string(algo)) + " output invalid");
            scores.push_back(score_solution(instance, solution, dt));
        }
        mean[algo] = aggregate(scores);
    }
    const auto& fff = mean[BaselineAlgo::kFff];
    const auto& hff = mean[BaselineAlgo::kHff];
    c.check("fff_bins", fff.bins_used >= 14.5 && fff.bins_used <= 17.5,
            fmt("FFF mean bins %.2f, required [14.50, 17.50]", fff.bins_used));
    c.check("hff_bins", hff.bins_used >= 14.5 && hff.bins_used <= 17.5,
            fmt("HFF mean bins %.2f, required [14.50, 17.50]", hff.bins_used));
    c.check("fff_utilization", std::abs(fff.utilization - 0.76) <= 0.06,
            fmt("FFF mean utilization %.4f, required 0.76 +/- 0.06", fff.utilization));
    c.check("hff_utilization", std::abs(hff.utilization - 0.78) <= 0.06,
            fmt("HFF mean utilization %.4f, required 0.78 +/- 0.06", hff.utilization));
    c.check("hff_vs_fff", hff.bins_used <= fff.bins_used + 0.5,
            fmt("HFF %.2f <= FFF %.2f + 0.5", hff.bins_used, fff.bins_used));
    c.check("runtime", slowest < 1.0, fmt("slowest single-instance solve %.6f s, required < 1 s", slowest));
    std::printf("  (area lower bound mean %.2f; suite time %.3f s)\n",
                [&] {
                    double sum = 0;
                    for (const auto& i : suite.instances) sum += static_cast<double>(area_lower_bound(i));
                    return sum / static_cast<double>(suite.instances.size());
                }(),
                seconds_since(t0));
    return c.finish();
}

int criterion_2() {
    Checks c(2);
    c.check("substituted", true, "live-model result row is not reproducible offline; covered by criteria 3-6");
    return c.finish();
}

// Empty when no bin satisfies the mutation's precondition.
std::optional<Solution> mutate(const Instance& instance, Solution s, ViolationKind kind, SplitMix64& rng) {
    std::vector<std::size_t> candidates;
    for (std::size_t b = 0; b < s.bins.size(); ++b)
        if (s.bins[b].placements.size() >= (kind == ViolationKind::kOverlap ? 2u : 1u)) candidates.push_back(b);
    if (candidates.empty()) return std::nullopt;
    auto& bin = s.bins[candidates[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(candidates.size()) - 1))]];
    const auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1)); };
    switch (kind) {
    case ViolationKind::kOverlap: {
        const auto i = pick(bin.placements.size());
        auto j = pick(bin.placements.size() - 1);
        if (j >= i) ++j;
        const auto& a = instance.items[bin.placements[i].item];
        const double fx = static_cast<double>(rng.uniform_int(0, 99)) / 100.0;
        const double fy = static_cast<double>(rng.uniform_int(0, 99)) / 100.0;
        bin.placements[j].x = bin.placements[i].x + fx * static_cast<double>(a.width);
        bin.placements[j].y = bin.placements[i].y + fy * static_cast<double>(a.height);
        break;
    }
    case ViolationKind::kContainment: {
        auto& p = bin.placements[pick(bin.placements.size())];
        const auto& it = instance.items[p.item];
        switch (rng.uniform_int(0, 3)) {
        case 0: p.x = static_cast<double>(instance.bin.width - it.width) + 0.5 + static_cast<double>(rng.uniform_int(0, 20)); break;
        case 1: p.y = static_cast<double>(instance.bin.height - it.height) + 0.5 + static_cast<double>(rng.uniform_int(0, 20)); break;
        case 2: p.x = -1.0 - static_cast<double>(rng.uniform_int(0, 20)); break;
        default: p.y = -1e-3; break;
        }
        break;
    }
    case ViolationKind::kDuplicateItem:
        s.bins.push_back({{bin.placements[pick(bin.placements.size())]}});
        break;
    case ViolationKind::kMissingItem:
        bin.placements.erase(bin.placements.begin() + static_cast<std::ptrdiff_t>(pick(bin.placements.size())));
        break;
    default:
        break;
    }
    return s;
}

int criterion_3() {
    Checks c(3);
    const auto t0 = std::chrono::steady_clock::now();
    SplitMix64 rng(3003);
    const ViolationKind kinds[] = {ViolationKind::kOverlap, ViolationKind::kContainment, ViolationKind::kDuplicateItem,
                                   ViolationKind::kMissingItem};
    std::map<ViolationKind, int> flagged, tried;
    std::size_t clean_checked = 0, false_positives = 0;
    auto clean = [&](const Instance& instance, const Solution& s) {
        ++clean_checked;
        if (!validate(instance, s).empty()) ++false_positives;
    };
    for (int m = 0; m < 1000; ++m) {
        const auto kind = kinds[m % 4];
        std::optional<Solution> mutated;
        Instance instance;
        while (!mutated) {
            const auto n = static_cast<std::size_t>(rng.uniform_int(2, 80));
            instance = packbench::testing::random_rect_instance(rng, n, {200, 100}, 5);
            const auto base = rng.uniform_int(0, 1) ? pack_fff(instance) : pack_hff(instance);
            clean(instance, base);
            mutated = mutate(instance, base, kind, rng);
        }
        ++tried[kind];
        if (has_kind(validate(instance, *mutated), kind)) ++flagged[kind];
    }
    for (const auto& instance : seeded_suite().instances) {
        clean(instance, pack_fff(instance));
        clean(instance, pack_hff(instance));
    }
    for (int t = 0; t < 100; ++t) {
        const auto n = static_cast<std::size_t>(rng.uniform_int(1, 5));
        const auto instance = packbench::testing::random_rect_instance(rng, n, {200, 100}, 20);
        clean(instance, exact_min_bins(instance).witness);
    }
    for (auto kind : kinds)
        c.check(std::string("flag_") + std::string(to_string(kind)), flagged[kind] == tried[kind],
                std::to_string(flagged[kind]) + "/" + std::to_string(tried[kind]) + " mutations flagged with the right kind");
    c.check("false_positives", false_positives == 0,
            std::to_string(false_positives) + " false positives over " + std::to_string(clean_checked) + " clean solutions");
    const double dt = seconds_since(t0);
    c.check("runtime", dt < 30.0, fmt("%.2f s, required < 30 s", dt));
    return c.finish();
}

int criterion_4() {
    Checks c(4);
    const auto t0 = std::chrono::steady_clock::now();
    SplitMix64 rng(4004);
    int bound_ok = 0, fff_ok = 0, hff_ok = 0, witness_ok = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        const auto n = static_cast<std::size_t>(rng.uniform_int(1, 6));
        Instance instance;
        instance.bin = {200, 100};
        const bool squares = t % 2 == 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (squares) {
                const auto s = rng.uniform_int(40, 100);
                instance.items.push_back({i, s, s});
            } else {
                instance.items.push_back({i, rng.uniform_int(20, 200), rng.uniform_int(20, 100)});
            }
        }
        const auto exact = exact_min_bins(instance);
        bound_ok += area_lower_bound(instance) <= exact.bins;
        fff_ok += exact.bins <= bins_used(pack_fff(instance));
        hff_ok += exact.bins <= bins_used(pack_hff(instance));
        witness_ok += is_valid(instance, exact.witness) && bins_used(exact.witness) == exact.bins;
    }
    auto frac = [&](int k) { return std::to_string(k) + "/" + std::to_string(trials); };
    c.check("lower_bound", bound_ok == trials, "area_lower_bound <= exact on " + frac(bound_ok));
    c.check("fff", fff_ok == trials, "exact <= FFF on " + frac(fff_ok));
    c.check("hff", hff_ok == trials, "exact <= HFF on " + frac(hff_ok));
    c.check("witness", witness_ok == trials, "witness validator-clean on " + frac(witness_ok));
    const double dt = seconds_since(t0);
    c.check("runtime", dt < 300.0, fmt("%.2f s, required < 300 s", dt));
    return c.finish();
}

nlohmann::json without_runtime(nlohmann::json j) {
    if (j.is_object()) {
        nlohmann::json out = nlohmann::json::object();
        for (auto& [k, v] : j.items())
            if (k != "runtime_seconds" && k != "wall_time") out[k] = without_runtime(v);
        return out;
    }
    if (j.is_array()) {
        nlohmann::json out = nlohmann::json::array();
        for (auto& v : j) out.push_back(without_runtime(v));
        return out;
    }
    return j;
}

int criterion_5() {
    Checks c(5);
    const auto t0 = std::chrono::steady_clock::now();
    packbench::testing::TempDir tmp;
    const std::vector<std::pair<std::string, std::string>> pool{
        {"fff", "--algo fff"},         {"hff", "--algo hff"},          {"nfdh", "--algo nfdh"},
        {"one-per-bin", "--algo one-per-bin"}, {"overlap", "--fault overlap"}, {"prose", "--fault prose"},
        {"crash", "--fault crash"}};
    const auto fixtures = tmp / "pool";
    for (const auto& [name, args] : pool)
        packbench::testing::write_text(fixtures / ("response-" + name + ".md"), packbench::testing::refcand_response(args));

    EvolutionConfig config;
    config.seed = 7;
    config.population = 7;
    config.generations = 6;
    config.launcher = {"/bin/sh", "{source}"};
    config.provider.kind = ProviderKind::kMock;
    config.provider.fixture_dir = fixtures.string();
    config.provider.cycle = true;
    const auto suite = seeded_suite();

    std::vector<RunState> runs;
    for (const char* name : {"run-a", "run-b"}) {
        MockProvider provider(fixtures.string(), config.seed, true);
        runs.push_back(run_evolution(config, suite, provider, tmp / name));
    }
    const auto a = without_runtime(nlohmann::json::parse(read_file((tmp / "run-a/run.json").string())));
    const auto b = without_runtime(nlohmann::json::parse(read_file((tmp / "run-b/run.json").string())));
    c.check("identical_state", a == b, "run.json of two identical mock runs equal modulo runtime fields");

    bool monotone = true;
    std::string seq;
    std::optional<Score> prev;
    for (const auto& g : runs[0].generations) {
        if (!g.best_so_far) {
            monotone = false;
            continue;
        }
        if (prev && compare(*g.best_so_far, *prev, -1.0) > 0) monotone = false;
        prev = g.best_so_far;
        seq += fmt("%.2f ", g.best_so_far->bins_used);
    }
    c.check("non_worsening", monotone, "best-so-far mean bins by generation: " + seq);

    // k: the best pool member, evaluated on its own outside the evolution loop.
    std::optional<Score> k;
    std::string k_name;
    for (const auto& [name, args] : pool) {
        const auto script = packbench::testing::refcand_script(tmp.path(), name + ".sh", args);
        const auto eval = evaluate_on_dataset({name, {"/bin/sh", script.string()}, 10.0, {}}, suite, default_jobs());
        if (eval.aggregate && (!k || compare(*eval.aggregate, *k, -1.0) < 0)) {
            k = eval.aggregate;
            k_name = name;
        }
    }
    const auto& best = runs[0].best_so_far;
    const bool exact = k && best && best->score && best->score->bins_used == k->bins_used;
    c.check("final_best_is_k", exact,
            fmt("final best_so_far mean bins %.4f, best pool member (", best && best->score ? best->score->bins_used : -1.0) +
                k_name + fmt(") averages %.4f", k ? k->bins_used : -1.0));
    const double dt = seconds_since(t0);
    c.check("runtime", dt < 120.0, fmt("%.2f s, required < 120 s", dt));
    return c.finish();
}

int live_matching(const std::string& needle) {
    int count = 0;
    for (const auto& entry : fs::directory_iterator("/proc")) {
        const auto name = entry.path().filename().string();
        if (name.find_first_not_of("0123456789") != std::string::npos) continue;
        std::ifstream cmd(entry.path() / "cmdline");
        const std::string cmdline{std::istreambuf_iterator<char>(cmd), std::istreambuf_iterator<char>()};
        if (cmdline.find(needle) == std::string::npos) continue;
        std::ifstream stat(entry.path() / "stat");
        std::string line;
        std::getline(stat, line);
        const auto close = line.rfind(')');
        if (close != std::string::npos && close + 2 < line.size() && line[close + 2] == 'Z') continue;
        ++count;
    }
    return count;
}

int criterion_6() {
    Checks c(6);
    auto small = gen_dataset(kSuiteSeed, 3, {});
    auto spec = [](const std::string& id, const std::string& args, double timeout = 10.0) {
        CandidateSpec s{id, {"/bin/sh", "-c", "exec \"" PACKBENCH_REFCAND "\" " + args}, timeout, {}};
        return s;
    };
    struct Case {
        std::string fault;
        std::string expected;
        double timeout;
    };
    const std::vector<Case> cases{{"sleep --sleep 60", "TimedOut", 1.0},   {"crash", "Crashed", 10.0},
                                  {"prose", "Malformed", 10.0},           {"truncate", "Malformed", 10.0},
                                  {"overlap", "Invalid", 10.0},           {"out-of-bounds", "Invalid", 10.0},
                                  {"duplicate", "Invalid", 10.0},         {"missing", "Invalid", 10.0},
                                  {"spawn-orphan --sleep 60", "TimedOut", 1.0}};
    for (const auto& k : cases) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto eval = evaluate_on_dataset(spec(k.fault, "--fault " + k.fault, k.timeout), small, 1);
        const double dt = seconds_since(t0);
        bool right = eval.disqualified();
        for (const auto& o : eval.outcomes) right &= verdict_name(o.verdict) == k.expected;
        const double reap_budget = static_cast<double>(small.instances.size()) * (k.timeout + 1.0);
        c.check("verdict[" + k.fault.substr(0, k.fault.find(' ')) + "]", right && dt < reap_budget,
                "expected " + k.expected + " on every instance, got " + verdict_name(eval.outcomes[0].verdict) +
                    (eval.disqualified() ? ", disqualified" : ", NOT disqualified") + fmt(", %.2f s", dt));
    }
    int live = 0;
    for (int i = 0; i < 50; ++i) {
        live = live_matching("37.25");
        if (live == 0) break;
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    c.check("no_orphans", live == 0, std::to_string(live) + " leftover candidate processes");

    const auto suite = seeded_suite();
    for (auto algo : {BaselineAlgo::kFff, BaselineAlgo::kHff}) {
        const std::string name = algo == BaselineAlgo::kFff ? "fff" : "hff";
        const auto eval = evaluate_on_dataset(spec(name, "--algo " + name), suite, default_jobs());
        std::vector<Score> native;
        for (const auto& instance : suite.instances) native.push_back(score_solution(instance, solve_baseline(algo, instance), 0));
        const auto expected = aggregate(native);
        const bool same = eval.aggregate && eval.aggregate->bins_used == expected.bins_used &&
                          eval.aggregate->utilization == expected.utilization;
        c.check("reference_" + name, same,
                fmt("wrapped %.4f bins / %.6f utilization", eval.aggregate ? eval.aggregate->bins_used : -1.0,
                    eval.aggregate ? eval.aggregate->utilization : -1.0) +
                    fmt(" vs native %.4f / %.6f", expected.bins_used, expected.utilization));
    }
    return c.finish();
}

int criterion_7() {
    Checks c(7);
    const auto summary = summarize_baseline(BaselineAlgo::kHff, seeded_suite());
    const auto [first, last] = first_last_utilization(summary.bin_utilization);
    c.check("hff_profile", last < first, fmt("HFF mean first-bin utilization %.4f, mean last-bin %.4f", first, last));
    return c.finish();
}

}  // namespace

int main(int argc, char** argv) {
    int criterion = 0;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::strcmp(argv[i], "--criterion") == 0) criterion = std::atoi(argv[i + 1]);
    try {
        switch (criterion) {
        case 1: return criterion_1();
        case 2: return criterion_2();
        case 3: return criterion_3();
        case 4: return criterion_4();
        case 5: return criterion_5();
        case 6: return criterion_6();
        case 7: return criterion_7();
        default:
            std::fprintf(stderr, "usage: acceptance --criterion N (N in 1..7)\n");
            return 2;
        }
    } catch (const std::exception& e) {
        std::printf("criterion %d: FAIL  unexpected error: %s\n", criterion, e.what());
        return 1;
    }
}
