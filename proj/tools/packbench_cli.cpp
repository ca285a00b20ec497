// packbench: command-line front end.
//
// Exit status: 0 success, 1 validation failure, 2 usage error,
// 3 provider or runtime error.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "packbench/baselines.hpp"
#include "packbench/codec.hpp"
#include "packbench/error.hpp"
#include "packbench/evolution.hpp"
#include "packbench/generator.hpp"
#include "packbench/metrics.hpp"
#include "packbench/oracle.hpp"
#include "packbench/provider.hpp"
#include "packbench/report.hpp"
#include "packbench/validator.hpp"

namespace fs = std::filesystem;
using namespace packbench;

namespace {

enum Exit : int { kOk = 0, kInvalid = 1, kUsage = 2, kRuntime = 3 };

int exit_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::kBadParams:
    case ErrorCode::kConfig:
    case ErrorCode::kMalformedInput:
    case ErrorCode::kTooLarge:
        return kUsage;
    default:
        return kRuntime;
    }
}

BinSpec parse_bin(const std::string& text) {
    const auto x = text.find('x');
    try {
        if (x == std::string::npos) throw std::invalid_argument(text);
        std::size_t used = 0;
        const auto w = std::stoll(text.substr(0, x), &used);
        if (used != x) throw std::invalid_argument(text);
        const auto rest = text.substr(x + 1);
        const auto h = std::stoll(rest, &used);
        if (used != rest.size()) throw std::invalid_argument(text);
        return {w, h};
    } catch (const std::exception&) {
        throw Error(ErrorCode::kBadParams, "--bin expects WxH, got '" + text + "'");
    }
}

void append_report_row(const std::string& path, const MethodSummary& row) {
    std::string contents;
    if (fs::exists(path)) contents = read_file(path);
    if (contents.empty()) contents = std::string(kReportHeader) + "\n";
    if (contents.back() != '\n') contents += "\n";
    contents += report_csv_row(row) + "\n";
    write_file(path, contents);
}

struct Options {
    bool json_errors = false;

    // gen
    std::uint64_t seed = 0;
    std::size_t count = 20;
    std::size_t items = 50;
    std::int64_t min_side = 10;
    std::int64_t max_side = 50;
    std::string bin = "200x100";
    std::string out;

    // solve / validate / oracle
    std::string algo = "hff";
    std::string dataset;
    std::string instance;
    std::string solution;
    std::string report;
    std::size_t max_n = kOracleDefaultMaxItems;

    // evolve
    std::string config;
    std::string provider;
    std::optional<std::uint64_t> evolve_seed;
    std::size_t generations = 0;
    std::size_t jobs = 0;
    bool resume = false;

    // report
    std::string rundir;
    std::string format = "table";
};

int cmd_gen(const Options& o) {
    GeneratorParams params{o.items, o.min_side, o.max_side, parse_bin(o.bin)};
    const auto dataset = gen_dataset(o.seed, o.count, params);
    const auto text = encode_dataset(dataset) + "\n";
    if (o.out.empty() || o.out == "-") std::cout << text;
    else write_file(o.out, text);
    return kOk;
}

int cmd_solve(const Options& o) {
    const auto algo = parse_baseline_algo(o.algo);
    if (!o.instance.empty()) {
        const auto instance = decode_instance(read_file(o.instance));
        const auto text = encode_solution(solve_baseline(algo, instance)) + "\n";
        if (o.out.empty() || o.out == "-") std::cout << text;
        else write_file(o.out, text);
        return kOk;
    }
    if (o.dataset.empty()) throw Error(ErrorCode::kBadParams, "solve needs --dataset or --instance");
    const auto dataset = decode_dataset(read_file(o.dataset));
    std::vector<Solution> solutions;
    const auto summary = summarize_baseline(algo, dataset, &solutions);
    for (std::size_t k = 0; k < solutions.size(); ++k) {
        if (!is_valid(dataset.instances[k], solutions[k]))
            throw Error(ErrorCode::kIo, "internal error: baseline produced an invalid solution");
    }
    if (!o.out.empty()) {
        fs::create_directories(o.out);
        for (std::size_t k = 0; k < solutions.size(); ++k)
            write_file((fs::path(o.out) / ("solution-" + std::to_string(k) + ".json")).string(),
                       encode_solution(solutions[k]) + "\n");
        const std::vector<MethodSummary> rows{summary};
        write_file((fs::path(o.out) / "report.csv").string(), report_csv(rows));
        write_file((fs::path(o.out) / "profile.csv").string(), profile_csv(rows));
    }
    if (!o.report.empty()) append_report_row(o.report, summary);
    const std::vector<MethodSummary> rows{summary};
    std::cout << report_table(rows);
    return kOk;
}

int cmd_validate(const Options& o) {
    const auto instance = decode_instance(read_file(o.instance));
    Solution solution;
    try {
        solution = decode_solution(read_file(o.solution), instance);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::kIo) throw;
        std::cout << to_string(e.code()) << ": " << e.what() << "\n";
        return kInvalid;
    }
    const auto violations = validate(instance, solution);
    for (const auto& v : violations) {
        std::cout << to_string(v.kind);
        if (v.bin) std::cout << " bin=" << *v.bin;
        std::cout << " items=[";
        for (std::size_t i = 0; i < v.items.size(); ++i) std::cout << (i ? "," : "") << v.items[i];
        std::cout << "] " << v.detail << "\n";
    }
    if (!violations.empty()) return kInvalid;
    std::printf("valid: %zu bins, utilization %.4f\n", bins_used(solution), total_utilization(instance, solution));
    return kOk;
}

int cmd_oracle(const Options& o) {
    const auto instance = decode_instance(read_file(o.instance));
    const auto result = exact_min_bins(instance, o.max_n);
    nlohmann::json j = {{"bins", result.bins},
                        {"area_lower_bound", area_lower_bound(instance)},
                        {"witness", nlohmann::json::parse(encode_solution(result.witness))}};
    std::cout << j.dump() << "\n";
    return kOk;
}

int cmd_evolve(const Options& o) {
    const fs::path config_path(o.config);
    auto config = parse_evolution_config(read_file(o.config));
    if (!o.provider.empty()) config.provider.kind = parse_provider_kind(o.provider);
    if (o.evolve_seed) config.seed = *o.evolve_seed;
    if (o.generations) config.generations = o.generations;
    if (o.jobs) config.jobs = o.jobs;
    if (config.provider.kind == ProviderKind::kMock) {
        if (config.provider.fixture_dir.empty())
            throw Error(ErrorCode::kConfig, "mock provider needs provider.fixture_dir");
        if (fs::path(config.provider.fixture_dir).is_relative())
            config.provider.fixture_dir = (config_path.parent_path() / config.provider.fixture_dir).lexically_normal().string();
    }
    const auto dataset = decode_dataset(read_file(o.dataset));
    auto provider = make_provider(config.provider, config.seed);

    RunState state;
    if (o.resume && fs::exists(fs::path(o.out) / "run.json")) {
        auto run = EvolutionRun::resume(dataset, *provider, o.out, config.generations);
        state = run.run();
    } else {
        state = run_evolution(config, dataset, *provider, o.out);
    }

    std::cout << report_table(parse_report_csv(read_file((fs::path(o.out) / "report.csv").string())));
    if (const auto g = state.converged_at()) std::cout << "final best first reached in generation " << *g << "\n";
    else std::cout << "no valid candidate in any generation\n";
    return kOk;
}

int cmd_report(const Options& o) {
    const auto rows = parse_report_csv(read_file((fs::path(o.rundir) / "report.csv").string()));
    if (o.format == "csv") {
        std::cout << report_csv(rows);
        return kOk;
    }
    std::cout << report_table(rows);
    const auto trend = fs::path(o.rundir) / "trend.csv";
    if (fs::exists(trend)) std::cout << "\nPer-generation trend:\n" << read_file(trend.string());
    const auto profile = fs::path(o.rundir) / "profile.csv";
    if (fs::exists(profile)) {
        std::cout << "\nFirst/last bin utilization:\n";
        std::istringstream in(read_file(profile.string()));
        std::string line;
        while (std::getline(in, line))
            if (line.find(",first,") != std::string::npos || line.find(",last,") != std::string::npos)
                std::cout << "  " << line << "\n";
    }
    return kOk;
}

void print_error(const Options& o, const std::string& code, const std::string& message, int status) {
    if (o.json_errors) {
        std::cerr << nlohmann::json{{"error", {{"code", code}, {"message", message}, {"exit", status}}}}.dump() << "\n";
    } else {
        std::cerr << "packbench: " << code << ": " << message << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"Heuristic 2D bin packing workbench"};
    app.require_subcommand(1);
    app.add_flag("--json-errors", o.json_errors, "Print errors as a JSON object on stderr");

    auto* gen = app.add_subcommand("gen", "Generate a seeded dataset of square items");
    gen->add_option("--seed", o.seed, "Master seed")->required();
    gen->add_option("--count", o.count, "Number of instances")->capture_default_str();
    gen->add_option("--items", o.items, "Items per instance")->capture_default_str();
    gen->add_option("--min-side", o.min_side, "Smallest side (inclusive)")->capture_default_str();
    gen->add_option("--max-side", o.max_side, "Largest side (inclusive)")->capture_default_str();
    gen->add_option("--bin", o.bin, "Bin size WxH")->capture_default_str();
    gen->add_option("--out", o.out, "Output file (default stdout)");

    auto* solve = app.add_subcommand("solve", "Run a baseline heuristic");
    solve->add_option("--algo", o.algo, "fff or hff")->capture_default_str();
    solve->add_option("--dataset", o.dataset, "Dataset file");
    solve->add_option("--instance", o.instance, "Single instance file (solution goes to --out or stdout)");
    solve->add_option("--out", o.out, "Output directory for per-instance solutions");
    solve->add_option("--report", o.report, "Append a report row to this CSV");

    auto* val = app.add_subcommand("validate", "Check a solution against its instance");
    val->add_option("--instance", o.instance, "Instance file")->required();
    val->add_option("--solution", o.solution, "Solution file")->required();

    auto* orc = app.add_subcommand("oracle", "Exact minimum bin count for a tiny instance");
    orc->add_option("--instance", o.instance, "Instance file")->required();
    orc->add_option("--max-n", o.max_n, "Largest instance accepted")->capture_default_str();

    auto* evo = app.add_subcommand("evolve", "Run the evolutionary heuristic search");
    evo->add_option("--config", o.config, "Config file")->required();
    evo->add_option("--dataset", o.dataset, "Dataset file")->required();
    evo->add_option("--out", o.out, "Run directory")->required();
    evo->add_option("--provider", o.provider, "Override provider kind")->check(CLI::IsMember({"mock", "http"}));
    evo->add_option("--seed", o.evolve_seed, "Override run seed");
    evo->add_option("--generations", o.generations, "Override generation budget");
    evo->add_option("--jobs", o.jobs, "Parallel evaluations (default: available cores)");
    evo->add_flag("--resume", o.resume, "Continue the run stored in --out");

    auto* rep = app.add_subcommand("report", "Print the comparison table of a run or solve directory");
    rep->add_option("--rundir", o.rundir, "Run directory")->required();
    rep->add_option("--format", o.format, "csv or table")->check(CLI::IsMember({"csv", "table"}))->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error(o, "UsageError", e.what(), kUsage);
        return kUsage;
    }

    try {
        if (gen->parsed()) return cmd_gen(o);
        if (solve->parsed()) return cmd_solve(o);
        if (val->parsed()) return cmd_validate(o);
        if (orc->parsed()) return cmd_oracle(o);
        if (evo->parsed()) return cmd_evolve(o);
        if (rep->parsed()) return cmd_report(o);
    } catch (const Error& e) {
        const int status = exit_for(e.code());
        print_error(o, std::string(to_string(e.code())), e.what(), status);
        return status;
    } catch (const std::exception& e) {
        print_error(o, "RuntimeError", e.what(), kRuntime);
        return kRuntime;
    }
    return kUsage;
}
