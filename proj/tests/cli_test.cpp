#include <gtest/gtest.h>
#include <sys/wait.h>

#include "json.hpp"
#include "packbench/codec.hpp"
#include "packbench/generator.hpp"
#include "packbench/report.hpp"
#include "test_support.hpp"

namespace packbench {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
    int status = -1;
    std::string out, err;
};

class CliTest : public ::testing::Test {
protected:
    Result cli(const std::string& args, const std::string& env = "") {
        const auto out = tmp_ / "stdout.txt", err = tmp_ / "stderr.txt";
        const std::string cmd = env + " \"" PACKBENCH_CLI "\" " + args + " > \"" + out.string() + "\" 2> \"" +
                                err.string() + "\"";
        const int raw = std::system(cmd.c_str());
        Result r;
        r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
        r.out = read_file(out.string());
        r.err = read_file(err.string());
        return r;
    }
    std::string path(const std::string& name) { return (tmp_ / name).string(); }

    testing::TempDir tmp_;
};

json without_runtime(json j) {
    if (j.is_object()) {
        json out = json::object();
        for (auto& [k, v] : j.items())
            if (k != "runtime_seconds" && k != "wall_time") out[k] = without_runtime(v);
        return out;
    }
    if (j.is_array()) {
        json out = json::array();
        for (auto& v : j) out.push_back(without_runtime(v));
        return out;
    }
    return j;
}

TEST_F(CliTest, GenMatchesLibrary) {
    const auto r = cli("gen --seed 1 --count 20 --items 50 --min-side 10 --max-side 50 --bin 200x100 --out " + path("d.json"));
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(decode_dataset(read_file(path("d.json"))), gen_dataset(1, 20, {}));
    const auto stdout_run = cli("gen --seed 1 --count 2");
    EXPECT_EQ(decode_dataset(stdout_run.out), gen_dataset(1, 2, {}));
}

TEST_F(CliTest, GenBadParamsIsUsageError) {
    EXPECT_EQ(cli("gen --seed 1 --min-side 60 --max-side 50").status, 2);
    EXPECT_EQ(cli("gen --seed 1 --bin 200by100").status, 2);
    EXPECT_EQ(cli("gen --count 3").status, 2);
    EXPECT_EQ(cli("frobnicate").status, 2);
    EXPECT_EQ(cli("").status, 2);
}

TEST_F(CliTest, SolveDatasetWritesSolutionsAndReport) {
    ASSERT_EQ(cli("gen --seed 1 --count 3 --out " + path("d.json")).status, 0);
    const auto r = cli("solve --algo hff --dataset " + path("d.json") + " --out " + path("hff") + " --report " + path("all.csv"));
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_NE(r.out.find("HFF"), std::string::npos);
    for (int k = 0; k < 3; ++k) EXPECT_TRUE(fs::exists(tmp_ / "hff" / ("solution-" + std::to_string(k) + ".json")));
    ASSERT_EQ(cli("solve --algo fff --dataset " + path("d.json") + " --report " + path("all.csv")).status, 0);
    const auto rows = parse_report_csv(read_file(path("all.csv")));
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].method, "HFF");
    EXPECT_EQ(rows[1].method, "FFF");
    EXPECT_EQ(read_file(path("all.csv")).substr(0, std::string(kReportHeader).size()), kReportHeader);

    const auto rep = cli("report --rundir " + path("hff") + " --format csv");
    ASSERT_EQ(rep.status, 0) << rep.err;
    EXPECT_EQ(rep.out, read_file(path("hff/report.csv")));
    EXPECT_EQ(cli("report --rundir " + path("hff")).status, 0);
}

TEST_F(CliTest, SolveNeedsInput) {
    EXPECT_EQ(cli("solve --algo hff").status, 2);
    EXPECT_EQ(cli("solve --algo bfdh --dataset x").status, 2);
}

TEST_F(CliTest, ValidateExitCodes) {
    write_file(path("i.json"), R"({"capacity":[200,100],"items":[[50,50],[50,50]]})");
    write_file(path("ok.json"), R"({"bins":[{"placements":[{"item":0,"x":0,"y":0},{"item":1,"x":50,"y":0}]}]})");
    write_file(path("bad.json"), R"({"bins":[{"placements":[{"item":0,"x":0,"y":0},{"item":1,"x":25,"y":25}]}]})");
    write_file(path("junk.json"), R"({"bins":[{"placements":[{"item":0,"x":"left","y":0}]}]})");
    const auto ok = cli("validate --instance " + path("i.json") + " --solution " + path("ok.json"));
    EXPECT_EQ(ok.status, 0) << ok.err;
    EXPECT_NE(ok.out.find("valid: 1 bins"), std::string::npos);
    const auto bad = cli("validate --instance " + path("i.json") + " --solution " + path("bad.json"));
    EXPECT_EQ(bad.status, 1);
    EXPECT_NE(bad.out.find("Overlap"), std::string::npos);
    EXPECT_EQ(cli("validate --instance " + path("i.json") + " --solution " + path("junk.json")).status, 1);
    EXPECT_EQ(cli("validate --instance " + path("ok.json") + " --solution " + path("ok.json")).status, 2);
    EXPECT_EQ(cli("validate --instance " + path("missing.json") + " --solution " + path("ok.json")).status, 3);
}

TEST_F(CliTest, SolvedInstanceValidates) {
    write_file(path("i.json"), encode_instance(gen_dataset(4, 1, {}).instances[0]));
    ASSERT_EQ(cli("solve --algo fff --instance " + path("i.json") + " --out " + path("s.json")).status, 0);
    EXPECT_EQ(cli("validate --instance " + path("i.json") + " --solution " + path("s.json")).status, 0);
}

TEST_F(CliTest, Oracle) {
    write_file(path("i.json"), R"({"capacity":[200,100],"items":[[100,100],[100,100],[100,100]]})");
    const auto r = cli("oracle --instance " + path("i.json"));
    ASSERT_EQ(r.status, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["bins"], 2);
    EXPECT_EQ(j["area_lower_bound"], 2);
    EXPECT_EQ(j["witness"]["bins"].size(), 2u);
    write_file(path("big.json"), encode_instance(gen_instance(1, 7, 10, 50, {200, 100})));
    EXPECT_EQ(cli("oracle --instance " + path("big.json")).status, 2);
}

TEST_F(CliTest, JsonErrors) {
    const auto r = cli("--json-errors gen --seed 1 --min-side 0");
    EXPECT_EQ(r.status, 2);
    const auto j = json::parse(r.err);
    EXPECT_EQ(j["error"]["code"], "BadParams");
    EXPECT_EQ(j["error"]["exit"], 2);
}

class CliEvolveTest : public CliTest {
protected:
    void SetUp() override {
        for (const auto& [name, args] : std::vector<std::pair<std::string, std::string>>{
                 {"a.md", "--algo hff"}, {"b.md", "--algo nfdh"}, {"c.md", "--fault overlap"}})
            testing::write_text(tmp_ / "fixtures" / name, testing::refcand_response(args));
        write_file(path("config.json"), R"({"population": 3, "generations": 2, "launcher": ["/bin/sh", "{source}"],
            "jobs": 2, "provider": {"kind": "mock", "fixture_dir": "fixtures", "cycle": true}})");
        ASSERT_EQ(cli("gen --seed 1 --count 2 --items 20 --out " + path("d.json")).status, 0);
    }
    std::string evolve(const std::string& out, const std::string& extra = "") {
        return "evolve --config " + path("config.json") + " --dataset " + path("d.json") + " --out " + path(out) +
               " --provider mock --seed 7 " + extra;
    }
};

TEST_F(CliEvolveTest, ReproducibleMockRuns) {
    const auto one = cli(evolve("one"));
    ASSERT_EQ(one.status, 0) << one.err;
    EXPECT_NE(one.out.find("best-evolved"), std::string::npos);
    ASSERT_EQ(cli(evolve("two")).status, 0);
    const auto a = json::parse(read_file(path("one/run.json")));
    const auto b = json::parse(read_file(path("two/run.json")));
    EXPECT_EQ(without_runtime(a), without_runtime(b));
    EXPECT_EQ(a["config"]["seed"], 7);
    const auto rep = cli("report --rundir " + path("one"));
    EXPECT_EQ(rep.status, 0);
    EXPECT_NE(rep.out.find("Per-generation trend"), std::string::npos);
}

TEST_F(CliEvolveTest, ResumeExtendsTheRun) {
    ASSERT_EQ(cli(evolve("run")).status, 0);
    const auto r = cli(evolve("run", "--resume --generations 3"));
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(json::parse(read_file(path("run/run.json")))["generations"].size(), 3u);
    EXPECT_EQ(cli(evolve("run")).status, 2);
}

TEST_F(CliEvolveTest, HttpWithoutCredentialIsRuntimeError) {
    const auto r = cli("--json-errors evolve --config " + path("config.json") + " --dataset " + path("d.json") +
                           " --out " + path("http") + " --provider http",
                       "env -u PACKBENCH_API_KEY");
    EXPECT_EQ(r.status, 3) << r.out << r.err;
    EXPECT_NE(r.err.find("CredentialMissing"), std::string::npos) << r.err;
}

TEST_F(CliEvolveTest, BadConfigIsUsageError) {
    write_file(path("bad.json"), R"({"provider": {"kind": "mock"}, "colour": "blue"})");
    EXPECT_EQ(cli("evolve --config " + path("bad.json") + " --dataset " + path("d.json") + " --out " + path("x")).status, 2);
}

}  // namespace
}  // namespace packbench
