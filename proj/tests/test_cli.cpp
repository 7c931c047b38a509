#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "aoa/cli.hpp"

namespace {

const std::string kFixture = std::string(AOA_FIXTURE_DIR) + "/table1.csv";

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args)
{
    args.insert(args.begin(), "aoa");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    const int code = aoa::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name)
{
    return (std::filesystem::temp_directory_path() / ("aoa_cli_test_" + name)).string();
}

}  // namespace

TEST(Cli, SimulateIsReproducible)
{
    const std::vector<std::string> args{"simulate", "--preset", "mild", "--trials", "10", "--seed", "7",
                                        "--asa-nmax", "100"};
    const CliRun a = run(args);
    const CliRun b = run(args);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out.rfind("method,p,n,trials,failures,rmse_m\n", 0), 0u);
    // 9 grid points x 5 methods plus the header.
    EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 46);
}

TEST(Cli, UsageErrors)
{
    EXPECT_EQ(run({"simulate", "--preset", "moderate", "--methods", "alg1", "--alg1-n", "11"}).code, 2);
    EXPECT_EQ(run({"simulate", "--no-such-flag"}).code, 2);
    EXPECT_EQ(run({"simulate", "--preset", "extreme"}).code, 2);
    EXPECT_EQ(run({"simulate", "--methods", "lls,ml"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, ConfigFile)
{
    const std::string path = temp_path("config.json");
    {
        std::ofstream f(path);
        f << R"({"preset": "moderate", "trials": 4, "p_grid": [0.5], "methods": ["lls", "wlls"], "seed": 9})";
    }
    const CliRun r = run({"simulate", "--config", path});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 3);
    EXPECT_NE(r.out.find("lls,0.5,10,4,0,"), std::string::npos);

    {
        std::ofstream f(path);
        f << R"({"trials": "many"})";
    }
    EXPECT_EQ(run({"simulate", "--config", path}).code, 2);
    std::filesystem::remove(path);
}

TEST(Cli, SweepN)
{
    const CliRun r = run({"sweep-n", "--trials", "5", "--n-values", "4,10", "--methods", "alg1,wlls"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("alg1,0.9,4,5,"), std::string::npos);
    EXPECT_NE(r.out.find("alg1,0.9,10,5,"), std::string::npos);
    EXPECT_NE(r.out.find("wlls,0.9,10,5,"), std::string::npos);
    EXPECT_EQ(run({"sweep-n", "--n-values", "1"}).code, 2);
}

TEST(Cli, IngestCheck)
{
    const CliRun r = run({"ingest-check", kFixture});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("receivers: 4"), std::string::npos);
    EXPECT_NE(r.out.find("reference points: 10"), std::string::npos);

    std::ifstream f(kFixture, std::ios::binary);
    std::ostringstream original;
    original << f.rdbuf();
    EXPECT_EQ(run({"ingest-check", kFixture, "--emit"}).out, original.str());

    EXPECT_NE(run({"ingest-check", temp_path("missing.csv")}).code, 0);
}

TEST(Cli, SynthesizeThenEstimate)
{
    const std::string obs = temp_path("obs.csv");
    const CliRun s = run({"synthesize", "--coords", kFixture, "--pulses", "4", "--sigma-deg", "0.5", "--seed", "2",
                       "-o", obs});
    ASSERT_EQ(s.code, 0) << s.err;
    const CliRun e = run({"estimate", "--coords", kFixture, "--observations", obs, "--methods", "alg1,lls",
                       "--alg1-n", "3,4"});
    ASSERT_EQ(e.code, 0) << e.err;
    EXPECT_NE(e.out.find("alg1,,3,40,0,"), std::string::npos) << e.out;
    EXPECT_NE(e.out.find("alg1,,4,40,0,"), std::string::npos);
    EXPECT_NE(e.out.find("lls,,4,40,0,"), std::string::npos);
    std::filesystem::remove(obs);

    const std::string bad = temp_path("bad_obs.csv");
    {
        std::ofstream f(bad);
        f << "receiver_id,rp_id,pulse,ux,uy,uz\nRec1,RP1,0,0.5,0,0\n";
    }
    const CliRun b = run({"estimate", "--coords", kFixture, "--observations", bad});
    EXPECT_EQ(b.code, 1);
    EXPECT_NE(b.err.find(":2"), std::string::npos) << b.err;
    std::filesystem::remove(bad);
}
