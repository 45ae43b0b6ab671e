#include "fueter/cli.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

using namespace fueter;

namespace {

struct CliRun {
    int code;
    std::string out;
};

std::string data_dir() { return FUETER_DATA_DIR; }

// Runs the installed binary from the data directory, capturing stdout.
CliRun run(const std::string& args) {
    const std::string cmd = "cd '" + data_dir() + "' && '" + std::string(FUETER_CLI) + "' " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p)
        return {-1, ""};
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0)
        out.append(buf, n);
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

Json run_json(const std::string& args, int expected_code) {
    const CliRun r = run(args);
    EXPECT_EQ(r.code, expected_code) << args;
    return Json::parse(r.out);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const Json* find_check(const Json& rep, const std::string& name) {
    for (const auto& c : rep["checks"])
        if (c["name"] == name)
            return &c;
    return nullptr;
}

}  // namespace

TEST(Cli, GoldenReports) {
    std::ifstream list(data_dir() + "/golden/commands.txt");
    ASSERT_TRUE(list);
    std::string line;
    int count = 0;
    while (std::getline(list, line)) {
        if (line.empty())
            continue;
        const auto sp = line.find(' ');
        const std::string name = line.substr(0, sp), args = line.substr(sp + 1);
        const CliRun r = run(args);
        EXPECT_EQ(r.out, slurp(data_dir() + "/golden/" + name + ".json")) << name;
        ++count;
    }
    EXPECT_GE(count, 8);
}

TEST(Cli, CounterexampleReport) {
    const Json rep = run_json("check counterexample.json plane_y3.json --admissible", 1);
    EXPECT_EQ(rep["result"]["crf"], true);
    EXPECT_EQ(rep["result"]["admissible"], false);
    ASSERT_EQ(rep["result"]["admissibility_witnesses"].size(), 1u);
    const Json& w = rep["result"]["admissibility_witnesses"][0];
    EXPECT_EQ(w["derived"], "f_(y3)");
    EXPECT_EQ(w["operator"], "qbar1");
    EXPECT_EQ(w["value"]["c"], Json::parse(R"(["-2","0","0","0"])"));
    EXPECT_EQ(rep["status"], "fail");
    // every check carries its backend and tolerance
    for (const auto& c : rep["checks"]) {
        EXPECT_TRUE(c.contains("backend"));
        EXPECT_TRUE(c.contains("tolerance"));
    }
}

TEST(Cli, SimpleChecks) {
    const Json zero = run_json("check zero.json plane_y3.json --admissible", 0);
    EXPECT_EQ(zero["result"]["crf"], true);
    EXPECT_EQ(zero["result"]["admissible"], true);
    const Json qb = run_json("check qbar1.json plane_y3.json", 1);
    EXPECT_EQ(qb["result"]["crf"], false);
    EXPECT_EQ(qb["result"]["crf_witness"]["value"]["c"][0], "4");
    // rational sphere points are handled exactly, random ones in floating point
    const Json sx = run_json("check regular.json sphere.json --samples sphere_points.json --admissible", 0);
    EXPECT_EQ(find_check(sx, "crf")->at("backend"), "exact");
    const Json sf = run_json("check regular.json sphere.json --admissible --count 8", 0);
    EXPECT_EQ(find_check(sf, "crf")->at("backend"), "float");
    EXPECT_EQ(find_check(sf, "crf")->at("tolerance"), 1e-10);
}

TEST(Cli, Syzygy) {
    const Json rep = run_json("syzygy --algebra O --n 2 --degree 2", 0);
    std::vector<int> dims;
    for (const auto& d : rep["result"]["dims"])
        dims.push_back(d["dim"].get<int>());
    EXPECT_EQ(dims, (std::vector<int>{0, 0, 16}));
    EXPECT_EQ(rep["result"]["basis_rank"], 16);
    EXPECT_EQ(find_check(rep, "compat rows span degree 2")->at("value"), true);
    EXPECT_EQ(find_check(rep, "syzygy dim degree 2")->at("backend"), "exact-rational");
    const Json h = run_json("syzygy --algebra H --n 2 --degree 2 --backend modp", 0);
    EXPECT_EQ(find_check(h, "syzygy dim degree 2")->at("backend"), "mod-p61");
}

TEST(Cli, SolveExtendJump) {
    const Json bad = run_json("solve g_incompatible.json", 1);
    ASSERT_EQ(bad["result"]["residuals"].size(), 1u);
    EXPECT_FALSE(bad["result"]["residuals"][0]["residual"]["terms"].empty());
    const Json good = run_json("solve g_compatible.json", 0);
    EXPECT_TRUE(good["result"].contains("u"));
    // data of degree 1 with a budget of 0
    EXPECT_EQ(run("solve g_compatible.json --degree 0").code, 3);

    const Json ext = run_json("extend regular_plus_rho.json plane_y3.json --order 3", 0);
    EXPECT_EQ(find_check(ext, "dbar F in (rho^m)")->at("status"), "pass");
    EXPECT_EQ(run("extend counterexample.json plane_y3.json --order 2").code, 1);
    EXPECT_EQ(run("extend counterexample.json plane_y3.json --order 1").code, 0);
    EXPECT_EQ(run("extend regular.json sphere.json").code, 2);

    const Json jmp = run_json("jump regular_plus_rho.json plane_y3.json", 0);
    EXPECT_TRUE(jmp["result"]["minus"]["terms"].empty());
    EXPECT_EQ(run("jump counterexample.json plane_y3.json").code, 1);
    EXPECT_EQ(run("jump regular_plus_rho.json plane_y3.json --degree 1").code, 3);
}

TEST(Cli, CauchyFueter) {
    const Json in = run_json("cf-integral one.json --point 0.1,0.2,0,0", 0);
    EXPECT_LE(find_check(in, "integral = F(q0)")->at("value").get<double>(), 1e-8);
    EXPECT_NEAR(in["result"]["value"]["c"][0].get<double>(), 1.0, 1e-8);
    const Json out = run_json("cf-integral one.json --point 2,0,0,0", 0);
    EXPECT_EQ(out["result"]["inside"], false);
    EXPECT_LE(find_check(out, "integral = 0 outside")->at("value").get<double>(), 1e-8);
    EXPECT_EQ(run("cf-integral zeta1.json --point 0,0.25,0,-0.125 --order 16").code, 0);
    EXPECT_EQ(run("cf-integral one.json --point 1,0,0,0").code, 2);
    EXPECT_EQ(run("cf-integral one.json --point 1,0").code, 2);
    EXPECT_EQ(run("cf-integral counterexample.json").code, 2);
}

TEST(Cli, VerifyIdentities) {
    const Json rep = run_json("verify-identities --suite laplacian --seed 3", 0);
    ASSERT_EQ(rep["checks"].size(), 1u);
    EXPECT_EQ(rep["checks"][0]["value"]["cases"], 201);
    EXPECT_EQ(run("verify-identities --suite unknown").code, 2);
}

TEST(Cli, ExitCodesForBadInput) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "fueter_cli_test";
    fs::create_directories(dir);
    const std::string broken = (dir / "broken.json").string();
    std::ofstream(broken) << "{\"algebra\": \"H\", \"n\": 2, \"terms\": [";
    const std::string wrong = (dir / "wrong.json").string();
    std::ofstream(wrong) << R"({"algebra":"H","n":2,"terms":[{"exp":[1],"coef":{"algebra":"H","c":[1,0,0,0]}}]})";

    EXPECT_EQ(run("check '" + broken + "' plane_y3.json").code, 2);
    EXPECT_EQ(run("check '" + wrong + "' plane_y3.json").code, 2);
    EXPECT_EQ(run("check missing.json plane_y3.json").code, 2);
    EXPECT_EQ(run("check zero.json").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("syzygy --algebra X").code, 2);
    EXPECT_EQ(run("syzygy --max-entries 10").code, 3);

    // the input error names the location
    std::ostringstream out, err;
    EXPECT_EQ(cli::run_cli({"check", wrong, data_dir() + "/plane_y3.json"}, out, err), 2);
    EXPECT_NE(err.str().find("/terms/0/exp"), std::string::npos) << err.str();
    std::ostringstream out2, err2;
    EXPECT_EQ(cli::run_cli({"check", broken, data_dir() + "/plane_y3.json"}, out2, err2), 2);
    EXPECT_NE(err2.str().find("at byte"), std::string::npos) << err2.str();
    fs::remove_all(dir);
}

TEST(Cli, DeterministicReports) {
    for (const char* args : {"verify-identities --seed 11", "cf-integral zeta1.json --point 0.1,0,0.2,0",
                             "check regular.json sphere.json --admissible --seed 5"}) {
        const CliRun a = run(args), b = run(args);
        EXPECT_EQ(a.out, b.out) << args;
        EXPECT_FALSE(a.out.empty());
    }
    const Json timed = run_json("syzygy --degree 1 --timing", 0);
    EXPECT_TRUE(timed.contains("timing_ms"));
    EXPECT_FALSE(run_json("syzygy --degree 1", 0).contains("timing_ms"));
}

TEST(Cli, TableFormatAndHelp) {
    const CliRun t = run("syzygy --degree 2 --format table");
    EXPECT_EQ(t.code, 0);
    EXPECT_NE(t.out.find("syzygy dim degree 2"), std::string::npos);
    EXPECT_NE(t.out.find("status: pass"), std::string::npos);
    std::ostringstream out, err;
    EXPECT_EQ(cli::run_cli({"--help"}, out, err), 0);
    EXPECT_NE(out.str().find("verify-identities"), std::string::npos);
    EXPECT_NE(out.str().find("--format"), std::string::npos);
}
