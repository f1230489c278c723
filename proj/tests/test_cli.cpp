#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/commands.hpp"
#include "cli/config_io.hpp"

using nlohmann::json;
using namespace magalg::cli;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code;
    std::string out, err;
};

CliRun run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("magalg_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(path(name)) << text;
        return path(name);
    }
    static std::string slurp(const std::string& p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    fs::path dir_;
};

const char* kSingle = R"({"magnets": [{"position": [0, 0, 0]}], "field_points": [[0, 0, 1]]})";
const char* kPair = R"({"magnets": [{"position": [1, 0, 0]}, {"position": [-1, 0, 0]}], "field_points": [[0, 0, 1]]})";

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) { out.push_back(cur); cur.clear(); }
        else cur += c;
    }
    out.push_back(cur);
    return out;
}

// Collects every number under j, keyed by its JSON pointer.
void numbers(const json& j, const std::string& at, std::map<std::string, double>& out) {
    if (j.is_number()) out[at] = j.get<double>();
    else if (j.is_object())
        for (auto it = j.begin(); it != j.end(); ++it) numbers(it.value(), at + "/" + it.key(), out);
    else if (j.is_array())
        for (std::size_t i = 0; i < j.size(); ++i) numbers(j[i], at + "/" + std::to_string(i), out);
}

}  // namespace

TEST(ConfigIo, ParseAndErrors) {
    const ConfigFile c = parse_config(kPair);
    EXPECT_EQ(c.magnets.size(), 2u);
    EXPECT_EQ(c.field_points.size(), 1u);
    EXPECT_FALSE(c.si_prefactor);
    try {
        parse_config("{\n  \"magnets\": [{\"position\": [0, 0 0]}]\n}");
        FAIL();
    } catch (const CliError& e) {
        EXPECT_EQ(e.code(), kExitInput);
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
        EXPECT_NE(std::string(e.what()).find("column"), std::string::npos);
    }
    EXPECT_THROW(parse_config(R"({"magnets": []})"), CliError);
    EXPECT_THROW(parse_config(R"({"magnets": [{"position": [0, 0]}]})"), CliError);
    EXPECT_THROW(parse_config(R"({"magnets": [{"position": [0, 0, 0]}], "si_prefactor": 1})"), CliError);
}

TEST(ConfigIo, FormatNumber) {
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(2.0), "2");
    EXPECT_EQ(format_number(-1e-7), "-1e-07");
    EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}

TEST_F(CliTest, AnalyzeSingleDipole) {
    const std::string cfg = write("single.json", kSingle);
    const CliRun r = run_cli({"analyze", "--config", cfg, "--out", path("r.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(slurp(path("r.json")));
    const json& res = j["results"][0];
    EXPECT_NEAR(res["lambda_bar"]["value"].get<double>(), 2.0, 1e-6);
    EXPECT_EQ(res["branch"], "PLANE_DOMINANT");
    EXPECT_EQ(j["parameters"]["samples"], 20000);
    EXPECT_EQ(j["parameters"]["seed"], 0);
    EXPECT_TRUE(j["tool"].contains("version"));
    for (const char* key : {"P", "gram", "planes", "lambda_P", "bounds", "candidates"}) EXPECT_TRUE(res.contains(key)) << key;
}

TEST_F(CliTest, AnalyzeAntipodal) {
    const std::string cfg =
        write("anti.json", R"({"magnets": [{"position": [0, 0, 1]}, {"position": [0, 0, -1]}], "field_points": [[0, 0, 0]]})");
    ASSERT_EQ(run_cli({"analyze", "--config", cfg, "--out", path("r.json")}).code, 0);
    const json res = json::parse(slurp(path("r.json")))["results"][0];
    EXPECT_EQ(res["branch"], "DEGENERATE");
    EXPECT_EQ(res["lambda_bar"]["value"].get<double>(), 0.0);
}

TEST_F(CliTest, ExitCodes) {
    CliRun r = run_cli({"analyze", "--config", path("missing.json"), "--out", path("r.json")});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("config not found"), std::string::npos);

    r = run_cli({"analyze", "--config", write("bad.json", "{\"magnets\": [\n  {\"position\": [0, 0, 0]]\n}"), "--out",
                 path("r.json")});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("line"), std::string::npos);

    r = run_cli({"analyze", "--config",
                 write("sing.json", R"({"magnets": [{"position": [3, 0, 0]}, {"position": [0, 0, 1]}], "field_points": [[0, 0, 1]]})"),
                 "--out", path("r.json")});
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("magnet 1"), std::string::npos) << r.err;

    EXPECT_EQ(run_cli({"analyze", "--config", write("s.json", kSingle), "--samples", "50", "--out", path("r.json")}).code, 2);
    EXPECT_EQ(run_cli({"analyze", "--config", path("s.json"), "--tol", "0", "--out", path("r.json")}).code, 2);
    EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
    EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST_F(CliTest, ReportRoundTrip) {
    const std::string cfg = write("pair.json", kPair);
    ASSERT_EQ(run_cli({"analyze", "--config", cfg, "--seed", "3", "--out", path("a.json")}).code, 0);
    const json a = json::parse(slurp(path("a.json")));
    const std::string replay = write("replay.json", a["config"].dump());
    ASSERT_EQ(run_cli({"analyze", "--config", replay, "--seed", "3", "--out", path("b.json")}).code, 0);
    const json b = json::parse(slurp(path("b.json")));
    std::map<std::string, double> na, nb;
    numbers(a["results"], "", na);
    numbers(b["results"], "", nb);
    ASSERT_EQ(na.size(), nb.size());
    ASSERT_GT(na.size(), 20u);
    for (const auto& [k, v] : na) EXPECT_NEAR(nb.at(k), v, 1e-12 * std::max(1.0, std::abs(v))) << k;
}

TEST_F(CliTest, SweepHeaderAndSingleton) {
    const std::string cfg = write("pair.json", kPair);
    ASSERT_EQ(run_cli({"sweep", "--config", cfg, "--grid", "0:0:1,0:0:1,1:1:1", "--out", path("s.csv")}).code, 0);
    const std::vector<std::string> lines = split(slurp(path("s.csv")), '\n');
    ASSERT_GE(lines.size(), 2u);
    EXPECT_EQ(lines[0], "x,y,z,norm_P,abs_lambda_MF,lambda_P,lambda_bar,ub_chain,ub_refined,branch");
    const std::vector<std::string> cells = split(lines[1], ',');
    ASSERT_EQ(cells.size(), 10u);

    ASSERT_EQ(run_cli({"analyze", "--config", cfg, "--out", path("a.json")}).code, 0);
    const json res = json::parse(slurp(path("a.json")))["results"][0];
    EXPECT_EQ(std::stod(cells[3]), res["norm_P"].get<double>());
    EXPECT_EQ(std::stod(cells[4]), res["abs_lambda_MF"].get<double>());
    EXPECT_EQ(std::stod(cells[5]), res["lambda_P"].get<double>());
    EXPECT_EQ(std::stod(cells[6]), res["lambda_bar"]["value"].get<double>());
    EXPECT_EQ(std::stod(cells[7]), res["bounds"]["chain_upper"].get<double>());
    EXPECT_EQ(std::stod(cells[8]), res["bounds"]["refined"].get<double>());
    EXPECT_EQ(cells[9], res["branch"].get<std::string>());
}

TEST_F(CliTest, SweepSingularAndOrder) {
    const std::string cfg = write("pair.json", kPair);
    const CliRun r = run_cli({"sweep", "--config", cfg, "--grid", "-1:1:3,0:0:1,0:0:1", "--threads", "3", "--out", path("s.csv")});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.err.find("warning"), std::string::npos);
    const std::vector<std::string> lines = split(slurp(path("s.csv")), '\n');
    EXPECT_EQ(lines[1], "-1,0,0,,,,,,,singular");
    EXPECT_EQ(lines[3], "1,0,0,,,,,,,singular");
    EXPECT_EQ(split(lines[2], ',')[9], "DEGENERATE");
    EXPECT_EQ(run_cli({"sweep", "--config", cfg, "--grid", "0:1:0,0:0:1,0:0:1", "--out", path("e.csv")}).code, 2);
}

TEST_F(CliTest, SweepDeterministic) {
    const std::string cfg = write("pair.json", kPair);
    const std::string grid = "-0.5:0.5:3,-0.5:0.5:2,0.5:1:2";
    ASSERT_EQ(run_cli({"sweep", "--config", cfg, "--grid", grid, "--samples", "2000", "--out", path("a.csv")}).code, 0);
    ASSERT_EQ(run_cli({"sweep", "--config", cfg, "--grid", grid, "--samples", "2000", "--threads", "4", "--out",
                       path("b.csv")}).code,
              0);
    const std::string a = slurp(path("a.csv"));
    EXPECT_EQ(a, slurp(path("b.csv")));
    const std::vector<std::string> lines = split(a, '\n');
    // x fastest
    EXPECT_EQ(split(lines[1], ',')[0], "-0.5");
    EXPECT_EQ(split(lines[2], ',')[0], "0");
    EXPECT_EQ(split(lines[4], ',')[1], "0.5");
}

TEST_F(CliTest, GenPair) {
    const CliRun r = run_cli({"gen", "pair", "--sep", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    const ConfigFile c = parse_config(r.out);
    ASSERT_EQ(c.magnets.size(), 2u);
    EXPECT_EQ(c.magnets[0], (magalg::Vec3{1, 0, 0}));
    EXPECT_EQ(c.magnets[1], (magalg::Vec3{-1, 0, 0}));
    EXPECT_EQ(run_cli({"gen", "pair", "--sep", "-1"}).code, 2);
    EXPECT_EQ(run_cli({"gen", "pair", "--axis", "w"}).code, 2);
}

TEST_F(CliTest, GenLatticeAndMirror) {
    CliRun r = run_cli({"gen", "lattice", "--k", "1", "--exclude-origin"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(parse_config(r.out).magnets.size(), 26u);
    EXPECT_EQ(run_cli({"gen", "mirror"}).code, 2);
    r = run_cli({"gen", "mirror", "--normal", "0,0,1", "--mirror-pair", "1,0,1", "--in-plane", "0,2,0", "--out",
                 path("m.json")});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(load_config(path("m.json")).magnets.size(), 3u);
    EXPECT_EQ(run_cli({"gen", "lattice", "--spacing", "0"}).code, 2);
}

TEST_F(CliTest, VerifyRandomPlanar) {
    CliRun r = run_cli({"verify", "--trials", "10", "--seed", "5", "--samples", "2000"});
    ASSERT_EQ(r.code, 0) << r.out;
    const json a = json::parse(r.out);
    EXPECT_TRUE(a["passed"].get<bool>());
    EXPECT_TRUE(a["checks"].contains("lower_chain"));
    const CliRun again = run_cli({"verify", "--trials", "10", "--seed", "5", "--samples", "2000"});
    EXPECT_EQ(again.out, r.out);
    EXPECT_EQ(run_cli({"verify", "--trials", "0"}).code, 2);
}

TEST_F(CliTest, VerifyConfig) {
    const CliRun r = run_cli({"verify", "--trials", "20", "--samples", "2000", "--config", write("pair.json", kPair)});
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(json::parse(r.out)["mode"], "config");
}
