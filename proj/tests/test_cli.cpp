#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

const std::filesystem::path kTmp = METPATH_TEST_TMP;

int cli(const std::string& args) {
    std::filesystem::create_directories(kTmp);
    const std::string cmd = std::string("\"") + METPATH_CLI_PATH + "\" " + args + " > \"" +
                            (kTmp / "stdout.txt").string() + "\" 2> \"" + (kTmp / "stderr.txt").string() + "\"";
    const int status = std::system(cmd.c_str());
#ifdef _WIN32
    return status;
#else
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
#endif
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

std::string out_dir(const std::string& name) { return "--out \"" + (kTmp / name).string() + "\""; }

}  // namespace

TEST_CASE("segment: all checks, exit 0") {
    CHECK(cli("run --fixture segment --checks all " + out_dir("segment")) == 0);
    const auto doc = nlohmann::json::parse(slurp(kTmp / "segment" / "report.json"));
    CHECK(doc.size() == 10);
    for (const auto& r : doc) CHECK(r["verdict"] != "violated");
    CHECK(std::filesystem::exists(kTmp / "segment" / "md_profile.csv"));
    CHECK(std::filesystem::exists(kTmp / "segment" / "variation_trace.csv"));
}

TEST_CASE("cantor variation identity") {
    CHECK(cli("run --fixture cantor --checks variation_identity --format json " + out_dir("cantor")) == 0);
    const auto doc = nlohmann::json::parse(slurp(kTmp / "cantor" / "report.json"));
    REQUIRE(doc.size() == 1);
    CHECK(doc[0]["verdict"] == "holds");
    CHECK(doc[0]["lhs"].get<double>() <= 0.05);
    CHECK(std::abs(doc[0]["rhs"].get<double>() - 1.0) <= 1e-6);
    CHECK_FALSE(std::filesystem::exists(kTmp / "cantor" / "md_profile.csv"));
}

TEST_CASE("vp_pair composition") {
    CHECK(cli("run --fixture vp_pair --checks composition " + out_dir("vp")) == 0);
    const auto doc = nlohmann::json::parse(slurp(kTmp / "vp" / "report.json"));
    CHECK(doc[0]["verdict"] == "holds");
    CHECK(doc[0]["notes"].get<std::string>().find("non-integrable <=> not BV") != std::string::npos);
}

TEST_CASE("input errors exit 2") {
    CHECK(cli("run --fixture nope") == 2);
    CHECK(cli("run --fixture segment --checks nonsense") == 2);
    CHECK(cli("run --fixture segment --grid 32") == 2);
    CHECK(cli("run --fixture segment --tol 0") == 2);
    CHECK(cli("run --fixture segment --csv x.csv") == 2);
    CHECK(cli("run") == 2);
    CHECK(cli("run --csv /nonexistent.csv") == 2);
    CHECK(cli("run --fixture circle --checks injective_identity " + out_dir("inj")) == 2);
    CHECK(cli("frobnicate") == 2);
    std::ofstream(kTmp / "bad.csv") << "t,x\n0,0\n1,1\n0.5,2\n";
    CHECK(cli("run --csv \"" + (kTmp / "bad.csv").string() + "\"") == 2);
    CHECK(slurp(kTmp / "stderr.txt").find("row 4") != std::string::npos);
}

TEST_CASE("csv input") {
    std::ofstream(kTmp / "tri.csv") << "t,x,y\n0,0,0\n1,3,4\n2,3,0\n";
    CHECK(cli("run --csv \"" + (kTmp / "tri.csv").string() + "\" --checks variation_identity " + out_dir("tri")) == 0);
    const auto doc = nlohmann::json::parse(slurp(kTmp / "tri" / "report.json"));
    CHECK(doc[0]["rhs"].get<double>() == 9.0);
    CHECK(slurp(kTmp / "tri" / "variation_trace.csv") == "level,estimate\n0,9\n");
}

TEST_CASE("config file, flags win") {
    std::ofstream(kTmp / "run.toml") << "fixture = \"circle\"\nchecks = \"sard\"\ntol = 0.5\n";
    CHECK(cli("--config \"" + (kTmp / "run.toml").string() + "\" run --tol 0.002 --format json " + out_dir("cfg")) == 0);
    const auto doc = nlohmann::json::parse(slurp(kTmp / "cfg" / "report.json"));
    REQUIRE(doc.size() == 1);
    CHECK(doc[0]["theorem_id"] == "sard");
    CHECK(doc[0]["params"]["tol"] == 0.002);
}

TEST_CASE("byte-identical reruns") {
    REQUIRE(cli("run --fixture sqrt " + out_dir("r1")) == 0);
    REQUIRE(cli("run --fixture sqrt " + out_dir("r2")) == 0);
    for (const char* f : {"report.json", "md_profile.csv", "variation_trace.csv"})
        CHECK(slurp(kTmp / "r1" / f) == slurp(kTmp / "r2" / f));
}

TEST_CASE("md-profile and list") {
    CHECK(cli("md-profile --fixture circle --grid 8") == 0);
    const std::string text = slurp(kTmp / "stdout.txt");
    CHECK(text.rfind("x,md,status\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 10);
    CHECK(cli("list") == 0);
    CHECK(slurp(kTmp / "stdout.txt").find("vp_pair") != std::string::npos);
    CHECK(cli("--help") == 0);
}
