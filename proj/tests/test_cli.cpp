#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE_MESSAGE(bool(in), "missing file ", p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run(const std::string& args) {
    const std::string cmd = std::string(CONEKIT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

fs::path make_config(const fs::path& dir, const std::string& body) {
    fs::create_directories(dir);
    const fs::path p = dir / "config.json";
    std::ofstream out(p);
    out << body;
    return p;
}

const char* kVerifyConfig = R"({
  "schema_version": 1,
  "cone": {"kind": "orthant", "dim": 2},
  "cases": [
    {"theorem": "T3.3", "p": 2, "q": 2, "gamma": 0},
    {"theorem": "Hardy1D", "cone": {"kind": "orthant", "dim": 1}, "p": 2, "q": 2, "gamma": 0}
  ],
  "mc": {"samples": 30000, "seed": 321}
})";

}  // namespace

TEST_CASE("usage errors exit with code 2") {
    CHECK(run("verify") == 2);
    CHECK(run("frobnicate") == 2);
    const auto dir = fs::temp_directory_path() / "conekit-cli-usage";
    const auto cfg = make_config(dir, R"({"schema_version": 1, "cases": []})");
    CHECK(run("verify --config " + cfg.string() + " --out " + (dir / "o").string()) == 2);
    const auto bad = make_config(dir / "b", R"({"schema_version": 99})");
    CHECK(run("verify --config " + bad.string()) == 2);
}

TEST_CASE("describe-cone writes a report") {
    const auto dir = fs::temp_directory_path() / "conekit-cli-desc";
    const auto cfg = make_config(dir, R"({
      "schema_version": 1,
      "cone": {"kind": "orthant", "dim": 3},
      "mc": {"samples": 2000, "seed": 5}
    })");
    CHECK(run("describe-cone --config " + cfg.string() + " --out " + (dir / "o").string()) == 0);
    const std::string md = slurp(dir / "o" / "describe-orthant(3).md");
    CHECK(md.find("fixed point") != std::string::npos);
    CHECK(md.find("sigma0: -1") != std::string::npos);
}

TEST_CASE("verify emits byte-identical CSV across runs and thread counts") {
    const auto dir = fs::temp_directory_path() / "conekit-cli-det";
    fs::remove_all(dir);
    const auto cfg = make_config(dir, kVerifyConfig);
    CHECK(run("verify --config " + cfg.string() + " --out " + (dir / "a").string() +
              " --threads 1") == 0);
    CHECK(run("verify --config " + cfg.string() + " --out " + (dir / "b").string() +
              " --threads 8") == 0);
    CHECK(run("verify --config " + cfg.string() + " --out " + (dir / "c").string() +
              " --threads 8") == 0);
    const std::string a = slurp(dir / "a" / "verify.csv");
    CHECK(a == slurp(dir / "b" / "verify.csv"));
    CHECK(a == slurp(dir / "c" / "verify.csv"));
    CHECK(a.find("Hardy1D") != std::string::npos);
    CHECK(a.find("consistent") != std::string::npos);
    // serial reference path agrees bitwise with the OpenMP kernels
    CHECK(run("verify --config " + cfg.string() + " --out " + (dir / "d").string() +
              " --serial") == 0);
    CHECK(a == slurp(dir / "d" / "verify.csv"));
}

TEST_CASE("sigma command brackets the closed form") {
    const auto dir = fs::temp_directory_path() / "conekit-cli-sigma";
    const auto cfg = make_config(dir, R"({
      "schema_version": 1,
      "cone": {"kind": "lorentz", "dim": 3},
      "alphas": [-1.2, -1.1, -1.0, -0.9, -0.8, -0.7, -0.6, -0.5, -0.4, -0.3],
      "mc": {"samples": 60000, "seed": 9}
    })");
    CHECK(run("sigma --config " + cfg.string() + " --out " + (dir / "o").string()) == 0);
    const std::string md = slurp(dir / "o" / "sigma.md");
    CHECK(md.find("bracket") != std::string::npos);
}

TEST_CASE("sweep flags growth past the classical boundary") {
    const auto dir = fs::temp_directory_path() / "conekit-cli-sweep";
    const auto cfg = make_config(dir, R"({
      "schema_version": 1,
      "cone": {"kind": "orthant", "dim": 1},
      "cases": [{"theorem": "Hardy1D", "p": 2, "q": 2, "gamma": 0}],
      "sweep": {"param": "gamma", "values": [0.5, 1.0]},
      "mc": {"samples": 120000, "seed": 11}
    })");
    CHECK(run("sweep --config " + cfg.string() + " --out " + (dir / "o").string()) == 0);
    const std::string csv = slurp(dir / "o" / "sweep.csv");
    CHECK(csv.find("divergence-growth") != std::string::npos);
    CHECK(csv.find("consistent") != std::string::npos);
}
