// Command-line frontend: exit codes, artifacts, report determinism.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sturm/report.hpp"

namespace fs = std::filesystem;

namespace {

const char* kCli = "./sturm";

int run(const std::string& args) {
    std::string cmd = std::string(kCli) + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

fs::path write_config(const std::string& name, double lambda) {
    fs::path dir = fs::temp_directory_path() / "sturm_cli_tests";
    fs::create_directories(dir);
    fs::path p = dir / name;
    std::ofstream f(p);
    f << "[problem]\na = 1\nf = lambda*u*(1-u^2)\nlambda = " << lambda
      << "\n[numerics]\nseed = 0\n";
    return p;
}

fs::path out_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / "sturm_cli_tests" / name;
    fs::remove_all(p);
    return p;
}

nlohmann::json load_json(const fs::path& p) {
    std::ifstream f(p);
    REQUIRE(f.good());
    return nlohmann::json::parse(f);
}

}  // namespace

TEST_CASE("analyze writes a full artifact set and exits cleanly") {
    fs::path cfg = write_config("l3.ini", 3.0);
    fs::path out = out_dir("analyze3");
    CHECK(run("analyze --config " + cfg.string() + " --out " + out.string() +
              " --threads 4") == 0);

    auto rep = load_json(out / "report.json");
    CHECK(rep["equilibria_count"] == 5);
    CHECK(rep["sigma"] == nlohmann::json({1, 4, 3, 2, 5}));
    CHECK(rep["sigma_cycles"] == "(2 4)");
    CHECK(rep["morse_indices"] == nlohmann::json({0, 1, 2, 1, 0}));
    CHECK(rep["graph"]["edges"].size() == 8);
    for (auto& c : rep["checks"]) CHECK(c["pass"] == true);
    CHECK(fs::exists(out / "attractor.dot"));
    for (int i = 1; i <= 5; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "eq_%02d.csv", i);
        CHECK(fs::exists(out / "equilibria" / name));
    }
}

TEST_CASE("analyze at a branch point reports the tangency with exit 2") {
    fs::path cfg = write_config("l2.ini", 2.0);
    fs::path out = out_dir("analyze2");
    CHECK(run("analyze --config " + cfg.string() + " --out " + out.string()) == 2);
    auto rep = load_json(out / "report.json");
    bool any_nonhyperbolic = false;
    for (auto& e : rep["equilibria"])
        if (e["hyperbolic"] == false) any_nonhyperbolic = true;
    CHECK(any_nonhyperbolic);
}

TEST_CASE("bad invocations exit 1") {
    CHECK(run("analyze --config /nonexistent/missing.ini") == 1);
    CHECK(run("analyze") == 1);  // missing required flag
    fs::path cfg = write_config("l3b.ini", 3.0);
    CHECK(run("verify --config " + cfg.string() + " --suite nosuchsuite") == 1);
    CHECK(run("frobnicate --config " + cfg.string()) == 1);
}

TEST_CASE("lambda override changes the analyzed problem") {
    fs::path cfg = write_config("l3c.ini", 3.0);
    fs::path out = out_dir("analyze_override");
    CHECK(run("analyze --config " + cfg.string() + " --out " + out.string() +
              " --lambda 1 --threads 4") == 0);
    auto rep = load_json(out / "report.json");
    CHECK(rep["equilibria_count"] == 3);
    CHECK(rep["sigma_cycles"] == "id");
}

TEST_CASE("scan below the first branch point finds a constant count") {
    fs::path cfg = write_config("l1.ini", 1.0);
    fs::path out = out_dir("scan_low");
    CHECK(run("scan --config " + cfg.string() + " --out " + out.string() +
              " --lambda-min 0.5 --lambda-max 1.5 --steps 10 --threads 4") == 0);
    auto rep = load_json(out / "scan.json");
    CHECK(rep["bifurcations"].empty());
    for (auto& row : rep["rows"]) CHECK(row["count"] == 3);
}

TEST_CASE("fast verification suites pass from the frontend") {
    fs::path cfg = write_config("l3d.ini", 3.0);
    CHECK(run("verify --config " + cfg.string() +
              " --suite symmetry --suite wolfrum --threads 4") == 0);
    // strict radius ordering only holds on the full grid below the first
    // branch point, so the monotonicity suite is run there
    CHECK(run("verify --config " + cfg.string() +
              " --lambda 0.5 --suite monotonicity --threads 4") == 0);
}

TEST_CASE("reports are deterministic apart from timings") {
    fs::path cfg = write_config("l3e.ini", 3.0);
    fs::path out1 = out_dir("det1");
    fs::path out2 = out_dir("det2");
    CHECK(run("analyze --config " + cfg.string() + " --out " + out1.string() +
              " --threads 1") == 0);
    CHECK(run("analyze --config " + cfg.string() + " --out " + out2.string() +
              " --threads 4") == 0);
    auto r1 = load_json(out1 / "report.json");
    auto r2 = load_json(out2 / "report.json");
    r1.erase("timings");
    r2.erase("timings");
    CHECK(r1.dump() == r2.dump());

    std::ifstream d1(out1 / "attractor.dot"), d2(out2 / "attractor.dot");
    std::stringstream s1, s2;
    s1 << d1.rdbuf();
    s2 << d2.rdbuf();
    CHECK(s1.str() == s2.str());
}

TEST_CASE("spec hash is stable and sensitive to the problem fields") {
    sturm::ProblemSpec a = sturm::parse_problem_spec("[problem]\nf = lambda*u*(1-u^2)\n");
    sturm::ProblemSpec b = a;
    CHECK(sturm::spec_hash(a) == sturm::spec_hash(b));
    b.lambda = 2.0;
    CHECK(sturm::spec_hash(a) != sturm::spec_hash(b));
}
