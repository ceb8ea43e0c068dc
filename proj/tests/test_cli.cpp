#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hyperalg/hyperalg.hpp"

namespace fs = std::filesystem;
using hyperalg::json;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(HYPERALG_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("hyperalg_test_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("levelset: unit circle artifacts") {
    TempDir dir("levelset");
    const int code =
        run_cli("levelset --phi poly:0,1 --r 1 --seed 0,1 --out " + dir.path.string());
    REQUIRE(code == 0);

    const std::string csv = slurp(dir.path / "arc.csv");
    REQUIRE(csv.find("re,im,curvature") != std::string::npos);

    const json report = hyperalg::read_json_file((dir.path / "levelset_report.json").string());
    CHECK(report.at("max_residual").get<double>() < 1e-8);
    CHECK(report.at("status").get<std::string>() == "closed");
    CHECK(report.contains("manifest"));
    CHECK(report.at("manifest").at("version").get<std::string>() == HYPERALG_VERSION);

    const json arc = hyperalg::read_json_file((dir.path / "arc.json").string());
    CHECK(arc.at("points").size() > 100);
}

TEST_CASE("levelset: cos arc with small residuals") {
    TempDir dir("levelset_cos");
    const int code =
        run_cli("levelset --phi cos --r 1 --seed 0.1,0.05 --out " + dir.path.string());
    REQUIRE(code == 0);
    const json report = hyperalg::read_json_file((dir.path / "levelset_report.json").string());
    CHECK(report.at("max_residual").get<double>() < 1e-8);
}

TEST_CASE("levelset: constant symbol is malformed input") {
    TempDir dir("levelset_const");
    CHECK(run_cli("levelset --phi poly:2 --r 1 --out " + dir.path.string()) == 1);
}

TEST_CASE("levelset: unreachable seed level is a trace failure") {
    TempDir dir("levelset_seed");
    CHECK(run_cli("levelset --phi poly:0,1 --r 1 --seed 5,0 --out " + dir.path.string()) == 2);
}

TEST_CASE("construct: MacLane demo end to end") {
    TempDir dir("construct");
    const int code = run_cli("construct --phi poly:0,1 --poly t1^2 --eps 0.1 --out " +
                             dir.path.string());
    REQUIRE(code == 0);

    const json final_json = hyperalg::read_json_file((dir.path / "final.json").string());
    CHECK(final_json.at("converged").get<bool>());
    CHECK(final_json.at("distance").get<double>() < 0.1);

    const json geom = hyperalg::read_json_file((dir.path / "geometry.json").string());
    CHECK(geom.at("certificate").at("all_pass").get<bool>());
    CHECK(geom.at("r").get<double>() > 1.0);

    const json idx = hyperalg::read_json_file((dir.path / "indexset.json").string());
    CHECK(idx.at("beta") == json::array({2}));

    const std::string csv = slurp(dir.path / "orbit_report.csv");
    CHECK(csv.find("alpha,n,distance,dominant_term_re,dominant_term_im") != std::string::npos);
}

TEST_CASE("construct: byte-identical artifacts on re-run") {
    TempDir dir1("construct_repro1");
    TempDir dir2("construct_repro2");
    const std::string args = "construct --phi poly:0,1 --poly t1^2 --eps 0.1 --seed-weights 777";
    REQUIRE(run_cli(args + " --out " + dir1.path.string()) == 0);
    REQUIRE(run_cli(args + " --out " + dir2.path.string()) == 0);
    for (const char* name : {"final.json", "geometry.json", "indexset.json", "orbit_report.json"}) {
        INFO(name);
        // manifests embed parameters, not paths, so the bytes must agree
        CHECK(slurp(dir1.path / name) == slurp(dir2.path / name));
    }
    CHECK(slurp(dir1.path / "orbit_report.csv") == slurp(dir2.path / "orbit_report.csv"));
}

TEST_CASE("construct: constant term in the polynomial is malformed") {
    TempDir dir("construct_const");
    CHECK(run_cli("construct --phi poly:0,1 --poly 1+t1 --out " + dir.path.string()) == 1);
}

TEST_CASE("construct: verify-claim mode via an inline index set") {
    TempDir dir("construct_idx");
    const int code = run_cli(
        "construct --phi poly:0,1 --indexset [[2,0],[0,1]] --n-max 64 --out " + dir.path.string());
    REQUIRE(code == 0);
    const json report = hyperalg::read_json_file((dir.path / "orbit_report.json").string());
    REQUIRE(report.at("rows").size() >= 8);
    // beta row distances shrink across the schedule
    double first = -1, last = -1;
    for (const auto& row : report.at("rows")) {
        if (row.at("alpha") == json::array({2, 0})) {
            if (first < 0) first = row.at("distance").get<double>();
            last = row.at("distance").get<double>();
        }
    }
    CHECK(last < first);
}

TEST_CASE("construct: translation demo with manual geometry and real transport") {
    TempDir dir("construct_tau");
    const int code = run_cli(
        "construct --phi exp:1 --poly t1 --skip-certification --r 1.2 --eps 0.01 "
        "--transport-real -1,1,9 --out " +
        dir.path.string());
    REQUIRE(code == 0);
    const json final_json = hyperalg::read_json_file((dir.path / "final.json").string());
    CHECK(final_json.at("converged").get<bool>());
    const std::string csv = slurp(dir.path / "real_restriction.csv");
    CHECK(csv.find("x,re,im") != std::string::npos);
}

TEST_CASE("algdep: relation with exact certificate") {
    TempDir dir("algdep_rel");
    const int code =
        run_cli("algdep --mode relation --poly t1 --poly t1^2 --out " + dir.path.string());
    REQUIRE(code == 0);
    const json rel = hyperalg::read_json_file((dir.path / "relation.json").string());
    CHECK(rel.at("certified_zero").get<bool>());
    CHECK(rel.at("certificate_residual").at("terms").empty());
    CHECK(rel.at("q").get<int>() == 5);
}

TEST_CASE("algdep: dependence test modes") {
    TempDir dir("algdep_test");
    const std::string e1 = R"('{"terms":[{"lambda":["1","0"],"coeff":["1","0"]}]}')";
    const std::string e2 = R"('{"terms":[{"lambda":["2","0"],"coeff":["1","0"]}]}')";
    const int code = run_cli("algdep --mode test --m 2 --expsum " + e1 + " --expsum " + e2 +
                             " --out " + dir.path.string());
    REQUIRE(code == 0);
    const json rel = hyperalg::read_json_file((dir.path / "relation.json").string());
    CHECK(rel.at("dependent").get<bool>());
    CHECK(rel.at("certificate_empty_expsum").get<bool>());

    const std::string e3 = R"('{"terms":[{"lambda":["22/7","0"],"coeff":["1","0"]}]}')";
    REQUIRE(run_cli("algdep --mode test --m 4 --expsum " + e1 + " --expsum " + e3 + " --out " +
                    dir.path.string()) == 0);
    const json rel2 = hyperalg::read_json_file((dir.path / "relation.json").string());
    CHECK_FALSE(rel2.at("dependent").get<bool>());
}

TEST_CASE("algdep: N <= k is the dimension precondition") {
    TempDir dir("algdep_dim");
    CHECK(run_cli("algdep --mode relation --poly t1^2 --out " + dir.path.string()) == 5);
}

TEST_CASE("algdep: inexact exponents are malformed input") {
    TempDir dir("algdep_bad");
    const std::string bad = R"('{"terms":[{"lambda":[3.14,0],"coeff":["1","0"]}]}')";
    CHECK(run_cli("algdep --mode test --expsum " + bad + " --expsum " + bad + " --out " +
                  dir.path.string()) == 1);
}
