// End-to-end tests of the geocluster binary: pinned CLI examples, the golden
// 4-point pipeline, exit-code mapping, and byte-identical reruns. Everything
// here shells out to the real executable.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef GEOCLUSTER_CLI_PATH
#error "GEOCLUSTER_CLI_PATH must be defined"
#endif
#ifndef GEOCLUSTER_FIXTURES_DIR
#error "GEOCLUSTER_FIXTURES_DIR must be defined"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
    fs::path dir;
    TempDir() {
        dir = fs::temp_directory_path() / ("geocluster_cli_test_" + std::to_string(::getpid()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~TempDir() { fs::remove_all(dir); }
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

// Runs the CLI from `cwd` with stdout/stderr captured to files; returns the
// exit status.
int run_cli(const fs::path& cwd, const std::string& args) {
    std::string cmd = "cd '" + cwd.string() + "' && '" + std::string(GEOCLUSTER_CLI_PATH) +
                      "' " + args + " > cli_stdout.txt 2> cli_stderr.txt";
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fixture(const std::string& name) { return fs::path(GEOCLUSTER_FIXTURES_DIR) / name; }

void stage_line4(const TempDir& tmp) {
    fs::copy_file(fixture("line4.csv"), tmp.dir / "line4.csv");
    fs::copy_file(fixture("line4_outcomes.csv"), tmp.dir / "line4_outcomes.csv");
}

} // namespace

TEST_CASE("plan-k prints the paper calibration") {
    TempDir tmp;
    int rc = run_cli(tmp.dir, "plan-k --volume 685.7 --n 38000 --gamma 2 --dim 2");
    CHECK(rc == 0);
    CHECK(slurp(tmp.dir / "cli_stdout.txt") == "78\n");
}

TEST_CASE("validation failures exit 2 with a message") {
    TempDir tmp;
    stage_line4(tmp);

    SUBCASE("cluster with k=0") {
        int rc = run_cli(tmp.dir, "cluster --points line4.csv --k 0 --out c.json");
        CHECK(rc == 2);
        CHECK(slurp(tmp.dir / "cli_stderr.txt").find("k") != std::string::npos);
    }
    SUBCASE("missing required flag") {
        int rc = run_cli(tmp.dir, "assign --clusters line4.csv");
        CHECK(rc == 2);
    }
    SUBCASE("unknown subcommand") {
        int rc = run_cli(tmp.dir, "frobnicate");
        CHECK(rc == 2);
    }
    SUBCASE("missing input file") {
        int rc = run_cli(tmp.dir, "cluster --points nope.csv --k 2 --out c.json");
        CHECK(rc == 2);
    }
}

TEST_CASE("full pipeline reproduces the golden report byte for byte") {
    TempDir tmp;
    stage_line4(tmp);

    REQUIRE(run_cli(tmp.dir, "cluster --points line4.csv --k 2 --out clusters.json") == 0);
    REQUIRE(run_cli(tmp.dir, "assign --clusters clusters.json --seed 11 --out draw.json") == 0);
    REQUIRE(run_cli(tmp.dir,
                    "estimate --points line4.csv --clusters clusters.json --draw draw.json "
                    "--outcomes line4_outcomes.csv --smoothness-c 0.1 --gamma-decay 2 "
                    "--strict-paper --out report.json") == 0);

    CHECK(slurp(tmp.dir / "report.json") == slurp(fixture("line4_report.json")));

    // the pinned numbers, independent of the serialization
    json rep = json::parse(slurp(tmp.dir / "report.json"));
    REQUIRE(rep["estimates"].size() == 4);
    CHECK(rep["estimates"][0]["estimand"] == "direct");
    CHECK(rep["estimates"][0]["theta_hat"].get<double>() == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(rep["estimates"][1]["theta_hat"].get<double>() == doctest::Approx(-0.25).epsilon(1e-12));
    CHECK(rep["estimates"][2]["theta_hat"].get<double>() == doctest::Approx(-1.25).epsilon(1e-12));
    CHECK(rep["estimates"][3]["theta_hat"].get<double>() == doctest::Approx(-0.75).epsilon(1e-12));
    CHECK(rep["r_n"].get<double>() == 0.5);

    // reruns are byte-identical
    REQUIRE(run_cli(tmp.dir,
                    "estimate --points line4.csv --clusters clusters.json --draw draw.json "
                    "--outcomes line4_outcomes.csv --smoothness-c 0.1 --gamma-decay 2 "
                    "--strict-paper --out report2.json") == 0);
    CHECK(slurp(tmp.dir / "report2.json") == slurp(tmp.dir / "report.json"));
}

TEST_CASE("estimate on an all-control draw exits 3 and records why") {
    TempDir tmp;
    stage_line4(tmp);
    REQUIRE(run_cli(tmp.dir, "cluster --points line4.csv --k 2 --out clusters.json") == 0);
    // seed 7 draws W = (0, 0): no treated cluster, so arm 1 is empty everywhere
    REQUIRE(run_cli(tmp.dir, "assign --clusters clusters.json --seed 7 --out draw.json") == 0);
    int rc = run_cli(tmp.dir,
                     "estimate --points line4.csv --clusters clusters.json --draw draw.json "
                     "--outcomes line4_outcomes.csv --out report.json");
    CHECK(rc == 3);
    json rep = json::parse(slurp(tmp.dir / "report.json"));
    for (const auto& e : rep["estimates"]) {
        CHECK(e["dropped_reason"].is_string());
        CHECK(e["dropped_arm"].get<int>() == 1);
    }
}

TEST_CASE("simulate writes a manifest-led csv and reruns identically") {
    TempDir tmp;
    {
        std::ofstream cfg(tmp.dir / "sim.json", std::ios::binary);
        cfg << R"({"cells": [{"model": "ma", "n": 60, "alpha_n": 1.0, "reps": 3}]})" << "\n";
    }
    REQUIRE(run_cli(tmp.dir, "simulate --config sim.json --seed 7 --out rep.csv --json rep.json") ==
            0);
    std::string csv = slurp(tmp.dir / "rep.csv");
    CHECK(csv.rfind("# manifest: ", 0) == 0);
    CHECK(csv.find("model,n,alpha_n,p,q,gamma_tilde,reps,k,r_n,invalid,estimand") !=
          std::string::npos);
    int rows = 0;
    for (char c : csv)
        if (c == '\n') ++rows;
    CHECK(rows == 2 + 4); // manifest + header + one row per estimand

    json rep = json::parse(slurp(tmp.dir / "rep.json"));
    CHECK(rep["cells"].size() == 1);
    CHECK(rep["cells"][0]["stats"].size() == 4);
    int used = rep["cells"][0]["stats"][0]["used_reps"].get<int>();
    int degen = rep["cells"][0]["stats"][0]["degenerate"].get<int>();
    CHECK(used + degen == 3);

    REQUIRE(run_cli(tmp.dir, "simulate --config sim.json --seed 7 --out rep2.csv") == 0);
    CHECK(slurp(tmp.dir / "rep2.csv") == csv);

    SUBCASE("config typos are rejected") {
        std::ofstream bad(tmp.dir / "bad.json", std::ios::binary);
        bad << R"({"cells": [{"model": "ma", "nn": 60}]})" << "\n";
        bad.close();
        CHECK(run_cli(tmp.dir, "simulate --config bad.json --seed 7 --out x.csv") == 2);
    }
}

TEST_CASE("variogram: fit, artifact, and failure exit code") {
    TempDir tmp;
    // pinned elsewhere in the suite: this run recovers gamma_hat ~ 2.17
    REQUIRE(run_cli(tmp.dir, "variogram --model ma --n 600 --reps 250 --seed 77 --out v.json") ==
            0);
    json v = json::parse(slurp(tmp.dir / "v.json"));
    CHECK(v["gamma_hat"].get<double>() == doctest::Approx(2.171589846).epsilon(1e-6));
    CHECK(v["positive_arms"].get<int>() == 3);
    CHECK(v["theta"].size() == 3);

    // too few replications at this size: the slope fit fails and maps to 3
    CHECK(run_cli(tmp.dir, "variogram --model ma --n 400 --reps 60 --seed 77") == 3);

    // no bundled oracle for cliff-ord: plain validation error
    CHECK(run_cli(tmp.dir, "variogram --model cliff-ord --n 100 --seed 1") == 2);
}
