/****************************************************************************
 * Copyright (c) 2026 by the athena-kin authors                             *
 * All rights reserved.                                                     *
 *                                                                          *
 * This file is part of the athena-kin library. athena-kin is               *
 * distributed under the Apache-2.0 license. For the licensing terms        *
 * see the LICENSE file in the top-level directory.                         *
 *                                                                          *
 * SPDX-License-Identifier: Apache-2.0                                      *
 ****************************************************************************/

#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#ifndef ATHENA_CLI_PATH
#error "ATHENA_CLI_PATH must point at the built binary"
#endif

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

/// Runs the CLI with stderr folded into stdout.
RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(ATHENA_CLI_PATH) + " " + args + " 2>&1";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    while (std::fgets(buf.data(), buf.size(), pipe)) r.out += buf.data();
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

double grab_number(const std::string& text, const std::string& key) {
    const auto pos = text.find(key);
    REQUIRE(pos != std::string::npos);
    return std::strtod(text.c_str() + pos + key.size(), nullptr);
}

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("ik passes the roll straight through and verifies residuals") {
    const RunResult r = run_cli("ik --arch athena1 --psi 0 --theta 90 --phi 7 --lins 100 "
                                "--verify");
    CHECK(r.exit_code == 0);
    CHECK(grab_number(r.out, "q4 = ") == doctest::Approx(7.0).epsilon(1e-9));
    // All four scaled residuals at numeric zero.
    std::size_t pos = 0;
    int seen = 0;
    while ((pos = r.out.find("(scaled ", pos)) != std::string::npos) {
        const double v = std::strtod(r.out.c_str() + pos + 8, nullptr);
        CHECK(v <= 1e-9);
        ++seen;
        pos += 8;
    }
    CHECK(seen == 4);
}

TEST_CASE("unreachable poses exit 2 with the reason code") {
    const RunResult r = run_cli("ik --arch athena1 --psi 90 --theta 90 --lins 100");
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("NO_REAL_SOLUTION") != std::string::npos);
}

TEST_CASE("malformed numbers exit 1 naming the flag") {
    const RunResult r = run_cli("fk --arch athena1 --q1 twelve --q2 0 --q3 100");
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("--q1") != std::string::npos);
}

TEST_CASE("fk of ik output reproduces the pose to text precision") {
    const RunResult ik = run_cli("--json ik --arch athena2 --psi 25 --theta 130 --phi -10 "
                                 "--lins 150");
    REQUIRE(ik.exit_code == 0);
    const auto joints = nlohmann::json::parse(ik.out);
    char cmd[256];
    std::snprintf(cmd, sizeof cmd,
                  "--json fk --arch athena2 --q1 %.12f --q2 %.12f --q3 %.12f --q4 %.12f",
                  joints["q1_mm"].get<double>(), joints["q2_mm"].get<double>(),
                  joints["q3_deg"].get<double>(), joints["q4_deg"].get<double>());
    const RunResult fk = run_cli(cmd);
    REQUIRE(fk.exit_code == 0);
    const auto pose = nlohmann::json::parse(fk.out);
    CHECK(pose["psi_deg"].get<double>() == doctest::Approx(25.0).epsilon(1e-6));
    CHECK(pose["theta_deg"].get<double>() == doctest::Approx(130.0).epsilon(1e-6));
    CHECK(pose["phi_deg"].get<double>() == doctest::Approx(-10.0).epsilon(1e-6));
    CHECK(pose["l_ins_mm"].get<double>() == doctest::Approx(150.0).epsilon(1e-6));
}

TEST_CASE("count-only workspace prints the candidate total") {
    const RunResult r = run_cli("workspace --arch athena1 --count-only --format ''");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("total=13314576") != std::string::npos);
}

TEST_CASE("quick sweeps are worker-count invariant at the CLI") {
    const RunResult serial =
        run_cli("--workers 1 workspace --arch both --step 50 --format ''");
    const RunResult parallel =
        run_cli("--workers 8 workspace --arch both --step 50 --format ''");
    CHECK(serial.exit_code == 0);
    CHECK(serial.out == parallel.out);
}

TEST_CASE("PLY export declares the valid point count") {
    const std::string prefix = temp_path("cli_ws");
    const RunResult r = run_cli("workspace --arch athena1 --step 50 --format ply --out " +
                                prefix);
    REQUIRE(r.exit_code == 0);
    const double valid = grab_number(r.out, "valid=");
    std::ifstream ply(prefix + ".ply");
    REQUIRE(ply.good());
    std::string line;
    std::getline(ply, line);
    std::getline(ply, line);
    std::getline(ply, line);
    CHECK(line == "element vertex " + std::to_string(static_cast<long long>(valid)));
    std::filesystem::remove(prefix + ".ply");
}

TEST_CASE("compare on synthetic sweep files reproduces the reference ratio") {
    // Two minimal sweep documents with injected valid counts.
    const auto write_synthetic = [](const std::string& path, const char* arch,
                                    unsigned long long valid) {
        nlohmann::ordered_json doc;
        doc["spec"] = {{"x_range_mm", {0.0, 300.0}},
                       {"y_range_mm", {-500.0, 500.0}},
                       {"z_range_mm", {-350.0, 0.0}},
                       {"step_mm", 2.0},
                       {"frame", "rcm"}};
        doc["arch"] = arch;
        doc["valid_count"] = valid;
        doc["total_candidates"] = 13314576ull;
        std::ofstream(path) << doc.dump();
    };
    const std::string a = temp_path("cli_cmp_a.json");
    const std::string b = temp_path("cli_cmp_b.json");
    write_synthetic(a, "athena1", 196817ull);
    write_synthetic(b, "athena2", 241586ull);

    const RunResult r = run_cli("compare " + a + " " + b);
    REQUIRE(r.exit_code == 0);
    const double pct = grab_number(r.out, "difference (b vs a): ");
    CHECK(pct == doctest::Approx(22.75).epsilon(0.0022));

    // Identical inputs: zero difference.
    const RunResult same = run_cli("compare " + a + " " + a);
    REQUIRE(same.exit_code == 0);
    CHECK(grab_number(same.out, "difference (b vs a): ") == 0.0);

    // Mismatched grids exit 5.
    write_synthetic(b, "athena2", 241586ull);
    std::string text;
    {
        std::ifstream in(b);
        text.assign((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
    }
    const auto pos = text.find("2.0");
    text.replace(pos, 3, "4.0");
    std::ofstream(b) << text;
    const RunResult mismatch = run_cli("compare " + a + " " + b);
    CHECK(mismatch.exit_code == 5);

    std::filesystem::remove(a);
    std::filesystem::remove(b);
}

TEST_CASE("default-geometry comparison favors the revolute crank") {
    const RunResult r = run_cli("compare --both --step 20");
    REQUIRE(r.exit_code == 0);
    const double pct = grab_number(r.out, "difference (b vs a): ");
    CHECK(pct > 0.0);
}

TEST_CASE("singularity scan emits the documented JSON fields") {
    const std::string out = temp_path("cli_scan.json");
    const RunResult r =
        run_cli("singularity --arch athena1 --step 40 --threshold 1e-8 --out " + out);
    REQUIRE(r.exit_code == 0);
    std::ifstream in(out);
    const auto doc = nlohmann::json::parse(in);
    CHECK(doc["arch"] == "athena1");
    CHECK(doc["threshold"] == 1e-8);
    CHECK(doc["evaluated_count"].get<std::uint64_t>() > 0);
    CHECK(doc["flagged_count"].get<std::uint64_t>() == 0);
    CHECK(doc["min_abs_det_q"].get<double>() > 0.0);
    CHECK(doc["argmin_point"].size() == 3);
    std::filesystem::remove(out);
}

TEST_CASE("stiffness arithmetic mode and error path") {
    const RunResult a = run_cli("stiffness --from-deflection 30 0.23");
    CHECK(a.exit_code == 0);
    CHECK(std::strtod(a.out.c_str(), nullptr) == doctest::Approx(130.43).epsilon(0.0001));

    const RunResult b = run_cli("stiffness --from-deflection 30 3.96");
    CHECK(b.exit_code == 0);
    CHECK(std::strtod(b.out.c_str(), nullptr) == doctest::Approx(7.58).epsilon(0.0014));

    const RunResult c = run_cli("stiffness --from-deflection 30 0");
    CHECK(c.exit_code == 1);

    const RunResult rep = run_cli("stiffness --estimate");
    CHECK(rep.exit_code == 0);
    CHECK(rep.out.find("fem-reference") != std::string::npos);
    CHECK(rep.out.find("lumped-model") != std::string::npos);
    CHECK(rep.out.find("ratio athena1/athena2") != std::string::npos);
}

TEST_CASE("environment variable supplies the configuration path") {
    // A config whose crank travel is squeezed to ~zero turns a default-config
    // success into a no-root-in-range failure, proving the file was honored.
    const std::string cfg = temp_path("cli_env_config.json");
    {
        nlohmann::ordered_json doc;
        doc["geometry"] = {{"l1", 420.0}, {"l2", 250.0},   {"l3", 430.0}, {"l4", 60.0},
                           {"l5", 40.0},  {"l2min", 30.0}, {"l2max", 400.0},
                           {"l_tool", 450.0}, {"l01", 0.0}, {"l02", -370.0}, {"l03", 0.0}};
        doc["limits"] = {{"q3a2_range_deg", {-0.001, 0.001}}};
        std::ofstream(cfg) << doc.dump();
    }
    const std::string args = "ik --arch athena2 --psi 10 --theta 120 --lins 100";
    const RunResult plain = run_cli(args);
    CHECK(plain.exit_code == 0);

    const std::string cmd = "ATHENA_KIN_CONFIG=" + cfg + " " + ATHENA_CLI_PATH + " " +
                            args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf{};
    while (std::fgets(buf.data(), buf.size(), pipe)) out += buf.data();
    const int status = pclose(pipe);
    CHECK(WEXITSTATUS(status) == 2);
    CHECK(out.find("NO_ROOT_IN_RANGE") != std::string::npos);
    std::filesystem::remove(cfg);
}

TEST_CASE("run manifest captures the command, config hash and flags") {
    const std::string path = temp_path("cli_manifest.json");
    const RunResult r =
        run_cli("--manifest " + path + " stiffness --from-deflection 30 0.23");
    REQUIRE(r.exit_code == 0);
    std::ifstream in(path);
    const auto doc = nlohmann::json::parse(in);
    CHECK(doc["tool"] == "athena-kin");
    CHECK(doc["subcommand"] == "stiffness");
    CHECK(doc.contains("duration_ms"));
    CHECK(doc["flags"]["from_deflection"][0] == 30.0);
    std::filesystem::remove(path);
}

TEST_CASE("lenient mode tolerates unknown configuration keys") {
    const std::string cfg = temp_path("cli_lenient.json");
    {
        std::ifstream ref("data/athena_default.json", std::ios::binary);
        nlohmann::json doc;
        if (ref.good()) {
            doc = nlohmann::json::parse(ref);
        } else {
            FAIL("expected to run from the repository root");
        }
        doc["geometry"]["future_key"] = 1.0;
        std::ofstream(cfg) << doc.dump();
    }
    const RunResult strict = run_cli("--config " + cfg + " ik --theta 120 --lins 100");
    CHECK(strict.exit_code == 1);
    CHECK(strict.out.find("future_key") != std::string::npos);
    const RunResult lenient =
        run_cli("--lenient --config " + cfg + " ik --theta 120 --lins 100");
    CHECK(lenient.exit_code == 0);
    std::filesystem::remove(cfg);
}

TEST_CASE("strided singularity scans evaluate a subsample") {
    const RunResult full = run_cli("--json singularity --arch athena2 --step 40");
    const RunResult strided = run_cli("--json singularity --arch athena2 --step 40 "
                                      "--stride 7");
    REQUIRE(full.exit_code == 0);
    REQUIRE(strided.exit_code == 0);
    const auto f = nlohmann::json::parse(full.out);
    const auto s = nlohmann::json::parse(strided.out);
    CHECK(s["evaluated_count"].get<std::uint64_t>() <
          f["evaluated_count"].get<std::uint64_t>());
    CHECK(s["min_abs_det_q"].get<double>() >= f["min_abs_det_q"].get<double>());
}
