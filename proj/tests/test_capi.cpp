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

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "athena/athena_kin.h"

namespace {

struct Model {
    athena_model* ptr = nullptr;
    ~Model() { athena_model_destroy(ptr); }
};

struct Workspace {
    athena_workspace* ptr = nullptr;
    ~Workspace() { athena_workspace_destroy(ptr); }
};

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("version and status names are stable strings") {
    CHECK(std::strlen(athena_version()) > 0);
    CHECK(std::string(athena_status_name(ATHENA_OK)) == "ok");
    CHECK(std::string(athena_status_name(ATHENA_ERR_GRID_MISMATCH)) == "grid-mismatch");
    CHECK(std::string(athena_reason_name(ATHENA_REASON_NO_REAL_SOLUTION)) ==
          "NO_REAL_SOLUTION");
    CHECK(std::string(athena_arch_name(ATHENA_ARCH_2)) == "athena2");
}

TEST_CASE("default model round trips through serialization") {
    Model m;
    REQUIRE(athena_model_create_default(&m.ptr) == ATHENA_OK);

    size_t needed = 0;
    REQUIRE(athena_model_serialize(m.ptr, nullptr, 0, &needed) == ATHENA_OK);
    REQUIRE(needed > 0);
    std::string text(needed + 1, '\0');
    REQUIRE(athena_model_serialize(m.ptr, text.data(), text.size(), &needed) == ATHENA_OK);
    text.resize(needed);

    Model again;
    REQUIRE(athena_model_create_from_json(text.c_str(), 0, &again.ptr) == ATHENA_OK);
    double a = 0.0, b = 0.0;
    for (const char* key : {"l1", "l2", "l0", "lins_max_mm", "q3_athena2_nmm_per_rad"}) {
        REQUIRE(athena_model_get_param(m.ptr, key, &a) == ATHENA_OK);
        REQUIRE(athena_model_get_param(again.ptr, key, &b) == ATHENA_OK);
        CHECK(a == b);
    }

    char hash1[32], hash2[32];
    REQUIRE(athena_model_content_hash(m.ptr, hash1, sizeof hash1) == ATHENA_OK);
    REQUIRE(athena_model_content_hash(again.ptr, hash2, sizeof hash2) == ATHENA_OK);
    CHECK(std::string(hash1) == hash2);
    CHECK(std::string(hash1).rfind("fnv1a64:", 0) == 0);
}

TEST_CASE("config errors carry machine-checkable statuses and messages") {
    Model m;
    CHECK(athena_model_create_from_json("{ not json", 0, &m.ptr) == ATHENA_ERR_PARSE);
    CHECK(std::strlen(athena_last_error()) > 0);
    CHECK(athena_model_create_from_json(R"({"geometry": {}})", 0, &m.ptr) ==
          ATHENA_ERR_VALIDATION);
    CHECK(athena_model_create_from_file("/nonexistent/path.json", 0, &m.ptr) ==
          ATHENA_ERR_IO);
}

TEST_CASE("options validate their values") {
    Model m;
    REQUIRE(athena_model_create_default(&m.ptr) == ATHENA_OK);
    CHECK(athena_model_set_option(m.ptr, "variant", "symmetrized") == ATHENA_OK);
    char buf[32];
    CHECK(athena_model_get_option(m.ptr, "variant", buf, sizeof buf) == ATHENA_OK);
    CHECK(std::string(buf) == "symmetrized");
    CHECK(athena_model_set_option(m.ptr, "variant", "bogus") ==
          ATHENA_ERR_INVALID_ARGUMENT);
    CHECK(athena_model_set_option(m.ptr, "no_such_option", "x") ==
          ATHENA_ERR_INVALID_ARGUMENT);
}

TEST_CASE("kinematics through the C surface") {
    Model m;
    REQUIRE(athena_model_create_default(&m.ptr) == ATHENA_OK);

    const athena_pose pose{0.3, 2.1, 0.25, 120.0};
    athena_tip tip{};
    REQUIRE(athena_pose_to_tip(m.ptr, &pose, &tip) == ATHENA_OK);

    athena_pose back{};
    int degen = -1;
    REQUIRE(athena_tip_to_pose(m.ptr, &tip, pose.phi_rad, &back, &degen) == ATHENA_OK);
    CHECK(degen == 0);
    CHECK(back.theta_rad == doctest::Approx(pose.theta_rad).epsilon(1e-12));

    for (int arch : {ATHENA_ARCH_1, ATHENA_ARCH_2}) {
        athena_joints q{};
        unsigned mask = 0;
        REQUIRE(athena_ik(m.ptr, arch, &pose, 0, &q, &mask) == ATHENA_OK);

        double f[4], scale[4];
        REQUIRE(athena_residuals(m.ptr, arch, &q, &pose, f, scale) == ATHENA_OK);
        for (int i = 0; i < 4; ++i) CHECK(std::fabs(f[i]) <= 1e-9 * scale[i]);

        athena_pose fk{};
        int iters = 0;
        double resid = 0.0;
        REQUIRE(athena_fk(m.ptr, arch, &q, nullptr, &fk, &iters, &resid) == ATHENA_OK);
        CHECK(std::fabs(fk.theta_rad - pose.theta_rad) <= 1e-8);
        CHECK(std::fabs(fk.l_ins_mm - pose.l_ins_mm) <= 1e-8);
        CHECK(fk.phi_rad == pose.phi_rad);
    }
}

TEST_CASE("kinematic failure statuses map to distinct codes") {
    Model m;
    REQUIRE(athena_model_create_default(&m.ptr) == ATHENA_OK);
    // Tip above the rail plane origin: planar distance below l4.
    const athena_pose pose{1.5707963267948966, 1.5707963267948966, 0.0, 100.0};
    athena_joints q{};
    CHECK(athena_ik(m.ptr, ATHENA_ARCH_1, &pose, 0, &q, nullptr) ==
          ATHENA_ERR_UNREACHABLE);

    const athena_tip origin{0.0, 0.0, 0.0};
    athena_pose out{};
    CHECK(athena_tip_to_pose(m.ptr, &origin, 0.0, &out, nullptr) ==
          ATHENA_ERR_DEGENERATE_TIP);

    const athena_tip too_far{600.0, 0.0, 0.0};
    CHECK(athena_tip_to_pose(m.ptr, &too_far, 0.0, &out, nullptr) ==
          ATHENA_ERR_INSERTION_RANGE);
}

TEST_CASE("limit checking is reported separately from solvability") {
    Model m;
    REQUIRE(athena_model_create_default(&m.ptr) == ATHENA_OK);
    // Reachable but with the roll outside its travel range.
    const athena_pose pose{0.3, 2.1, 1.9, 120.0};
    athena_joints q{};
    unsigned mask = 0;
    CHECK(athena_ik(m.ptr, ATHENA_ARCH_1, &pose, 0, &q, &mask) == ATHENA_OK);
    CHECK((mask & (1u << 3)) != 0);
    CHECK(athena_ik(m.ptr, ATHENA_ARCH_1, &pose, 1, &q, &mask) ==
          ATHENA_ERR_JOINT_LIMIT);
}

TEST_CASE("grid helpers and classification") {
    athena_grid grid{};
    athena_grid_default(&grid);
    unsigned long long count = 0;
    REQUIRE(athena_grid_candidate_count(&grid, &count) == ATHENA_OK);
    CHECK(count == 13314576ull);

    grid = athena_grid{0, 10, 0, 10, -10, 0, 5.0};
    unsigned long long visited = 0;
    REQUIRE(athena_grid_enumerate(
                &grid,
                [](void* user, double, double, double) {
                    ++*static_cast<unsigned long long*>(user);
                    return 1;
                },
                &visited) == ATHENA_OK);
    CHECK(visited == 27);

    Model m;
    REQUIRE(athena_model_create_default(&m.ptr) == ATHENA_OK);
    const athena_tip origin{0.0, 0.0, 0.0};
    athena_record rec{};
    REQUIRE(athena_classify(m.ptr, ATHENA_ARCH_1, &origin, 0, &rec) == ATHENA_OK);
    CHECK(rec.reason == ATHENA_REASON_DEGENERATE_TIP);
    CHECK(rec.valid == 0);
}

TEST_CASE("sweep, export, reload and compare through the C surface") {
    Model m;
    REQUIRE(athena_model_create_default(&m.ptr) == ATHENA_OK);
    athena_grid grid{};
    athena_grid_default(&grid);
    grid.step_mm = 25.0;

    athena_sweep_options opt{};
    opt.workers = 2;
    Workspace a, b;
    REQUIRE(athena_sweep(m.ptr, ATHENA_ARCH_1, &grid, &opt, &a.ptr) == ATHENA_OK);
    REQUIRE(athena_sweep(m.ptr, ATHENA_ARCH_2, &grid, &opt, &b.ptr) == ATHENA_OK);

    unsigned long long total = 0, valid_a = 0, valid_b = 0;
    REQUIRE(athena_workspace_counts(a.ptr, &total, &valid_a) == ATHENA_OK);
    REQUIRE(athena_workspace_counts(b.ptr, nullptr, &valid_b) == ATHENA_OK);
    CHECK(total > 0);
    CHECK(valid_a > 0);

    unsigned long long hist[ATHENA_REASON_COUNT];
    REQUIRE(athena_workspace_histogram(a.ptr, hist) == ATHENA_OK);
    unsigned long long sum = 0;
    for (auto h : hist) sum += h;
    CHECK(sum == total);

    const std::string json_path = temp_path("capi_sweep.json");
    REQUIRE(athena_workspace_export(a.ptr, "json", json_path.c_str(), 1) == ATHENA_OK);
    Workspace reloaded;
    REQUIRE(athena_workspace_load_json(json_path.c_str(), &reloaded.ptr) == ATHENA_OK);
    unsigned long long valid_r = 0;
    REQUIRE(athena_workspace_counts(reloaded.ptr, nullptr, &valid_r) == ATHENA_OK);
    CHECK(valid_r == valid_a);

    athena_compare_report rep{};
    REQUIRE(athena_workspace_compare(a.ptr, b.ptr, &rep) == ATHENA_OK);
    CHECK(rep.valid_a == valid_a);
    CHECK(rep.valid_b == valid_b);
    CHECK(rep.valid_b > rep.valid_a);

    // Mismatched grids are refused.
    athena_grid other = grid;
    other.step_mm = 50.0;
    Workspace c;
    REQUIRE(athena_sweep(m.ptr, ATHENA_ARCH_1, &other, &opt, &c.ptr) == ATHENA_OK);
    CHECK(athena_workspace_compare(a.ptr, c.ptr, &rep) == ATHENA_ERR_GRID_MISMATCH);

    CHECK(athena_workspace_export(a.ptr, "xyz", "/tmp/never.xyz", 0) ==
          ATHENA_ERR_UNSUPPORTED_FORMAT);
    std::filesystem::remove(json_path);
}

TEST_CASE("singularity scan and report writing") {
    Model m;
    REQUIRE(athena_model_create_default(&m.ptr) == ATHENA_OK);
    athena_grid grid{};
    athena_grid_default(&grid);
    grid.step_mm = 40.0;
    Workspace ws;
    REQUIRE(athena_sweep(m.ptr, ATHENA_ARCH_1, &grid, nullptr, &ws.ptr) == ATHENA_OK);

    athena_scan_report rep{};
    REQUIRE(athena_singularity_scan(m.ptr, ws.ptr, 1e-8, 0, &rep) == ATHENA_OK);
    CHECK(rep.evaluated_count > 0);
    CHECK(rep.min_abs_det_q > 0.0);

    const std::string path = temp_path("capi_scan.json");
    REQUIRE(athena_scan_report_write_json(&rep, path.c_str()) == ATHENA_OK);
    std::ifstream in(path);
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    for (const char* key : {"\"arch\"", "\"threshold\"", "\"evaluated_count\"",
                            "\"flagged_count\"", "\"min_abs_det_q\"", "\"argmin_point\""})
        CHECK(content.find(key) != std::string::npos);
    std::filesystem::remove(path);
}

TEST_CASE("stiffness surface: arithmetic, lumped model, report") {
    double k = 0.0;
    REQUIRE(athena_stiffness_from_deflection(30.0, 0.23, &k) == ATHENA_OK);
    CHECK(k == doctest::Approx(130.43).epsilon(0.0001));
    CHECK(athena_stiffness_from_deflection(30.0, 0.0, &k) == ATHENA_ERR_INVALID_ARGUMENT);

    Model m;
    REQUIRE(athena_model_create_default(&m.ptr) == ATHENA_OK);
    const athena_pose pose{0.2, 2.2, 0.0, 120.0};
    athena_joints q{};
    REQUIRE(athena_ik(m.ptr, ATHENA_ARCH_1, &pose, 0, &q, nullptr) == ATHENA_OK);
    double kmat[9];
    double k_axis = 0.0;
    REQUIRE(athena_lumped_tip_stiffness(m.ptr, ATHENA_ARCH_1, &pose, &q, nullptr, kmat,
                                        &k_axis) == ATHENA_OK);
    CHECK(k_axis > 0.0);
    CHECK(kmat[1] == doctest::Approx(kmat[3]).epsilon(1e-9));  // symmetry

    athena_stiffness_estimate est{"athena1 (lumped)", ATHENA_ARCH_1, k_axis};
    size_t needed = 0;
    REQUIRE(athena_stiffness_report(&est, 1, 0, nullptr, 0, &needed) == ATHENA_OK);
    std::string buf(needed + 1, '\0');
    REQUIRE(athena_stiffness_report(&est, 1, 0, buf.data(), buf.size(), &needed) ==
            ATHENA_OK);
    CHECK(buf.find("130.43") != std::string::npos);
    CHECK(buf.find("lumped-model") != std::string::npos);

    char tiny[4];
    CHECK(athena_stiffness_report(&est, 1, 0, tiny, sizeof tiny, &needed) ==
          ATHENA_ERR_BUFFER_TOO_SMALL);
}
