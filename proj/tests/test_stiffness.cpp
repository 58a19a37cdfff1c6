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

#include <Eigen/Eigenvalues>

#include "kinematics.hpp"
#include "stiffness.hpp"
#include "test_helpers.hpp"

using namespace athena;

TEST_CASE("deflection arithmetic reproduces the reference stiffness values") {
    CHECK(stiffness_from_deflection(30.0, 0.23) == doctest::Approx(130.43).epsilon(0.0001));
    CHECK(stiffness_from_deflection(30.0, 3.96) == doctest::Approx(7.58).epsilon(0.0014));
    CHECK(stiffness_from_deflection(10.0, 1.0) == 10.0);
}

TEST_CASE("nonpositive deflection is rejected") {
    CHECK_THROWS_AS(stiffness_from_deflection(30.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(stiffness_from_deflection(30.0, -0.5), std::invalid_argument);
}

TEST_CASE("stiffness is invariant under common scaling of force and deflection") {
    for (double k : {0.5, 2.0, 7.0, 123.0}) {
        CHECK(stiffness_from_deflection(30.0 * k, 0.23 * k) ==
              doctest::Approx(stiffness_from_deflection(30.0, 0.23)).epsilon(1e-14));
    }
}

namespace {

struct LumpedSetup {
    TaskPose pose;
    JointVector joints;
    std::array<double, 4> ks;
};

LumpedSetup lumped_setup(Arch arch, std::uint64_t seed) {
    const Model& m = testing::model();
    testing::ReachableSampler sampler(arch, m, seed);
    TaskPose p = sampler.next();
    const IkResult ik = inverse_kinematics(arch, p, m);
    REQUIRE(ik.status == KinStatus::Ok);
    const JointStiffness& d = m.stiffness;
    return LumpedSetup{
        p, ik.q,
        {d.q1, d.q2, arch == Arch::Athena1 ? d.q3_athena1 : d.q3_athena2, d.q4}};
}

}  // namespace

TEST_CASE("lumped tip stiffness scales linearly with the joint stiffness") {
    const Model& m = testing::model();
    for (Arch arch : {Arch::Athena1, Arch::Athena2}) {
        const LumpedSetup s = lumped_setup(arch, 0x57F001);
        const LumpedResult base = lumped_tip_stiffness(arch, s.pose, s.joints, m, s.ks);
        REQUIRE(base.status == KinStatus::Ok);
        std::array<double, 4> doubled = s.ks;
        for (double& k : doubled) k *= 2.0;
        const LumpedResult twice = lumped_tip_stiffness(arch, s.pose, s.joints, m, doubled);
        REQUIRE(twice.status == KinStatus::Ok);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(twice.estimate.matrix(i, j) == 2.0 * base.estimate.matrix(i, j));
        CHECK(twice.estimate.scalar_along_axis == 2.0 * base.estimate.scalar_along_axis);
    }
}

TEST_CASE("lumped tip stiffness is symmetric positive definite") {
    const Model& m = testing::model();
    for (Arch arch : {Arch::Athena1, Arch::Athena2}) {
        for (std::uint64_t seed : {0x57F002ull, 0x57F003ull, 0x57F004ull}) {
            const LumpedSetup s = lumped_setup(arch, seed);
            const LumpedResult r = lumped_tip_stiffness(arch, s.pose, s.joints, m, s.ks);
            REQUIRE(r.status == KinStatus::Ok);
            const Eigen::Matrix3d& k = r.estimate.matrix;
            const double norm = k.norm();
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    CHECK(std::fabs(k(i, j) - k(j, i)) <= 1e-9 * std::max(1.0, norm));
            const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(k);
            for (int i = 0; i < 3; ++i) CHECK(eig.eigenvalues()(i) > 0.0);
            CHECK(r.estimate.scalar_along_axis > 0.0);
            CHECK(r.estimate.provenance == Provenance::LumpedModel);
        }
    }
}

TEST_CASE("matched-pose comparison reports both scalars and their ratio") {
    const Model& m = testing::model();
    const auto poses = testing::shared_reachable_poses(m, 1, 0x57F005);
    const TaskPose p = poses[0];
    double k_axis[2];
    for (int i = 0; i < 2; ++i) {
        const Arch arch = i == 0 ? Arch::Athena1 : Arch::Athena2;
        const IkResult ik = inverse_kinematics(arch, p, m);
        REQUIRE(ik.status == KinStatus::Ok);
        // Identical per-joint stiffness values for the comparison.
        const std::array<double, 4> ks{m.stiffness.q1, m.stiffness.q2, m.stiffness.q1,
                                       m.stiffness.q4};
        const LumpedResult r = lumped_tip_stiffness(arch, p, ik.q, m, ks);
        REQUIRE(r.status == KinStatus::Ok);
        k_axis[i] = r.estimate.scalar_along_axis;
    }
    // The direction of the comparison is a model output; only record it.
    const double ratio = k_axis[0] / k_axis[1];
    CHECK(ratio > 0.0);
    MESSAGE("lumped axis stiffness athena1=", k_axis[0], " athena2=", k_axis[1],
            " ratio=", ratio);
}

TEST_CASE("inconsistent pose/joint pairs are refused") {
    const Model& m = testing::model();
    const LumpedSetup s = lumped_setup(Arch::Athena1, 0x57F006);
    JointVector wrong = s.joints;
    wrong.q1 += 25.0;
    const LumpedResult r = lumped_tip_stiffness(Arch::Athena1, s.pose, wrong, m, s.ks);
    CHECK(r.status == KinStatus::DomainError);
}

TEST_CASE("reference rows reproduce the bundled comparison table") {
    const auto rows = fem_reference_rows();
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].label == "ATHENA-1");
    CHECK(rows[0].displacement_lo == 0.23);
    CHECK(rows[0].stiffness_lo == doctest::Approx(130.43).epsilon(0.0001));
    CHECK(rows[0].von_mises_lo == 15.29);
    CHECK(rows[1].label == "ATHENA-2");
    CHECK(rows[1].displacement_lo == 3.96);
    CHECK(rows[1].stiffness_lo == doctest::Approx(7.58).epsilon(0.0014));
    CHECK(rows[1].von_mises_lo == 197.29);
    CHECK(rows[2].is_band);
    CHECK(rows[2].stiffness_lo == 5.0);
    CHECK(rows[2].stiffness_hi == 10.0);
    for (const auto& row : rows) CHECK(row.provenance == Provenance::FemReference);
}

TEST_CASE("text report renders values, provenance and the empty-estimate line") {
    const std::string report = render_stiffness_report_text(fem_reference_rows());
    CHECK(report.find("130.43") != std::string::npos);
    CHECK(report.find("7.58") != std::string::npos);
    CHECK(report.find("5-10") != std::string::npos);
    CHECK(report.find("fem-reference") != std::string::npos);
    CHECK(report.find("(no model estimates)") != std::string::npos);
    CHECK(report.find("0.1-1.4 mm") != std::string::npos);  // footnote
}

TEST_CASE("every row of a mixed report carries a provenance tag") {
    auto rows = fem_reference_rows();
    StiffnessRow est;
    est.label = "athena1 (lumped)";
    est.force_n = est.displacement_lo = est.displacement_hi = std::nan("");
    est.von_mises_lo = est.von_mises_hi = std::nan("");
    est.stiffness_lo = est.stiffness_hi = 42.0;
    est.provenance = Provenance::LumpedModel;
    rows.push_back(est);

    const std::string text = render_stiffness_report_text(rows);
    CHECK(text.find("lumped-model") != std::string::npos);
    CHECK(text.find("(no model estimates)") == std::string::npos);

    // JSON form: every row object names its provenance.
    const std::string json_text = render_stiffness_report_json(rows);
    std::size_t rows_seen = 0, prov_seen = 0, pos = 0;
    while ((pos = json_text.find("\"label\"", pos)) != std::string::npos) {
        ++rows_seen;
        pos += 7;
    }
    pos = 0;
    while ((pos = json_text.find("\"provenance\"", pos)) != std::string::npos) {
        ++prov_seen;
        pos += 12;
    }
    CHECK(rows_seen == rows.size());
    CHECK(prov_seen == rows.size());
}

TEST_CASE("poses on the azimuth-degenerate axis are refused as singular") {
    // On the polar axis the azimuth column of the pose Jacobian vanishes, so
    // the compliance map is undefined there.
    Model m = testing::model();
    m.geom.l01 = -200.0;
    m.geom.l0 = m.geom.l01;
    const TaskPose pole{0.0, 0.0, 0.0, 100.0};
    const IkResult ik = inverse_kinematics(Arch::Athena1, pole, m);
    REQUIRE(ik.status == KinStatus::Ok);
    const std::array<double, 4> ks{200.0, 200.0, 150.0, 5.0e5};
    const LumpedResult r = lumped_tip_stiffness(Arch::Athena1, pole, ik.q, m, ks);
    CHECK(r.status == KinStatus::SingularJacobian);
}
