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

#include "stiffness.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "jacobian.hpp"
#include "kinematics.hpp"

namespace athena {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v, int digits = 2) {
    if (std::isnan(v)) return "-";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    // Trim trailing zeros so band bounds read naturally (5-10, 0.2-0.5).
    std::string s = buf;
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
    }
    return s;
}

std::string cell(const StiffnessRow& row, double lo, double hi, int digits = 2) {
    if (std::isnan(lo)) return "-";
    if (row.is_band) return fmt(lo, digits) + "-" + fmt(hi, digits);
    return fmt(lo, digits);
}

}  // namespace

const char* provenance_name(Provenance p) noexcept {
    return p == Provenance::FemReference ? "fem-reference" : "lumped-model";
}

double stiffness_from_deflection(double force_n, double deflection_mm) {
    if (!(deflection_mm > 0.0))
        throw std::invalid_argument("deflection must be strictly positive");
    if (!(force_n >= 0.0)) throw std::invalid_argument("force must be nonnegative");
    return force_n / deflection_mm;
}

LumpedResult lumped_tip_stiffness(Arch arch, const TaskPose& pose, const JointVector& q,
                                  const Model& m,
                                  const std::array<double, 4>& joint_stiffness) noexcept {
    LumpedResult out;
    for (double k : joint_stiffness) {
        if (!(k > 0.0)) {
            out.status = KinStatus::DomainError;
            return out;
        }
    }
    const ResidualEval consistent = residuals(arch, q, pose, m);
    if (!consistent.ok || consistent.r.max_scaled() > 1e-8) {
        out.status = KinStatus::DomainError;  // not a consistent pair
        return out;
    }

    const JacobianEval je = numeric_jacobians(arch, pose, q, m);
    if (!je.ok) {
        out.status = KinStatus::DomainError;
        return out;
    }
    const Eigen::JacobiSVD<Eigen::Matrix4d> svd(je.jp.jx);
    const double smin = svd.singularValues()(3);
    if (smin <= 0.0 || svd.singularValues()(0) / smin > 1e12) {
        out.status = KinStatus::SingularJacobian;
        return out;
    }

    // Implicit task Jacobian: Jx dx + Jq dq = 0  =>  dx = -Jx^{-1} Jq dq.
    const Eigen::Matrix4d jtask = -je.jp.jx.partialPivLu().solve(je.jp.jq);

    // Tip position sensitivity to the pose coordinates; the roll column is
    // identically zero (the tip lies on the roll axis).
    const double r = m.geom.l_tool - pose.l_ins;
    const double cp = std::cos(pose.psi), sp = std::sin(pose.psi);
    const double ct = std::cos(pose.theta), st = std::sin(pose.theta);
    Eigen::Matrix<double, 3, 4> tip_jac;
    tip_jac << -sp * st * r, cp * ct * r, 0.0, -cp * st,
                cp * st * r, sp * ct * r, 0.0, -sp * st,
                0.0,        -st * r,      0.0, -ct;

    const Eigen::Matrix<double, 3, 4> g = tip_jac * jtask;
    Eigen::Matrix3d compliance = Eigen::Matrix3d::Zero();
    for (int j = 0; j < 4; ++j)
        compliance += (g.col(j) * g.col(j).transpose()) / joint_stiffness[j];

    out.estimate.matrix = compliance.inverse();

    const Eigen::Vector3d axis(cp * st, sp * st, ct);
    const double axis_compliance = axis.dot(compliance * axis);
    out.estimate.scalar_along_axis =
        axis_compliance > 0.0 ? 1.0 / axis_compliance
                              : std::numeric_limits<double>::infinity();
    out.estimate.provenance = Provenance::LumpedModel;
    return out;
}

std::vector<StiffnessRow> fem_reference_rows() {
    // Bundled reference dataset: tip deflection under a 30 N axial load and
    // peak von Mises stress for each architecture, plus the commercial MIS
    // comparison band. Stiffness cells are recomputed as force/deflection.
    std::vector<StiffnessRow> rows;

    StiffnessRow a1;
    a1.label = "ATHENA-1";
    a1.force_n = 30.0;
    a1.displacement_lo = a1.displacement_hi = 0.23;
    a1.stiffness_lo = a1.stiffness_hi = stiffness_from_deflection(30.0, 0.23);
    a1.von_mises_lo = a1.von_mises_hi = 15.29;
    rows.push_back(a1);

    StiffnessRow a2;
    a2.label = "ATHENA-2";
    a2.force_n = 30.0;
    a2.displacement_lo = a2.displacement_hi = 3.96;
    a2.stiffness_lo = a2.stiffness_hi = stiffness_from_deflection(30.0, 3.96);
    a2.von_mises_lo = a2.von_mises_hi = 197.29;
    rows.push_back(a2);

    StiffnessRow band;
    band.label = "Commercial MIS";
    band.force_n = kNaN;
    band.is_band = true;
    band.displacement_lo = 0.2;
    band.displacement_hi = 0.5;
    band.stiffness_lo = 5.0;
    band.stiffness_hi = 10.0;
    band.von_mises_lo = 30.0;
    band.von_mises_hi = 65.0;
    rows.push_back(band);
    return rows;
}

const char* commercial_band_note() noexcept {
    return "commercial MIS displacement ranges vary between sources; "
           "0.1-1.4 mm is also reported";
}

std::string render_stiffness_report_text(const std::vector<StiffnessRow>& rows) {
    std::ostringstream os;
    os << "Tip stiffness comparison (reference rows: 30 N axial load)\n";
    char line[256];
    std::snprintf(line, sizeof line, "%-16s %-14s %-17s %-16s %s\n", "robot",
                  "deflection[mm]", "stiffness[N/mm]", "von Mises[MPa]", "provenance");
    os << line;
    bool any_model = false;
    for (const auto& row : rows) {
        if (row.provenance == Provenance::LumpedModel) any_model = true;
        std::snprintf(line, sizeof line, "%-16s %-14s %-17s %-16s %s\n", row.label.c_str(),
                      cell(row, row.displacement_lo, row.displacement_hi).c_str(),
                      cell(row, row.stiffness_lo, row.stiffness_hi).c_str(),
                      cell(row, row.von_mises_lo, row.von_mises_hi).c_str(),
                      provenance_name(row.provenance));
        os << line;
    }
    if (!any_model) os << "(no model estimates)\n";
    os << "note: " << commercial_band_note() << "\n";
    return os.str();
}

std::string render_stiffness_report_json(const std::vector<StiffnessRow>& rows) {
    nlohmann::ordered_json doc;
    doc["reference_load_n"] = 30.0;
    bool any_model = false;
    auto& arr = doc["rows"];
    arr = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        nlohmann::ordered_json j;
        j["label"] = row.label;
        if (row.is_band) {
            j["deflection_mm"] = {row.displacement_lo, row.displacement_hi};
            j["stiffness_n_per_mm"] = {row.stiffness_lo, row.stiffness_hi};
            j["von_mises_mpa"] = {row.von_mises_lo, row.von_mises_hi};
        } else {
            if (!std::isnan(row.displacement_lo)) j["deflection_mm"] = row.displacement_lo;
            if (!std::isnan(row.stiffness_lo)) j["stiffness_n_per_mm"] = row.stiffness_lo;
            if (!std::isnan(row.von_mises_lo)) j["von_mises_mpa"] = row.von_mises_lo;
        }
        j["provenance"] = provenance_name(row.provenance);
        if (row.provenance == Provenance::LumpedModel) any_model = true;
        arr.push_back(std::move(j));
    }
    doc["has_model_estimates"] = any_model;
    doc["note"] = commercial_band_note();
    return doc.dump(2) + "\n";
}

}  // namespace athena
