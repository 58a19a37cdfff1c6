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

#ifndef ATHENA_CORE_STIFFNESS_HPP
#define ATHENA_CORE_STIFFNESS_HPP

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "types.hpp"

namespace athena {

/// Row provenance in stiffness reports: bundled FEM reference data versus
/// values produced by the lumped compliance model here.
enum class Provenance : int {
    FemReference = 0,
    LumpedModel = 1,
};

const char* provenance_name(Provenance p) noexcept;

/// K = F / delta. Throws std::invalid_argument on nonpositive deflection.
double stiffness_from_deflection(double force_n, double deflection_mm);

/// Cartesian tip stiffness estimate from mapping per-joint compliances
/// through the residual Jacobians. Estimative by construction; provenance
/// is always LumpedModel.
struct TipStiffnessEstimate {
    Eigen::Matrix3d matrix = Eigen::Matrix3d::Zero();  ///< N/mm
    double scalar_along_axis = 0.0;                    ///< N/mm
    Provenance provenance = Provenance::LumpedModel;
};

struct LumpedResult {
    KinStatus status = KinStatus::Ok;  ///< Ok | SingularJacobian | DomainError
    TipStiffnessEstimate estimate{};
};

/// Maps joint stiffness (q1, q2, q3, q4; prismatic N/mm, revolute
/// N*mm/rad) to a 3x3 Cartesian tip stiffness and the scalar stiffness
/// along the instrument axis. Requires a consistent (pose, joints) pair;
/// fails with SingularJacobian when the pose Jacobian is not invertible.
LumpedResult lumped_tip_stiffness(Arch arch, const TaskPose& pose, const JointVector& q,
                                  const Model& m,
                                  const std::array<double, 4>& joint_stiffness) noexcept;

/// One row of the stiffness comparison report. Band rows carry a
/// [lo, hi] range instead of a single value; unavailable cells are NaN.
struct StiffnessRow {
    std::string label;
    double force_n = 0.0;  ///< NaN when not applicable
    double displacement_lo = 0.0, displacement_hi = 0.0;
    double stiffness_lo = 0.0, stiffness_hi = 0.0;
    double von_mises_lo = 0.0, von_mises_hi = 0.0;
    bool is_band = false;
    Provenance provenance = Provenance::FemReference;
};

/// The bundled FEM reference dataset: deflection measured at the instrument
/// tip under a 30 N axial load for both architectures, plus the published
/// commercial MIS band. Stiffness cells are recomputed as force/deflection.
std::vector<StiffnessRow> fem_reference_rows();

/// Footnote attached to the comparison band.
const char* commercial_band_note() noexcept;

/// Renders the comparison table. Every row carries its provenance; an
/// explicit line marks the absence of model estimates.
std::string render_stiffness_report_text(const std::vector<StiffnessRow>& rows);
std::string render_stiffness_report_json(const std::vector<StiffnessRow>& rows);

}  // namespace athena

#endif
