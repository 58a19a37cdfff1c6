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

#ifndef ATHENA_CORE_JACOBIAN_HPP
#define ATHENA_CORE_JACOBIAN_HPP

#include <cstdint>

#include <Eigen/Dense>

#include "types.hpp"
#include "workspace.hpp"

namespace athena {

/// Residual Jacobians at a consistent (pose, joints) pair: Jq = df/dq over
/// (q1..q4) and Jx = df/d(psi, theta, phi, l_ins).
struct JacobianPair {
    Eigen::Matrix4d jq = Eigen::Matrix4d::Zero();
    Eigen::Matrix4d jx = Eigen::Matrix4d::Zero();
};

struct JacobianEval {
    bool ok = false;
    DomainTerm term = DomainTerm::None;  ///< probe left the real domain
    JacobianPair jp{};
};

/// Central differences with per-coordinate step max(1e-6, 1e-8*|coord|).
/// When a probe point leaves the real domain the step shrinks up to three
/// times before the evaluation fails.
JacobianEval numeric_jacobians(Arch arch, const TaskPose& pose, const JointVector& q,
                               const Model& m) noexcept;

struct SingularityMetrics {
    double abs_det_jq = 0.0;
    double abs_det_jx = 0.0;
    double cond_jq = 0.0;
    double cond_jx = 0.0;
    double manipulability = 0.0;          ///< sqrt(det(Jq * Jq^T))
    double normalized_abs_det_jq = 0.0;   ///< |det Jq| / product of row norms
};

SingularityMetrics singularity_metrics(const JacobianPair& jp) noexcept;

struct ScanReport {
    Arch arch = Arch::Athena1;
    double threshold = 0.0;
    std::uint64_t stride = 1;
    std::uint64_t evaluated_count = 0;
    std::uint64_t flagged_count = 0;  ///< normalized |det Jq| below threshold
    double min_normalized_abs_det_jq = 0.0;
    TipPoint argmin_point{};  ///< grid coordinates of the minimum
    bool has_min = false;
};

/// Default flagging threshold on the row-norm-normalized |det Jq|.
inline constexpr double kDefaultSingularityThreshold = 1e-8;

/// Evaluates the singularity metrics at every stride-th valid point of a
/// sweep result and reports the minimum normalized |det Jq|, its location,
/// and the count of points below the threshold. Deterministic for any
/// worker count.
ScanReport singularity_scan(const WorkspaceResult& result, const Model& m,
                            double threshold = kDefaultSingularityThreshold,
                            std::uint64_t stride = 1, int workers = 0);

}  // namespace athena

#endif
