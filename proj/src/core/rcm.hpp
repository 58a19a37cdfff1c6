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

#ifndef ATHENA_CORE_RCM_HPP
#define ATHENA_CORE_RCM_HPP

#include "types.hpp"

namespace athena {

/// Remote-center-of-motion spherical model: the instrument axis always
/// passes through the RCM origin, so the tip lies at distance
/// l_tool - l_ins along the direction (cos(psi) sin(theta),
/// sin(psi) sin(theta), cos(theta)).

/// Maps a task pose to tip coordinates. Total on finite inputs.
TipPoint pose_to_tip(const TaskPose& pose, const GeometryParams& geom) noexcept;

/// Result of the inverse map.
struct TipToPose {
    KinStatus status = KinStatus::Ok;  ///< Ok | DegenerateTip | InsertionRange
    TaskPose pose{};
    bool azimuth_degenerate = false;  ///< tip on the polar axis; psi fixed to 0
};

/// Inverts pose_to_tip. The polar angle comes from atan2(hypot(x, y), z),
/// which is well conditioned near both poles; on the polar axis psi is 0 by
/// convention and the pose is flagged azimuth-degenerate.
///
/// Fails with DegenerateTip when the tip coincides with the RCM, and with
/// InsertionRange when the implied insertion lies outside [0, lins_max).
TipToPose tip_to_pose(const TipPoint& tip, double phi, const GeometryParams& geom,
                      const JointLimits& limits) noexcept;

/// Euclidean norm of a tip point.
double tip_norm(const TipPoint& tip) noexcept;

}  // namespace athena

#endif
