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

#include "rcm.hpp"

#include <cmath>

#include "math_util.hpp"

namespace athena {

double tip_norm(const TipPoint& tip) noexcept {
    return std::sqrt(tip.x * tip.x + tip.y * tip.y + tip.z * tip.z);
}

TipPoint pose_to_tip(const TaskPose& pose, const GeometryParams& geom) noexcept {
    const double r = geom.l_tool - pose.l_ins;
    const double st = std::sin(pose.theta);
    return TipPoint{std::cos(pose.psi) * st * r, std::sin(pose.psi) * st * r,
                    std::cos(pose.theta) * r};
}

TipToPose tip_to_pose(const TipPoint& tip, double phi, const GeometryParams& geom,
                      const JointLimits& limits) noexcept {
    TipToPose out;
    const double r = tip_norm(tip);
    if (r == 0.0) {
        out.status = KinStatus::DegenerateTip;
        return out;
    }
    const double l_ins = geom.l_tool - r;
    if (l_ins < 0.0 || l_ins >= limits.lins_max) {
        out.status = KinStatus::InsertionRange;
        out.pose.l_ins = l_ins;  // reported for diagnostics
        return out;
    }
    const double rxy = std::hypot(tip.x, tip.y);
    out.pose.theta = std::atan2(rxy, tip.z);
    out.pose.psi = (rxy == 0.0) ? 0.0 : std::atan2(tip.y, tip.x);
    out.azimuth_degenerate = (rxy == 0.0);
    out.pose.phi = phi;
    out.pose.l_ins = l_ins;
    return out;
}

}  // namespace athena
