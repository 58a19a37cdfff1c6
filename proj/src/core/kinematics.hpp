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

#ifndef ATHENA_CORE_KINEMATICS_HPP
#define ATHENA_CORE_KINEMATICS_HPP

#include "types.hpp"

namespace athena {

// ---------------------------------------------------------------------------
// Rail chain shared by both architectures (q1/q2 carriages).
// ---------------------------------------------------------------------------

/// Axial rail coordinate: q1 + q2/2 (literal) or (q1 + q2)/2 (symmetrized).
double rail_axial(double q1, double q2, Variant v) noexcept;

/// Transverse rail coordinate: q2 - q1/2 (literal) or (q2 - q1)/2
/// (symmetrized).
double rail_transverse(double q1, double q2, Variant v) noexcept;

/// Inverts (axial, transverse) back to (q1, q2) for the given variant.
void rail_solve(double axial, double transverse, Variant v, double& q1, double& q2) noexcept;

/// Crank-chain half-difference (q2 - q1)/2, used by the Athena2 loop closure
/// under both variants.
double crank_half_difference(double q1, double q2) noexcept;

// ---------------------------------------------------------------------------
// Residual systems.
// ---------------------------------------------------------------------------

struct ResidualEval {
    bool ok = false;
    DomainTerm term = DomainTerm::None;  ///< set when !ok
    Residuals r{};
};

/// Evaluates the four loop-closure residuals of the requested architecture
/// at (q, pose), with the tip point derived from the pose through the RCM
/// model. Reports a domain failure instead of a value when a radicand is
/// negative.
ResidualEval residuals(Arch arch, const JointVector& q, const TaskPose& pose,
                       const Model& m) noexcept;

/// Athena1 chain intermediates at (pose, q). Total on finite input.
Intermediates1 intermediates_a1(const TaskPose& pose, const JointVector& q,
                                const Model& m) noexcept;

struct Intermediates2Eval {
    bool ok = false;
    DomainTerm term = DomainTerm::None;
    Intermediates2 t{};
};

/// Athena2 loop-closure intermediates at (pose, q). t1 and t3 depend only on
/// the tip point, t2 also on the joints. The direction angle t3 is the
/// atan2 of the planar components normalized by their own norm, which
/// reduces to atan2(x + l0, z).
Intermediates2Eval intermediates_a2(const TaskPose& pose, const JointVector& q,
                                    const Model& m) noexcept;

// ---------------------------------------------------------------------------
// Inverse kinematics.
// ---------------------------------------------------------------------------

/// Closed-form inverse kinematics. Limit violations are reported in the
/// result mask, never as a failure: solvability and limits are separate
/// concerns. For Athena2, when crank roots exist but none lies inside the
/// travel range, status is NoRootInRange and q3 carries the root closest to
/// zero so downstream limit classification is uniform.
IkResult inverse_kinematics(Arch arch, const TaskPose& pose, const Model& m) noexcept;

/// Joint-limit violation mask for a joint vector (q3 interpreted per arch;
/// the Athena1 stroke window is exclusive, all other bounds inclusive).
std::uint8_t limit_check(const JointVector& q, const JointLimits& lim) noexcept;

/// All real crank-angle roots of the Athena2 loop closure at a pose, given
/// the rail joints. Roots are wrapped to (-pi, pi] and sorted ascending.
struct CrankRoots {
    bool domain_ok = false;
    DomainTerm term = DomainTerm::None;
    int count = 0;
    std::array<double, 4> roots{};
};
CrankRoots a2_crank_roots(const TaskPose& pose, double q1, double q2, const Model& m) noexcept;

/// Refines an analytic crank root by bracketed bisection on the literal
/// loop-closure residual. Returns the refined root, or NaN when no bracket
/// forms near the analytic value.
double a2_crank_root_numeric(const TaskPose& pose, double q1, double q2, const Model& m,
                             double analytic_root) noexcept;

// ---------------------------------------------------------------------------
// Forward kinematics.
// ---------------------------------------------------------------------------

struct FkResult {
    KinStatus status = KinStatus::NoConvergence;
    TaskPose pose{};
    int iterations = 0;
    double final_scaled_residual = 0.0;
    double condition = 0.0;  ///< condition estimate of the last pose Jacobian
};

/// Mid-range pose used as the default Newton start.
TaskPose default_fk_seed(const Model& m) noexcept;

/// Numerical forward kinematics: damped Newton on the residual system in
/// the unknowns (psi, theta, phi, l_ins) until max |f_i| <= 1e-10 * scale_i,
/// at most 50 iterations.
///
/// The start point is derived from the joints themselves whenever the chain
/// admits closed-form pose candidates (both architectures reduce to roots
/// along the planar reach circle); the candidate in the instrument working
/// half-space (direction angle nearest -pi/2) is preferred, which makes the
/// returned pose independent of the caller's seed on reachable joints. The
/// caller seed (or the mid-range default) is the start only when no
/// candidate exists. phi decouples and is solved exactly.
FkResult forward_kinematics(Arch arch, const JointVector& q, const Model& m,
                            const TaskPose* seed = nullptr) noexcept;

}  // namespace athena

#endif
