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

#ifndef ATHENA_CORE_TYPES_HPP
#define ATHENA_CORE_TYPES_HPP

#include <array>
#include <cstdint>
#include <string>

namespace athena {

/// The two 4-DOF architectures. Values are stable across the C API and
/// file formats.
enum class Arch : int {
    Athena1 = 1,
    Athena2 = 2,
};

const char* arch_name(Arch arch) noexcept;
bool arch_from_name(const std::string& name, Arch& out) noexcept;

/// Formula variant for the q1/q2 rail chain.
///
/// Literal evaluates the axial coordinate as q1 + q2/2 and the transverse
/// coordinate as q2 - q1/2. Symmetrized uses the rail midpoint (q1 + q2)/2
/// and half-difference (q2 - q1)/2 instead. The crank-chain half-difference
/// of the Athena2 loop closure is (q2 - q1)/2 under both variants.
enum class Variant : int {
    Literal = 0,
    Symmetrized = 1,
};

/// Sign of the transverse chain coordinate selected by inverse kinematics.
enum class BranchSign : int {
    Plus = +1,
    Minus = -1,
};

/// Root choice for the Athena2 revolute crank when more than one root of the
/// loop-closure equation lies inside the q3 travel range.
enum class Q3RootChoice : int {
    MinAbs = 0,  ///< smallest |q3| (default)
    Alternate = 1,
};

/// Sign convention for the Athena2 crank-plane offset: the planar distance
/// term uses x + l0 ("+", default) or x - l0 ("-").
enum class A2XSign : int {
    Plus = +1,
    Minus = -1,
};

/// Geometric parameter set shared by both architectures. All lengths in mm.
struct GeometryParams {
    double l1 = 0.0;      ///< rail chain link length
    double l2 = 0.0;      ///< Athena2 crank link length
    double l3 = 0.0;      ///< coupler link length
    double l4 = 0.0;      ///< planar offset link length
    double l5 = 0.0;      ///< terminal link of the Athena1 q3 chain
    double l2min = 0.0;   ///< minimum stroke offset of the Athena1 q3 actuator
    double l2max = 0.0;   ///< maximum stroke of the Athena1 q3 actuator
    double l_tool = 0.0;  ///< total active-instrument length
    double l01 = 0.0;     ///< base-to-RCM frame offset, x
    double l02 = 0.0;     ///< base-to-RCM frame offset, y
    double l03 = 0.0;     ///< base-to-RCM frame offset, z
    double l0 = 0.0;      ///< crank-plane offset; bound to l01 when absent

    bool operator==(const GeometryParams&) const = default;
};

/// Joint travel limits. q1/q2/q3(Athena1) in mm, q3(Athena2)/q4 in rad.
/// The q1, q2 and Athena1 q3 intervals derive from the geometry; the rest
/// come from the configuration document (degrees in the file).
struct JointLimits {
    double q1_min = 0.0, q1_max = 0.0;          ///< [0, l1]
    double q2_min = 0.0, q2_max = 0.0;          ///< [0, 2*l1]
    double q3a1_min = 0.0, q3a1_max = 0.0;      ///< (l2min, l2max), exclusive
    double q3a2_min = 0.0, q3a2_max = 0.0;      ///< rad
    double q4_min = 0.0, q4_max = 0.0;          ///< rad
    double lins_max = 0.0;                      ///< insertion bound, mm

    // file-unit source values, retained so serialization is bit-exact
    double q3a2_min_deg = 0.0, q3a2_max_deg = 0.0;
    double q4_min_deg = 0.0, q4_max_deg = 0.0;

    bool operator==(const JointLimits&) const = default;
};

/// Illustrative per-joint stiffness values for the lumped compliance model.
/// Prismatic joints in N/mm, revolute joints in N*mm/rad.
struct JointStiffness {
    double q1 = 0.0;
    double q2 = 0.0;
    double q3_athena1 = 0.0;
    double q3_athena2 = 0.0;
    double q4 = 0.0;

    bool operator==(const JointStiffness&) const = default;
};

/// Instrument pose about the remote center of motion: azimuth psi, polar
/// angle theta, tip roll phi (all rad) and insertion depth l_ins (mm)
/// measured from the RCM. Canonical domain: theta in [0, pi),
/// psi in (-pi, pi], 0 <= l_ins < lins_max.
struct TaskPose {
    double psi = 0.0;
    double theta = 0.0;
    double phi = 0.0;
    double l_ins = 0.0;
};

/// Cartesian instrument-tip coordinates in the RCM-centered frame, mm.
struct TipPoint {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// Actuated coordinates. q1, q2 in mm; q3 in mm for Athena1 and rad for
/// Athena2; q4 in rad.
struct JointVector {
    double q1 = 0.0;
    double q2 = 0.0;
    double q3 = 0.0;
    double q4 = 0.0;
    Arch arch = Arch::Athena1;
};

/// The four loop-closure residuals together with per-residual magnitude
/// scales. A consistent (pose, joints) pair satisfies |f[i]| <= tol*scale[i].
/// Units: f[0] mm, f[1] and f[2] mm^2, f[3] dimensionless.
struct Residuals {
    std::array<double, 4> f{};
    std::array<double, 4> scale{1.0, 1.0, 1.0, 1.0};

    double max_scaled() const noexcept {
        double worst = 0.0;
        for (int i = 0; i < 4; ++i) {
            double v = (f[i] < 0 ? -f[i] : f[i]) / scale[i];
            if (v > worst) worst = v;
        }
        return worst;
    }
};

/// Athena1 chain intermediates: lambda is the planar direction angle of the
/// tip relative to the (l01, l03) chain origin, rho the planar distance, and
/// d the transverse chain coordinate.
struct Intermediates1 {
    double lambda = 0.0;  ///< rad
    double d = 0.0;       ///< mm
    double rho = 0.0;     ///< mm
};

/// Athena2 loop-closure intermediates.
struct Intermediates2 {
    double t1 = 0.0;  ///< mm
    double t2 = 0.0;  ///< mm
    double t3 = 0.0;  ///< rad
};

/// Outcome classes shared by the solvers.
enum class KinStatus : int {
    Ok = 0,
    Unreachable,      ///< no real solution of the position chain
    NoRootInRange,    ///< crank roots exist but none inside the travel range
    JointLimit,
    DegenerateTip,
    InsertionRange,
    DomainError,
    NoConvergence,
    SingularJacobian,
};

/// Names the term that left the real domain, for diagnostics.
enum class DomainTerm : int {
    None = 0,
    RailRadicand,      ///< l1^2 - (transverse coordinate)^2
    CouplerRadicand,   ///< l3^2 - (transverse coordinate)^2
    PlanarReach,       ///< planar distance below l4
    CrankRadicand,     ///< (x + l0)^2 + z^2 - l4^2
    CrankNoRealRoot,   ///< loop-closure equation has no real crank angle
};

const char* domain_term_name(DomainTerm term) noexcept;

/// Bitmask of violated joint limits.
enum LimitBits : std::uint8_t {
    LimitQ1 = 1u << 0,
    LimitQ2 = 1u << 1,
    LimitQ3 = 1u << 2,
    LimitQ4 = 1u << 3,
};

/// Rich inverse-kinematics outcome. `q` is populated whenever the chain has
/// a real solution (including the NoRootInRange case, where q3 carries the
/// closest out-of-range root so limit classification stays uniform).
struct IkResult {
    KinStatus status = KinStatus::Ok;
    DomainTerm term = DomainTerm::None;
    JointVector q{};
    std::uint8_t limit_violations = 0;  ///< LimitBits, filled when q is set
    bool q3_in_range = true;            ///< Athena2 crank root inside travel
};

/// Workspace classification reason codes, in precedence order.
enum class Reason : int {
    OK = 0,
    NoRealSolution = 1,
    Q1Limit = 2,
    Q2Limit = 3,
    Q3Limit = 4,
    Q4Limit = 5,
    InsertionLimit = 6,
    DegenerateTip = 7,
};
inline constexpr int kReasonCount = 8;

const char* reason_name(Reason reason) noexcept;
bool reason_from_name(const std::string& name, Reason& out) noexcept;

/// Solver/model options bundled with a loaded configuration.
struct ModelOptions {
    Variant variant = Variant::Literal;
    BranchSign branch = BranchSign::Plus;
    Q3RootChoice q3_root = Q3RootChoice::MinAbs;
    A2XSign a2_x_sign = A2XSign::Plus;
    bool verify_q3_numeric = false;  ///< re-check the analytic crank root

    bool operator==(const ModelOptions&) const = default;
};

/// A loaded, validated model: geometry, limits, solver options and the
/// illustrative joint stiffness set. Immutable after load; safe to share
/// across threads.
struct Model {
    GeometryParams geom{};
    JointLimits limits{};
    JointStiffness stiffness{};
    ModelOptions options{};
};

}  // namespace athena

#endif
