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

#include "kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "math_util.hpp"
#include "rcm.hpp"

namespace athena {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kNewtonTol = 1e-10;
constexpr int kNewtonMaxIter = 50;
constexpr double kCondLimit = 1e12;

inline double sq(double v) noexcept { return v * v; }

inline double max_scale(double a, double b, double c) noexcept {
    return std::max({1.0, std::fabs(a), std::fabs(b), std::fabs(c)});
}

}  // namespace

// ---------------------------------------------------------------------------
// Rail chain.
// ---------------------------------------------------------------------------

double rail_axial(double q1, double q2, Variant v) noexcept {
    return v == Variant::Literal ? q1 + q2 / 2.0 : (q1 + q2) / 2.0;
}

double rail_transverse(double q1, double q2, Variant v) noexcept {
    return v == Variant::Literal ? q2 - q1 / 2.0 : (q2 - q1) / 2.0;
}

void rail_solve(double axial, double transverse, Variant v, double& q1, double& q2) noexcept {
    if (v == Variant::Literal) {
        // q1 + q2/2 = a, q2 - q1/2 = t
        q1 = (4.0 * axial - 2.0 * transverse) / 5.0;
        q2 = (2.0 * axial + 4.0 * transverse) / 5.0;
    } else {
        // (q1 + q2)/2 = a, (q2 - q1)/2 = t
        q1 = axial - transverse;
        q2 = axial + transverse;
    }
}

double crank_half_difference(double q1, double q2) noexcept { return (q2 - q1) / 2.0; }

// ---------------------------------------------------------------------------
// Residuals.
// ---------------------------------------------------------------------------

Intermediates1 intermediates_a1(const TaskPose& pose, const JointVector& q,
                                const Model& m) noexcept {
    const TipPoint tip = pose_to_tip(pose, m.geom);
    Intermediates1 v;
    v.lambda = std::atan2(tip.z - m.geom.l03, tip.x - m.geom.l01);
    v.d = rail_transverse(q.q1, q.q2, m.options.variant);
    v.rho = std::hypot(tip.z - m.geom.l03, tip.x - m.geom.l01);
    return v;
}

Intermediates2Eval intermediates_a2(const TaskPose& pose, const JointVector& q,
                                    const Model& m) noexcept {
    Intermediates2Eval out;
    const TipPoint tip = pose_to_tip(pose, m.geom);
    const double x0 = m.options.a2_x_sign == A2XSign::Plus ? tip.x + m.geom.l0
                                                           : tip.x - m.geom.l0;
    const double rad1 = sq(x0) + sq(tip.z) - sq(m.geom.l4);
    if (rad1 < 0.0) {
        out.term = DomainTerm::CrankRadicand;
        return out;
    }
    const double h = crank_half_difference(q.q1, q.q2);
    const double rad2 = sq(m.geom.l3) - sq(h);
    if (rad2 < 0.0) {
        out.term = DomainTerm::CouplerRadicand;
        return out;
    }
    out.t.t1 = std::sqrt(rad1);
    out.t.t2 = std::sqrt(rad2) - m.geom.l2 * std::cos(q.q3);
    // atan2 of the planar direction components, each normalized by the
    // planar norm; the normalization cancels, leaving atan2(x + l0, z).
    out.t.t3 = std::atan2(x0, tip.z);
    out.ok = true;
    return out;
}

namespace {

/// Shared rail residuals f1, f2 (identical expressions in both
/// architectures; one code path keeps them bit-for-bit equal).
bool rail_residuals(const JointVector& q, const TipPoint& tip, const Model& m,
                    Residuals& r, DomainTerm& term) noexcept {
    const double ax = rail_axial(q.q1, q.q2, m.options.variant);
    r.f[0] = m.geom.l02 + ax - tip.y;
    r.scale[0] = max_scale(m.geom.l02, ax, tip.y);

    const double tr = rail_transverse(q.q1, q.q2, m.options.variant);
    const double rad = sq(m.geom.l1) - sq(tr);
    if (rad < 0.0) {
        term = DomainTerm::RailRadicand;
        return false;
    }
    const double reach = m.geom.l4 + std::sqrt(rad);
    const double dz = tip.z - m.geom.l03;
    const double dx = tip.x - m.geom.l01;
    r.f[1] = sq(reach) - sq(dz) - sq(dx);
    r.scale[1] = max_scale(sq(reach), sq(dz), sq(dx));
    return true;
}

void roll_residual(const JointVector& q, const TaskPose& pose, Residuals& r) noexcept {
    r.f[3] = std::sin(q.q4) - std::sin(pose.phi);
    r.scale[3] = 1.0;
}

}  // namespace

ResidualEval residuals(Arch arch, const JointVector& q, const TaskPose& pose,
                       const Model& m) noexcept {
    ResidualEval out;
    const TipPoint tip = pose_to_tip(pose, m.geom);
    if (!rail_residuals(q, tip, m, out.r, out.term)) return out;

    if (arch == Arch::Athena1) {
        const double tr = rail_transverse(q.q1, q.q2, m.options.variant);
        const double rad = sq(m.geom.l3) - sq(tr);
        if (rad < 0.0) {
            out.term = DomainTerm::CouplerRadicand;
            return out;
        }
        const double lambda = std::atan2(tip.z - m.geom.l03, tip.x - m.geom.l01);
        const double ta =
            tip.x - m.geom.l01 - m.geom.l4 * std::cos(lambda) + std::sqrt(rad);
        const double tb = tip.z - m.geom.l4 * std::sin(lambda) - m.geom.l03;
        const double tc = q.q3 + m.geom.l2min + m.geom.l5;
        out.r.f[2] = sq(tc) - sq(ta) - sq(tb);
        out.r.scale[2] = max_scale(sq(tc), sq(ta), sq(tb));
    } else {
        const Intermediates2Eval iv = intermediates_a2(pose, q, m);
        if (!iv.ok) {
            out.term = iv.term;
            return out;
        }
        const double inner = (iv.t.t1 - m.geom.l4) * std::sin(iv.t.t3) + iv.t.t2 +
                             (iv.t.t1 - m.geom.l4) * std::cos(iv.t.t3) -
                             m.geom.l2 * std::sin(q.q3);
        out.r.f[2] = sq(inner) - sq(m.geom.l2);
        out.r.scale[2] = max_scale(sq(inner), sq(m.geom.l2), 0.0);
    }

    roll_residual(q, pose, out.r);
    out.ok = true;
    return out;
}

// ---------------------------------------------------------------------------
// Inverse kinematics.
// ---------------------------------------------------------------------------

std::uint8_t limit_check(const JointVector& q, const JointLimits& lim) noexcept {
    std::uint8_t mask = 0;
    if (q.q1 < lim.q1_min || q.q1 > lim.q1_max) mask |= LimitQ1;
    if (q.q2 < lim.q2_min || q.q2 > lim.q2_max) mask |= LimitQ2;
    if (q.arch == Arch::Athena1) {
        // exclusive stroke window
        if (!(q.q3 > lim.q3a1_min && q.q3 < lim.q3a1_max)) mask |= LimitQ3;
    } else {
        if (q.q3 < lim.q3a2_min || q.q3 > lim.q3a2_max) mask |= LimitQ3;
    }
    if (q.q4 < lim.q4_min || q.q4 > lim.q4_max) mask |= LimitQ4;
    return mask;
}

namespace {

/// Shared closed-form rail solve: axial coordinate from the y equation,
/// transverse from the planar reach equation, with the requested branch
/// sign. Returns false with the failing term when no real solution exists.
bool solve_rail(const TipPoint& tip, const Model& m, double& q1, double& q2,
                double& transverse, DomainTerm& term) noexcept {
    const double axial = tip.y - m.geom.l02;
    const double rho = std::hypot(tip.z - m.geom.l03, tip.x - m.geom.l01);
    if (rho < m.geom.l4) {
        term = DomainTerm::PlanarReach;
        return false;
    }
    const double rad = sq(m.geom.l1) - sq(rho - m.geom.l4);
    if (rad < 0.0) {
        term = DomainTerm::RailRadicand;
        return false;
    }
    const double mag = std::sqrt(rad);
    transverse = m.options.branch == BranchSign::Plus ? mag : -mag;
    rail_solve(axial, transverse, m.options.variant, q1, q2);
    return true;
}

IkResult ik_athena1(const TaskPose& pose, const Model& m) noexcept {
    IkResult out;
    out.q.arch = Arch::Athena1;
    const TipPoint tip = pose_to_tip(pose, m.geom);

    double transverse = 0.0;
    if (!solve_rail(tip, m, out.q.q1, out.q.q2, transverse, out.term)) {
        out.status = KinStatus::Unreachable;
        return out;
    }

    const double rad3 = sq(m.geom.l3) - sq(transverse);
    if (rad3 < 0.0) {
        out.status = KinStatus::Unreachable;
        out.term = DomainTerm::CouplerRadicand;
        return out;
    }
    const double rho = std::hypot(tip.z - m.geom.l03, tip.x - m.geom.l01);
    const double coslam = (tip.x - m.geom.l01) / rho;
    const double sinlam = (tip.z - m.geom.l03) / rho;
    const double ta = tip.x - m.geom.l01 - m.geom.l4 * coslam + std::sqrt(rad3);
    const double tb = tip.z - m.geom.l4 * sinlam - m.geom.l03;
    out.q.q3 = std::hypot(ta, tb) - m.geom.l2min - m.geom.l5;  // positive root
    out.q.q4 = pose.phi;

    out.limit_violations = limit_check(out.q, m.limits);
    return out;
}

IkResult ik_athena2(const TaskPose& pose, const Model& m) noexcept {
    IkResult out;
    out.q.arch = Arch::Athena2;
    const TipPoint tip = pose_to_tip(pose, m.geom);

    double transverse = 0.0;
    if (!solve_rail(tip, m, out.q.q1, out.q.q2, transverse, out.term)) {
        out.status = KinStatus::Unreachable;
        return out;
    }
    out.q.q4 = pose.phi;

    const CrankRoots roots = a2_crank_roots(pose, out.q.q1, out.q.q2, m);
    if (!roots.domain_ok) {
        out.status = KinStatus::Unreachable;
        out.term = roots.term;
        return out;
    }
    if (roots.count == 0) {
        out.status = KinStatus::Unreachable;
        out.term = DomainTerm::CrankNoRealRoot;
        return out;
    }

    // Partition the real roots by travel range, then apply the root choice.
    std::array<double, 4> in_range{};
    int n_in = 0;
    for (int i = 0; i < roots.count; ++i) {
        const double r = roots.roots[i];
        if (r >= m.limits.q3a2_min && r <= m.limits.q3a2_max) in_range[n_in++] = r;
    }
    auto abs_less = [](double a, double b) { return std::fabs(a) < std::fabs(b); };
    if (n_in > 0) {
        std::sort(in_range.begin(), in_range.begin() + n_in, abs_less);
        out.q.q3 = (m.options.q3_root == Q3RootChoice::Alternate && n_in > 1)
                       ? in_range[1]
                       : in_range[0];
    } else {
        out.status = KinStatus::NoRootInRange;
        out.q3_in_range = false;
        out.q.q3 = *std::min_element(roots.roots.begin(), roots.roots.begin() + roots.count,
                                     abs_less);
    }

    if (m.options.verify_q3_numeric && out.status != KinStatus::Unreachable) {
        const double refined = a2_crank_root_numeric(pose, out.q.q1, out.q.q2, m, out.q.q3);
        if (!std::isfinite(refined) || std::fabs(refined - out.q.q3) > 1e-12) {
            out.status = KinStatus::NoConvergence;
            return out;
        }
    }

    out.limit_violations = limit_check(out.q, m.limits);
    return out;
}

}  // namespace

IkResult inverse_kinematics(Arch arch, const TaskPose& pose, const Model& m) noexcept {
    return arch == Arch::Athena1 ? ik_athena1(pose, m) : ik_athena2(pose, m);
}

CrankRoots a2_crank_roots(const TaskPose& pose, double q1, double q2,
                          const Model& m) noexcept {
    CrankRoots out;
    const TipPoint tip = pose_to_tip(pose, m.geom);
    const double x0 = m.options.a2_x_sign == A2XSign::Plus ? tip.x + m.geom.l0
                                                           : tip.x - m.geom.l0;
    const double rad1 = sq(x0) + sq(tip.z) - sq(m.geom.l4);
    if (rad1 < 0.0) {
        out.term = DomainTerm::CrankRadicand;
        return out;
    }
    const double h = crank_half_difference(q1, q2);
    const double rad2 = sq(m.geom.l3) - sq(h);
    if (rad2 < 0.0) {
        out.term = DomainTerm::CouplerRadicand;
        return out;
    }
    out.domain_ok = true;

    const double t1 = std::sqrt(rad1);
    const double t3 = std::atan2(x0, tip.z);
    const double a = (t1 - m.geom.l4) * (std::sin(t3) + std::cos(t3)) + std::sqrt(rad2);

    // inner(q3) = a - l2*(cos q3 + sin q3); roots where inner = +-l2, via
    // cos q3 + sin q3 = sqrt(2) sin(q3 + pi/4).
    std::vector<double> found;
    for (const double s : {+1.0, -1.0}) {
        const double c = a / m.geom.l2 - s;
        if (std::fabs(c) > kSqrt2 * (1.0 + 1e-14)) continue;
        const double alpha = std::asin(clamp_unit(c / kSqrt2));
        found.push_back(wrap_angle(alpha - kPi / 4.0));
        found.push_back(wrap_angle(kPi - alpha - kPi / 4.0));
    }
    std::sort(found.begin(), found.end());
    for (double r : found) {
        if (out.count > 0 && std::fabs(r - out.roots[out.count - 1]) < 1e-12) continue;
        if (out.count < 4) out.roots[out.count++] = r;
    }
    return out;
}

double a2_crank_root_numeric(const TaskPose& pose, double q1, double q2, const Model& m,
                             double analytic_root) noexcept {
    const auto f3_at = [&](double q3) -> double {
        JointVector q{q1, q2, q3, pose.phi, Arch::Athena2};
        const ResidualEval e = residuals(Arch::Athena2, q, pose, m);
        return e.ok ? e.r.f[2] : std::numeric_limits<double>::quiet_NaN();
    };

    // Grow a bracket around the analytic root until the literal residual
    // changes sign, then bisect.
    double lo = analytic_root, hi = analytic_root;
    double flo = f3_at(lo), fhi = flo;
    double step = 1e-8;
    while (step < 0.5) {
        lo = analytic_root - step;
        hi = analytic_root + step;
        flo = f3_at(lo);
        fhi = f3_at(hi);
        if (std::isfinite(flo) && std::isfinite(fhi) && flo * fhi <= 0.0) break;
        step *= 4.0;
    }
    if (!(std::isfinite(flo) && std::isfinite(fhi) && flo * fhi <= 0.0))
        return std::numeric_limits<double>::quiet_NaN();

    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f3_at(mid);
        if (!std::isfinite(fm)) break;
        if (flo * fm <= 0.0) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Forward kinematics.
// ---------------------------------------------------------------------------

TaskPose default_fk_seed(const Model& m) noexcept {
    // Mid-range of the instrument working half-space (z below the RCM).
    return TaskPose{0.0, 3.0 * kPi / 4.0, 0.0, m.limits.lins_max / 2.0};
}

namespace {

struct PoseCandidate {
    TaskPose pose;
    double lambda;  ///< planar direction angle of the tip about (l01, l03)
};

/// Builds a pose from planar coordinates plus the known y coordinate and
/// roll. Returns false for a tip at the RCM.
bool pose_from_plane(double xp, double yp, double zp, double phi, const Model& m,
                     double lambda, PoseCandidate& out) noexcept {
    const double r = std::sqrt(xp * xp + yp * yp + zp * zp);
    if (r == 0.0) return false;
    const double rxy = std::hypot(xp, yp);
    out.pose.theta = std::atan2(rxy, zp);
    out.pose.psi = rxy == 0.0 ? 0.0 : std::atan2(yp, xp);
    out.pose.phi = phi;
    out.pose.l_ins = m.geom.l_tool - r;
    out.lambda = lambda;
    return true;
}

/// Closed-form pose candidates for Athena1: the y equation fixes yp, the
/// planar reach equation fixes the circle radius, and the stroke equation
/// fixes the cosine of the direction angle, leaving two mirrored roots.
std::vector<PoseCandidate> candidates_a1(const JointVector& q, const Model& m) {
    std::vector<PoseCandidate> out;
    const double yp = m.geom.l02 + rail_axial(q.q1, q.q2, m.options.variant);
    const double tr = rail_transverse(q.q1, q.q2, m.options.variant);
    const double rail = sq(m.geom.l1) - sq(tr);
    if (rail < 0.0) return out;
    const double s = std::sqrt(rail);
    const double rho = m.geom.l4 + s;
    const double w2 = sq(m.geom.l3) - sq(tr);
    if (w2 < 0.0) return out;
    const double w = std::sqrt(w2);
    if (s < 1e-12 || w < 1e-12) return out;  // direction angle underdetermined
    const double q3p = q.q3 + m.geom.l2min + m.geom.l5;
    const double coslam = (sq(q3p) - sq(s) - sq(w)) / (2.0 * s * w);
    if (std::fabs(coslam) > 1.0 + 1e-9) return out;
    const double lam = std::acos(clamp_unit(coslam));
    for (const double lambda : {-lam, lam}) {
        const double xp = m.geom.l01 + rho * std::cos(lambda);
        const double zp = m.geom.l03 + rho * std::sin(lambda);
        PoseCandidate c;
        if (pose_from_plane(xp, yp, zp, principal_sine_angle(q.q4), m, lambda, c))
            out.push_back(c);
    }
    return out;
}

/// Pose candidates for Athena2: roots of the crank loop closure along the
/// planar reach circle, isolated by a dense scan plus bisection.
std::vector<PoseCandidate> candidates_a2(const JointVector& q, const Model& m) {
    std::vector<PoseCandidate> out;
    const double yp = m.geom.l02 + rail_axial(q.q1, q.q2, m.options.variant);
    const double tr = rail_transverse(q.q1, q.q2, m.options.variant);
    const double rail = sq(m.geom.l1) - sq(tr);
    if (rail < 0.0) return out;
    const double rho = m.geom.l4 + std::sqrt(rail);
    const double h = crank_half_difference(q.q1, q.q2);
    const double w2 = sq(m.geom.l3) - sq(h);
    if (w2 < 0.0) return out;
    const double w = std::sqrt(w2);
    const double crank = m.geom.l2 * (std::cos(q.q3) + std::sin(q.q3));
    const double xsign = m.options.a2_x_sign == A2XSign::Plus ? 1.0 : -1.0;

    const auto inner = [&](double lambda) -> double {
        const double xp = m.geom.l01 + rho * std::cos(lambda);
        const double zp = m.geom.l03 + rho * std::sin(lambda);
        const double x0 = xp + xsign * m.geom.l0;
        const double rad = sq(x0) + sq(zp) - sq(m.geom.l4);
        if (rad < 0.0) return std::numeric_limits<double>::quiet_NaN();
        const double t1 = std::sqrt(rad);
        const double t3 = std::atan2(x0, zp);
        return (t1 - m.geom.l4) * (std::sin(t3) + std::cos(t3)) + w - crank;
    };

    constexpr int kScan = 1440;
    std::vector<double> lambdas;
    for (const double target : {+m.geom.l2, -m.geom.l2}) {
        double prev_l = -kPi;
        double prev_g = inner(prev_l) - target;
        for (int k = 1; k <= kScan; ++k) {
            const double cur_l = -kPi + 2.0 * kPi * k / kScan;
            const double cur_g = inner(cur_l) - target;
            if (std::isfinite(prev_g) && std::isfinite(cur_g) && prev_g * cur_g <= 0.0 &&
                !(prev_g == 0.0 && cur_g == 0.0)) {
                double lo = prev_l, hi = cur_l, flo = prev_g;
                for (int it = 0; it < 100 && hi - lo > 1e-14; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double fm = inner(mid) - target;
                    if (!std::isfinite(fm)) break;
                    if (flo * fm <= 0.0)
                        hi = mid;
                    else {
                        lo = mid;
                        flo = fm;
                    }
                }
                lambdas.push_back(0.5 * (lo + hi));
            }
            prev_l = cur_l;
            prev_g = cur_g;
        }
    }
    std::sort(lambdas.begin(), lambdas.end());
    lambdas.erase(std::unique(lambdas.begin(), lambdas.end(),
                              [](double a, double b) { return std::fabs(a - b) < 1e-9; }),
                  lambdas.end());

    for (const double lambda : lambdas) {
        const double xp = m.geom.l01 + rho * std::cos(lambda);
        const double zp = m.geom.l03 + rho * std::sin(lambda);
        PoseCandidate c;
        if (pose_from_plane(xp, yp, zp, principal_sine_angle(q.q4), m, lambda, c))
            out.push_back(c);
    }
    return out;
}

/// Prefers candidates in the instrument working quadrant (x >= x-center,
/// z <= z-center: direction angle near -pi/4), and among them the ones whose
/// own inverse solution reproduces the requested joints, so that
/// ik(fk(q)) = q and the choice never depends on the caller's seed.
const PoseCandidate* pick_canonical(Arch arch, const JointVector& q, const Model& m,
                                    const std::vector<PoseCandidate>& cands) noexcept {
    const PoseCandidate* best = nullptr;
    double best_score = 0.0;
    bool best_consistent = false;
    for (const auto& c : cands) {
        const double score = std::fabs(wrap_angle(c.lambda + kPi / 4.0));
        bool consistent = false;
        const IkResult back = inverse_kinematics(arch, c.pose, m);
        if (back.status == KinStatus::Ok || back.status == KinStatus::NoRootInRange) {
            const double tol3 = 1e-9 * std::max(1.0, std::fabs(q.q3));
            consistent = std::fabs(back.q.q1 - q.q1) <=
                             1e-9 * std::max(1.0, std::fabs(q.q1)) &&
                         std::fabs(back.q.q3 - q.q3) <= tol3;
        }
        const bool better =
            !best || (consistent && !best_consistent) ||
            (consistent == best_consistent &&
             (score < best_score - 1e-12 ||
              (std::fabs(score - best_score) <= 1e-12 && c.lambda < best->lambda)));
        if (better) {
            best = &c;
            best_score = score;
            best_consistent = consistent;
        }
    }
    return best;
}

struct NewtonOutcome {
    bool converged = false;
    bool singular = false;
    TaskPose pose{};
    int iterations = 0;
    double final_scaled_residual = std::numeric_limits<double>::infinity();
    double condition = 0.0;
};

Eigen::Vector4d pose_to_vec(const TaskPose& p) noexcept {
    return Eigen::Vector4d(p.psi, p.theta, p.phi, p.l_ins);
}

TaskPose vec_to_pose(const Eigen::Vector4d& x) noexcept {
    return TaskPose{x[0], x[1], x[2], x[3]};
}

/// Damped Newton on the residual system with the joints held fixed.
NewtonOutcome newton_pose_solve(Arch arch, const JointVector& q, const Model& m,
                                const TaskPose& start) noexcept {
    NewtonOutcome out;
    Eigen::Vector4d x = pose_to_vec(start);

    const auto eval = [&](const Eigen::Vector4d& v, Residuals& r) -> bool {
        const ResidualEval e = residuals(arch, q, vec_to_pose(v), m);
        if (!e.ok) return false;
        r = e.r;
        return true;
    };

    Residuals res;
    if (!eval(x, res)) return out;  // start outside the real domain

    for (int it = 0; it < kNewtonMaxIter; ++it) {
        out.iterations = it;
        out.final_scaled_residual = res.max_scaled();
        out.pose = vec_to_pose(x);
        if (out.final_scaled_residual <= kNewtonTol) {
            out.converged = true;
            return out;
        }

        // Central-difference Jacobian in the pose coordinates, shrinking the
        // step when a probe leaves the real domain.
        Eigen::Matrix4d jac;
        bool jac_ok = true;
        for (int j = 0; j < 4 && jac_ok; ++j) {
            double h = std::max(1e-6, 1e-8 * std::fabs(x[j]));
            bool col_ok = false;
            for (int shrink = 0; shrink <= 3; ++shrink, h *= 0.1) {
                Eigen::Vector4d xp = x, xm = x;
                xp[j] += h;
                xm[j] -= h;
                Residuals rp, rm;
                if (!eval(xp, rp) || !eval(xm, rm)) continue;
                for (int i = 0; i < 4; ++i) jac(i, j) = (rp.f[i] - rm.f[i]) / (2.0 * h);
                col_ok = true;
                break;
            }
            jac_ok = col_ok;
        }
        if (!jac_ok) return out;

        const Eigen::JacobiSVD<Eigen::Matrix4d> svd(jac);
        const double smin = svd.singularValues()(3);
        const double smax = svd.singularValues()(0);
        out.condition = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
        if (out.condition > kCondLimit) {
            out.singular = true;
            return out;
        }

        Eigen::Vector4d f;
        Eigen::Vector4d scaled;
        for (int i = 0; i < 4; ++i) {
            f[i] = res.f[i];
            scaled[i] = res.f[i] / res.scale[i];
        }
        const double norm0 = scaled.norm();
        const Eigen::Vector4d dx = jac.partialPivLu().solve(-f);

        bool accepted = false;
        double alpha = 1.0;
        for (int ls = 0; ls < 24; ++ls, alpha *= 0.5) {
            const Eigen::Vector4d xc = x + alpha * dx;
            Residuals rc;
            if (!eval(xc, rc)) continue;
            double nc = 0.0;
            for (int i = 0; i < 4; ++i) nc += sq(rc.f[i] / rc.scale[i]);
            nc = std::sqrt(nc);
            if (nc < norm0) {
                x = xc;
                res = rc;
                accepted = true;
                break;
            }
        }
        if (!accepted) return out;  // stalled
    }
    out.iterations = kNewtonMaxIter;
    out.final_scaled_residual = res.max_scaled();
    out.pose = vec_to_pose(x);
    return out;
}

/// Wraps the converged pose into the canonical domain (theta in [0, pi],
/// psi in (-pi, pi]) and solves the decoupled roll exactly.
TaskPose canonicalize(TaskPose p, double q4) noexcept {
    p.theta = wrap_angle(p.theta);
    if (p.theta < 0.0) {
        p.theta = -p.theta;
        p.psi += kPi;
    }
    p.psi = wrap_angle(p.psi);
    p.phi = principal_sine_angle(q4);
    return p;
}

}  // namespace

FkResult forward_kinematics(Arch arch, const JointVector& q, const Model& m,
                            const TaskPose* seed) noexcept {
    FkResult out;

    const std::vector<PoseCandidate> cands =
        arch == Arch::Athena1 ? candidates_a1(q, m) : candidates_a2(q, m);
    const PoseCandidate* canonical = pick_canonical(arch, q, m, cands);

    // Deterministic start ladder: the root-isolation candidate when one
    // exists, then the caller's seed, then fixed working-space poses.
    std::vector<TaskPose> starts;
    if (canonical) starts.push_back(canonical->pose);
    if (seed) starts.push_back(*seed);
    starts.push_back(default_fk_seed(m));
    starts.push_back(TaskPose{0.5, 2.0, 0.0, m.limits.lins_max / 4.0});
    starts.push_back(TaskPose{-0.5, 2.6, 0.0, 3.0 * m.limits.lins_max / 4.0});

    NewtonOutcome n = newton_pose_solve(arch, q, m, starts.front());
    for (std::size_t i = 1; i < starts.size() && !n.converged; ++i) {
        const NewtonOutcome retry = newton_pose_solve(arch, q, m, starts[i]);
        if (retry.converged || retry.final_scaled_residual < n.final_scaled_residual)
            n = retry;
    }

    out.iterations = n.iterations;
    out.final_scaled_residual = n.final_scaled_residual;
    out.condition = n.condition;
    if (n.singular) {
        out.status = KinStatus::SingularJacobian;
        out.pose = n.pose;
        return out;
    }
    if (!n.converged) {
        out.status = KinStatus::NoConvergence;
        out.pose = n.pose;
        return out;
    }

    TaskPose pose = canonicalize(n.pose, q.q4);
    const ResidualEval check = residuals(arch, q, pose, m);
    if (!check.ok || check.r.max_scaled() > kNewtonTol) {
        // Wrapping cost a little accuracy; polish from the canonical point.
        const NewtonOutcome n2 = newton_pose_solve(arch, q, m, pose);
        if (n2.converged) {
            pose = canonicalize(n2.pose, q.q4);
            out.iterations += n2.iterations;
            out.final_scaled_residual = n2.final_scaled_residual;
            out.condition = n2.condition;
        }
    } else {
        out.final_scaled_residual = check.r.max_scaled();
    }

    out.status = KinStatus::Ok;
    out.pose = pose;
    return out;
}

}  // namespace athena
