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

#include "jacobian.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

#include "kinematics.hpp"
#include "rcm.hpp"

namespace athena {

namespace {

/// One central-difference column. Perturbs coordinate `index` of either the
/// joints (wrt_joints) or the pose, shrinking the step on domain failures.
bool central_column(Arch arch, const TaskPose& pose, const JointVector& q, const Model& m,
                    int index, bool wrt_joints, Eigen::Matrix4d& out,
                    DomainTerm& term) noexcept {
    const auto coord = [&](const TaskPose& p, const JointVector& j) -> double {
        if (wrt_joints) {
            switch (index) {
                case 0: return j.q1;
                case 1: return j.q2;
                case 2: return j.q3;
                default: return j.q4;
            }
        }
        switch (index) {
            case 0: return p.psi;
            case 1: return p.theta;
            case 2: return p.phi;
            default: return p.l_ins;
        }
    };
    const auto perturbed = [&](double delta, TaskPose& p, JointVector& j) {
        p = pose;
        j = q;
        double* target = nullptr;
        if (wrt_joints) {
            switch (index) {
                case 0: target = &j.q1; break;
                case 1: target = &j.q2; break;
                case 2: target = &j.q3; break;
                default: target = &j.q4; break;
            }
        } else {
            switch (index) {
                case 0: target = &p.psi; break;
                case 1: target = &p.theta; break;
                case 2: target = &p.phi; break;
                default: target = &p.l_ins; break;
            }
        }
        *target += delta;
    };

    double h = std::max(1e-6, 1e-8 * std::fabs(coord(pose, q)));
    for (int shrink = 0; shrink <= 3; ++shrink, h *= 0.1) {
        TaskPose pp, pm;
        JointVector jp, jm;
        perturbed(+h, pp, jp);
        perturbed(-h, pm, jm);
        const ResidualEval rp = residuals(arch, jp, pp, m);
        const ResidualEval rm = residuals(arch, jm, pm, m);
        if (!rp.ok || !rm.ok) {
            term = !rp.ok ? rp.term : rm.term;
            continue;
        }
        for (int i = 0; i < 4; ++i) out(i, index) = (rp.r.f[i] - rm.r.f[i]) / (2.0 * h);
        return true;
    }
    return false;
}

}  // namespace

JacobianEval numeric_jacobians(Arch arch, const TaskPose& pose, const JointVector& q,
                               const Model& m) noexcept {
    JacobianEval out;
    for (int j = 0; j < 4; ++j) {
        if (!central_column(arch, pose, q, m, j, true, out.jp.jq, out.term)) return out;
        if (!central_column(arch, pose, q, m, j, false, out.jp.jx, out.term)) return out;
    }
    out.ok = true;
    return out;
}

SingularityMetrics singularity_metrics(const JacobianPair& jp) noexcept {
    SingularityMetrics s;
    s.abs_det_jq = std::fabs(jp.jq.determinant());
    s.abs_det_jx = std::fabs(jp.jx.determinant());

    const auto cond = [](const Eigen::Matrix4d& j) -> double {
        const Eigen::JacobiSVD<Eigen::Matrix4d> svd(j);
        const double smin = svd.singularValues()(3);
        const double smax = svd.singularValues()(0);
        return smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    };
    s.cond_jq = cond(jp.jq);
    s.cond_jx = cond(jp.jx);

    const Eigen::Matrix4d jjt = jp.jq * jp.jq.transpose();
    s.manipulability = std::sqrt(std::max(0.0, jjt.determinant()));

    double row_prod = 1.0;
    for (int i = 0; i < 4; ++i) row_prod *= jp.jq.row(i).norm();
    s.normalized_abs_det_jq = row_prod > 0.0 ? s.abs_det_jq / row_prod : 0.0;
    return s;
}

ScanReport singularity_scan(const WorkspaceResult& result, const Model& m, double threshold,
                            std::uint64_t stride, int workers) {
    ScanReport rep;
    rep.arch = result.arch;
    rep.threshold = threshold;
    rep.stride = std::max<std::uint64_t>(1, stride);
    rep.min_normalized_abs_det_jq = std::numeric_limits<double>::infinity();

    // Indices of the valid records, strided.
    std::vector<std::size_t> targets;
    std::uint64_t valid_seen = 0;
    for (std::size_t i = 0; i < result.records.size(); ++i) {
        if (!result.records[i].valid()) continue;
        if (valid_seen % rep.stride == 0) targets.push_back(i);
        ++valid_seen;
    }
    if (targets.empty()) {
        rep.min_normalized_abs_det_jq = 0.0;
        return rep;
    }

    struct Partial {
        std::uint64_t evaluated = 0, flagged = 0;
        double min_val = std::numeric_limits<double>::infinity();
        std::size_t min_idx = 0;
        bool has_min = false;
    };

    constexpr std::size_t kChunk = 4096;
    const std::size_t n_chunks = (targets.size() + kChunk - 1) / kChunk;
    std::vector<Partial> partials(n_chunks);

    const auto run_chunk = [&](std::size_t chunk) {
        const std::size_t begin = chunk * kChunk;
        const std::size_t end = std::min(begin + kChunk, targets.size());
        Partial& part = partials[chunk];
        for (std::size_t t = begin; t < end; ++t) {
            const ValidityRecord& rec = result.records[targets[t]];
            const TipPoint rcm_tip = grid_to_rcm(rec.tip, m, result.frame_base);
            const TipToPose inv = tip_to_pose(rcm_tip, 0.0, m.geom, m.limits);
            double val = 0.0;
            if (inv.status == KinStatus::Ok) {
                const JacobianEval je = numeric_jacobians(result.arch, inv.pose,
                                                          rec.joints, m);
                val = je.ok ? singularity_metrics(je.jp).normalized_abs_det_jq : 0.0;
            }
            part.evaluated++;
            if (val < threshold) part.flagged++;
            if (!part.has_min || val < part.min_val) {
                part.has_min = true;
                part.min_val = val;
                part.min_idx = targets[t];
            }
        }
    };

    if (workers <= 0)
        workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (static_cast<std::size_t>(workers) > n_chunks)
        workers = static_cast<int>(n_chunks);

    if (workers <= 1) {
        for (std::size_t c = 0; c < n_chunks; ++c) run_chunk(c);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t c = next.fetch_add(1);
                    if (c >= n_chunks) return;
                    run_chunk(c);
                }
            });
        for (auto& t : pool) t.join();
    }

    // Strictly-less merge in chunk order: the earliest minimum wins ties.
    for (const auto& p : partials) {
        rep.evaluated_count += p.evaluated;
        rep.flagged_count += p.flagged;
        if (p.has_min && (!rep.has_min || p.min_val < rep.min_normalized_abs_det_jq)) {
            rep.has_min = true;
            rep.min_normalized_abs_det_jq = p.min_val;
            rep.argmin_point = result.records[p.min_idx].tip;
        }
    }
    if (!rep.has_min) rep.min_normalized_abs_det_jq = 0.0;
    return rep;
}

}  // namespace athena
