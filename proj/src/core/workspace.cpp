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

#include "workspace.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "kinematics.hpp"
#include "rcm.hpp"

namespace athena {

GridSpec default_grid() noexcept {
    return GridSpec{0.0, 300.0, -500.0, 500.0, -350.0, 0.0, 2.0};
}

std::uint64_t axis_count(double lo, double hi, double step) noexcept {
    if (!(step > 0.0) || hi < lo) return 0;
    return static_cast<std::uint64_t>(std::floor((hi - lo) / step)) + 1;
}

std::uint64_t candidate_count(const GridSpec& spec) noexcept {
    return axis_count(spec.x_min, spec.x_max, spec.step) *
           axis_count(spec.y_min, spec.y_max, spec.step) *
           axis_count(spec.z_min, spec.z_max, spec.step);
}

TipPoint grid_to_rcm(const TipPoint& p, const Model& m, bool frame_base) noexcept {
    if (!frame_base) return p;
    return TipPoint{p.x - m.geom.l01, p.y - m.geom.l02, p.z - m.geom.l03};
}

ValidityRecord classify_point(const TipPoint& tip, Arch arch, const Model& m,
                              bool frame_base) noexcept {
    ValidityRecord rec;
    rec.tip = tip;
    rec.arch = arch;

    const TipPoint rcm_tip = grid_to_rcm(tip, m, frame_base);
    const TipToPose inv = tip_to_pose(rcm_tip, 0.0, m.geom, m.limits);
    if (inv.status == KinStatus::DegenerateTip) {
        rec.reason = Reason::DegenerateTip;
        return rec;
    }
    if (inv.status == KinStatus::InsertionRange) {
        rec.reason = Reason::InsertionLimit;
        return rec;
    }

    const IkResult ik = inverse_kinematics(arch, inv.pose, m);
    if (ik.status == KinStatus::Unreachable) {
        rec.reason = Reason::NoRealSolution;
        return rec;
    }

    // Per-joint limits in index order; a NoRootInRange crank solve surfaces
    // here as a q3 violation.
    if (ik.limit_violations & LimitQ1) {
        rec.reason = Reason::Q1Limit;
        return rec;
    }
    if (ik.limit_violations & LimitQ2) {
        rec.reason = Reason::Q2Limit;
        return rec;
    }
    if ((ik.limit_violations & LimitQ3) || !ik.q3_in_range) {
        rec.reason = Reason::Q3Limit;
        return rec;
    }
    if (ik.limit_violations & LimitQ4) {
        rec.reason = Reason::Q4Limit;
        return rec;
    }

    rec.reason = Reason::OK;
    rec.joints = ik.q;
    return rec;
}

namespace {

constexpr std::uint64_t kChunk = 65536;

struct ChunkPartial {
    std::uint64_t valid = 0;
    std::array<std::uint64_t, kReasonCount> hist{};
    std::vector<ValidityRecord> records;
};

struct GridIndexer {
    std::uint64_t nx, ny, nz;
    GridSpec spec;

    TipPoint point(std::uint64_t flat) const noexcept {
        const std::uint64_t iz = flat % nz;
        const std::uint64_t iy = (flat / nz) % ny;
        const std::uint64_t ix = flat / (nz * ny);
        return TipPoint{spec.x_min + static_cast<double>(ix) * spec.step,
                        spec.y_min + static_cast<double>(iy) * spec.step,
                        spec.z_min + static_cast<double>(iz) * spec.step};
    }
};

}  // namespace

WorkspaceResult sweep(Arch arch, const GridSpec& spec, const Model& m,
                      const SweepOptions& options) {
    WorkspaceResult result;
    result.arch = arch;
    result.grid = spec;
    result.frame_base = options.frame_base;
    result.stored_all = options.store_all && !options.counts_only;
    result.total_candidates = candidate_count(spec);
    if (result.total_candidates == 0) return result;

    const GridIndexer indexer{axis_count(spec.x_min, spec.x_max, spec.step),
                              axis_count(spec.y_min, spec.y_max, spec.step),
                              axis_count(spec.z_min, spec.z_max, spec.step), spec};

    const std::uint64_t n_chunks = (result.total_candidates + kChunk - 1) / kChunk;
    std::vector<ChunkPartial> partials(n_chunks);

    const auto run_chunk = [&](std::uint64_t chunk) {
        const std::uint64_t begin = chunk * kChunk;
        const std::uint64_t end = std::min(begin + kChunk, result.total_candidates);
        ChunkPartial& part = partials[chunk];
        for (std::uint64_t i = begin; i < end; ++i) {
            const ValidityRecord rec =
                classify_point(indexer.point(i), arch, m, options.frame_base);
            part.hist[static_cast<int>(rec.reason)]++;
            if (rec.valid()) part.valid++;
            if (!options.counts_only && (rec.valid() || options.store_all))
                part.records.push_back(rec);
        }
    };

    int workers = options.workers;
    if (workers <= 0)
        workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    workers = static_cast<int>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), n_chunks));

    if (workers <= 1) {
        for (std::uint64_t c = 0; c < n_chunks; ++c) run_chunk(c);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::uint64_t c = next.fetch_add(1);
                    if (c >= n_chunks) return;
                    run_chunk(c);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    // Merge in chunk order: identical output for any worker count.
    std::size_t total_records = 0;
    for (const auto& p : partials) total_records += p.records.size();
    result.records.reserve(total_records);
    for (auto& p : partials) {
        result.valid_count += p.valid;
        for (int i = 0; i < kReasonCount; ++i) result.histogram[i] += p.hist[i];
        result.records.insert(result.records.end(), p.records.begin(), p.records.end());
        p.records.clear();
        p.records.shrink_to_fit();
    }
    return result;
}

ComparisonReport compare(const WorkspaceResult& a, const WorkspaceResult& b) {
    if (!(a.grid == b.grid)) throw GridMismatchError();
    ComparisonReport rep;
    rep.total_candidates = a.total_candidates;
    rep.valid_a = a.valid_count;
    rep.valid_b = b.valid_count;
    rep.pct_difference =
        a.valid_count == 0
            ? std::numeric_limits<double>::quiet_NaN()
            : (static_cast<double>(b.valid_count) / static_cast<double>(a.valid_count) -
               1.0) *
                  100.0;
    const double cell = a.grid.step * a.grid.step * a.grid.step;
    rep.volume_a_mm3 = static_cast<double>(a.valid_count) * cell;
    rep.volume_b_mm3 = static_cast<double>(b.valid_count) * cell;
    rep.histogram_a = a.histogram;
    rep.histogram_b = b.histogram;
    rep.arch_a = a.arch;
    rep.arch_b = b.arch;
    return rep;
}

}  // namespace athena
