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

#ifndef ATHENA_CORE_WORKSPACE_HPP
#define ATHENA_CORE_WORKSPACE_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "types.hpp"

namespace athena {

/// Cartesian sweep grid: closed ranges and a positive increment, mm.
/// Points are generated index-based (x_i = x_min + i * step), never by
/// floating accumulation, so grids are bit-reproducible.
struct GridSpec {
    double x_min = 0.0, x_max = 0.0;
    double y_min = 0.0, y_max = 0.0;
    double z_min = 0.0, z_max = 0.0;
    double step = 1.0;

    bool operator==(const GridSpec&) const = default;
};

/// Sweep defaults: x in [0, 300], y in [-500, 500], z in [-350, 0], 2 mm.
GridSpec default_grid() noexcept;

/// Points on one axis: floor(span/step) + 1.
std::uint64_t axis_count(double lo, double hi, double step) noexcept;

/// Product of the per-axis counts.
std::uint64_t candidate_count(const GridSpec& spec) noexcept;

/// Visits every grid point in documented order: x outer, then y, then z
/// inner. The visitor returns false to stop early.
template <typename Fn>
void enumerate_grid(const GridSpec& spec, Fn&& fn) {
    const std::uint64_t nx = axis_count(spec.x_min, spec.x_max, spec.step);
    const std::uint64_t ny = axis_count(spec.y_min, spec.y_max, spec.step);
    const std::uint64_t nz = axis_count(spec.z_min, spec.z_max, spec.step);
    for (std::uint64_t ix = 0; ix < nx; ++ix) {
        const double x = spec.x_min + static_cast<double>(ix) * spec.step;
        for (std::uint64_t iy = 0; iy < ny; ++iy) {
            const double y = spec.y_min + static_cast<double>(iy) * spec.step;
            for (std::uint64_t iz = 0; iz < nz; ++iz) {
                const double z = spec.z_min + static_cast<double>(iz) * spec.step;
                if (!fn(x, y, z)) return;
            }
        }
    }
}

/// One classified grid point. `joints` is meaningful iff reason == OK.
struct ValidityRecord {
    TipPoint tip{};  ///< grid coordinates as enumerated
    Arch arch = Arch::Athena1;
    Reason reason = Reason::OK;
    JointVector joints{};

    bool valid() const noexcept { return reason == Reason::OK; }
};

struct SweepOptions {
    bool store_all = false;    ///< keep failing records too (memory heavy)
    bool counts_only = false;  ///< keep no records at all
    int workers = 0;           ///< <=0 selects hardware concurrency
    bool frame_base = false;   ///< grid given in the robot base frame
};

struct WorkspaceResult {
    Arch arch = Arch::Athena1;
    GridSpec grid{};
    bool frame_base = false;
    bool stored_all = false;
    std::uint64_t total_candidates = 0;
    std::uint64_t valid_count = 0;
    std::array<std::uint64_t, kReasonCount> histogram{};
    std::vector<ValidityRecord> records;
};

/// Converts grid coordinates to the RCM tip frame (identity unless the
/// sweep ran with base-frame input).
TipPoint grid_to_rcm(const TipPoint& p, const Model& m, bool frame_base) noexcept;

/// Classifies a single tip point for an architecture. Failures are data:
/// the record's reason carries the first failing constraint in precedence
/// order (degenerate tip, insertion window, real solvability, then joint
/// limits q1..q4).
ValidityRecord classify_point(const TipPoint& tip, Arch arch, const Model& m,
                              bool frame_base = false) noexcept;

/// Classifies every grid point. Deterministic for any worker count: the
/// grid is cut into fixed-size chunks, classified independently, and merged
/// in chunk order.
WorkspaceResult sweep(Arch arch, const GridSpec& spec, const Model& m,
                      const SweepOptions& options = {});

class GridMismatchError : public std::runtime_error {
  public:
    GridMismatchError() : std::runtime_error("workspace results use different grids") {}
};

struct ComparisonReport {
    std::uint64_t total_candidates = 0;
    std::uint64_t valid_a = 0, valid_b = 0;
    double pct_difference = 0.0;  ///< (valid_b/valid_a - 1) * 100
    double volume_a_mm3 = 0.0, volume_b_mm3 = 0.0;
    std::array<std::uint64_t, kReasonCount> histogram_a{}, histogram_b{};
    Arch arch_a = Arch::Athena1, arch_b = Arch::Athena2;
};

/// Side-by-side workspace comparison. Throws GridMismatchError unless both
/// results enumerate the same grid.
ComparisonReport compare(const WorkspaceResult& a, const WorkspaceResult& b);

}  // namespace athena

#endif
