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

#ifndef ATHENA_CORE_IO_HPP
#define ATHENA_CORE_IO_HPP

#include <array>
#include <cstdint>
#include <string>

#include "jacobian.hpp"
#include "workspace.hpp"

namespace athena {

/// Workspace exports. All files UTF-8 with LF line endings. Throws IoError
/// on write failures.
///
/// CSV: header `x_mm,y_mm,z_mm,arch,valid,reason,q1,q2,q3,q4`, one row per
/// stored record, 6 fractional digits; joint cells stay empty on failing
/// records. PLY: ASCII 1.0, vertex-only float x/y/z, valid points only.
/// JSON: spec, arch, counts, reason histogram, optional points array.
void export_csv(const WorkspaceResult& result, const std::string& path);
void export_ply(const WorkspaceResult& result, const std::string& path);
void export_json(const WorkspaceResult& result, const std::string& path,
                 bool include_points);

/// Counts recovered from a CSV export.
struct CsvCounts {
    std::uint64_t rows = 0;
    std::uint64_t valid = 0;
    std::array<std::uint64_t, kReasonCount> histogram{};
};
CsvCounts import_csv_counts(const std::string& path);

/// Rehydrates a JSON export (points optional) for comparison or scanning.
WorkspaceResult load_result_json(const std::string& path);

/// Emits one CSV per z slice (x,y pairs of valid points), gnuplot-ready,
/// into `dir` with names slice_z_<value>.csv. Returns the file count.
int export_slices(const WorkspaceResult& result, const std::string& dir);

/// Singularity scan report as JSON.
void write_scan_report_json(const ScanReport& report, const std::string& path);
std::string scan_report_json(const ScanReport& report);

}  // namespace athena

#endif
