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

#include "io.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "errors.hpp"

namespace athena {

namespace {

using ordered_json = nlohmann::ordered_json;

class LineWriter {
  public:
    explicit LineWriter(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) throw IoError("cannot open for writing: " + path);
        buffer_.reserve(1 << 20);
    }
    ~LineWriter() { flush(); }

    void append(const char* data, std::size_t n) {
        buffer_.append(data, n);
        if (buffer_.size() > (1 << 20) - 512) flush();
    }
    void append(const std::string& s) { append(s.data(), s.size()); }

    void flush() {
        if (!buffer_.empty()) {
            out_.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
            buffer_.clear();
        }
    }

    bool good() const { return out_.good(); }

  private:
    std::ofstream out_;
    std::string buffer_;
};

ordered_json grid_json(const WorkspaceResult& r) {
    ordered_json spec;
    spec["x_range_mm"] = {r.grid.x_min, r.grid.x_max};
    spec["y_range_mm"] = {r.grid.y_min, r.grid.y_max};
    spec["z_range_mm"] = {r.grid.z_min, r.grid.z_max};
    spec["step_mm"] = r.grid.step;
    spec["frame"] = r.frame_base ? "base" : "rcm";
    return spec;
}

}  // namespace

void export_csv(const WorkspaceResult& result, const std::string& path) {
    LineWriter w(path);
    w.append("x_mm,y_mm,z_mm,arch,valid,reason,q1,q2,q3,q4\n");
    char line[512];
    for (const auto& rec : result.records) {
        int n;
        if (rec.valid()) {
            n = std::snprintf(line, sizeof line, "%.6f,%.6f,%.6f,%s,1,OK,%.6f,%.6f,%.6f,%.6f\n",
                              rec.tip.x, rec.tip.y, rec.tip.z, arch_name(rec.arch),
                              rec.joints.q1, rec.joints.q2, rec.joints.q3, rec.joints.q4);
        } else {
            n = std::snprintf(line, sizeof line, "%.6f,%.6f,%.6f,%s,0,%s,,,,\n", rec.tip.x,
                              rec.tip.y, rec.tip.z, arch_name(rec.arch),
                              reason_name(rec.reason));
        }
        w.append(line, static_cast<std::size_t>(n));
    }
    w.flush();
    if (!w.good()) throw IoError("write failed: " + path);
}

void export_ply(const WorkspaceResult& result, const std::string& path) {
    std::uint64_t n_valid = 0;
    for (const auto& rec : result.records)
        if (rec.valid()) ++n_valid;

    LineWriter w(path);
    char head[256];
    int n = std::snprintf(head, sizeof head,
                          "ply\nformat ascii 1.0\nelement vertex %" PRIu64
                          "\nproperty float x\nproperty float y\nproperty float z\n"
                          "end_header\n",
                          n_valid);
    w.append(head, static_cast<std::size_t>(n));
    char line[128];
    for (const auto& rec : result.records) {
        if (!rec.valid()) continue;
        n = std::snprintf(line, sizeof line, "%.6f %.6f %.6f\n", rec.tip.x, rec.tip.y,
                          rec.tip.z);
        w.append(line, static_cast<std::size_t>(n));
    }
    w.flush();
    if (!w.good()) throw IoError("write failed: " + path);
}

void export_json(const WorkspaceResult& result, const std::string& path,
                 bool include_points) {
    ordered_json doc;
    doc["spec"] = grid_json(result);
    doc["arch"] = arch_name(result.arch);
    doc["valid_count"] = result.valid_count;
    doc["total_candidates"] = result.total_candidates;
    ordered_json hist;
    for (int i = 0; i < kReasonCount; ++i)
        hist[reason_name(static_cast<Reason>(i))] = result.histogram[i];
    doc["reason_histogram"] = std::move(hist);
    if (include_points) {
        auto& pts = doc["points"];
        pts = ordered_json::array();
        for (const auto& rec : result.records) {
            ordered_json p;
            p["x"] = rec.tip.x;
            p["y"] = rec.tip.y;
            p["z"] = rec.tip.z;
            p["reason"] = reason_name(rec.reason);
            if (rec.valid())
                p["q"] = {rec.joints.q1, rec.joints.q2, rec.joints.q3, rec.joints.q4};
            pts.push_back(std::move(p));
        }
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << doc.dump(include_points ? -1 : 2) << "\n";
    if (!out.good()) throw IoError("write failed: " + path);
}

CsvCounts import_csv_counts(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty CSV: " + path);
    if (line.rfind("x_mm,y_mm,z_mm,arch,valid,reason", 0) != 0)
        throw IoError("unexpected CSV header: " + path);

    CsvCounts counts;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        // columns: x,y,z,arch,valid,reason,q1..q4
        std::size_t pos = 0;
        int field = 0;
        std::string valid_cell, reason_cell;
        while (field < 6) {
            const std::size_t comma = line.find(',', pos);
            const std::string cell = line.substr(pos, comma - pos);
            if (field == 4) valid_cell = cell;
            if (field == 5) reason_cell = cell;
            if (comma == std::string::npos) break;
            pos = comma + 1;
            ++field;
        }
        Reason reason;
        if (!reason_from_name(reason_cell, reason))
            throw IoError("unknown reason code in CSV: " + reason_cell);
        counts.rows++;
        counts.histogram[static_cast<int>(reason)]++;
        if (valid_cell == "1") counts.valid++;
    }
    return counts;
}

WorkspaceResult load_result_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError(std::string("JSON parse failure: ") + e.what());
    }

    WorkspaceResult r;
    try {
        const auto& spec = doc.at("spec");
        r.grid.x_min = spec.at("x_range_mm")[0].get<double>();
        r.grid.x_max = spec.at("x_range_mm")[1].get<double>();
        r.grid.y_min = spec.at("y_range_mm")[0].get<double>();
        r.grid.y_max = spec.at("y_range_mm")[1].get<double>();
        r.grid.z_min = spec.at("z_range_mm")[0].get<double>();
        r.grid.z_max = spec.at("z_range_mm")[1].get<double>();
        r.grid.step = spec.at("step_mm").get<double>();
        r.frame_base = spec.value("frame", "rcm") == std::string("base");
        if (!arch_from_name(doc.at("arch").get<std::string>(), r.arch))
            throw IoError("unknown arch in JSON result");
        r.valid_count = doc.at("valid_count").get<std::uint64_t>();
        r.total_candidates = doc.at("total_candidates").get<std::uint64_t>();
        if (doc.contains("reason_histogram")) {
            for (int i = 0; i < kReasonCount; ++i) {
                const char* name = reason_name(static_cast<Reason>(i));
                r.histogram[i] = doc["reason_histogram"].value(name, std::uint64_t{0});
            }
        }
        if (doc.contains("points")) {
            for (const auto& p : doc["points"]) {
                ValidityRecord rec;
                rec.tip = TipPoint{p.at("x").get<double>(), p.at("y").get<double>(),
                                   p.at("z").get<double>()};
                rec.arch = r.arch;
                Reason reason = Reason::OK;
                if (p.contains("reason") &&
                    !reason_from_name(p["reason"].get<std::string>(), reason))
                    throw IoError("unknown reason code in JSON result");
                rec.reason = reason;
                if (rec.valid() && p.contains("q")) {
                    rec.joints.q1 = p["q"][0].get<double>();
                    rec.joints.q2 = p["q"][1].get<double>();
                    rec.joints.q3 = p["q"][2].get<double>();
                    rec.joints.q4 = p["q"][3].get<double>();
                    rec.joints.arch = r.arch;
                }
                r.records.push_back(rec);
                if (!rec.valid()) r.stored_all = true;
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("malformed workspace JSON: ") + e.what());
    }
    return r;
}

int export_slices(const WorkspaceResult& result, const std::string& dir) {
    std::filesystem::create_directories(dir);
    // Group valid records by their z value; records arrive in grid order so
    // equal z values are not contiguous, collect per-z in a map keyed by the
    // exact double bits.
    std::map<double, std::vector<const ValidityRecord*>> slices;
    for (const auto& rec : result.records)
        if (rec.valid()) slices[rec.tip.z].push_back(&rec);

    int files = 0;
    for (const auto& [z, recs] : slices) {
        char name[128];
        std::snprintf(name, sizeof name, "slice_z_%+.3f.csv", z);
        LineWriter w(dir + "/" + name);
        char line[128];
        int n = std::snprintf(line, sizeof line, "# z_mm=%.6f arch=%s\nx_mm,y_mm\n", z,
                              arch_name(result.arch));
        w.append(line, static_cast<std::size_t>(n));
        for (const auto* rec : recs) {
            n = std::snprintf(line, sizeof line, "%.6f,%.6f\n", rec->tip.x, rec->tip.y);
            w.append(line, static_cast<std::size_t>(n));
        }
        w.flush();
        if (!w.good()) throw IoError("write failed: " + dir + "/" + name);
        ++files;
    }
    return files;
}

std::string scan_report_json(const ScanReport& report) {
    ordered_json doc;
    doc["arch"] = arch_name(report.arch);
    doc["threshold"] = report.threshold;
    doc["evaluated_count"] = report.evaluated_count;
    doc["flagged_count"] = report.flagged_count;
    doc["min_abs_det_q"] = report.min_normalized_abs_det_jq;
    doc["argmin_point"] = {report.argmin_point.x, report.argmin_point.y,
                           report.argmin_point.z};
    return doc.dump(2) + "\n";
}

void write_scan_report_json(const ScanReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << scan_report_json(report);
    if (!out.good()) throw IoError("write failed: " + path);
}

}  // namespace athena
