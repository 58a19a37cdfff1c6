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

// athena-kin command line: kinematics queries, workspace sweeps, Jacobian
// scans and stiffness reports for the ATHENA-1/ATHENA-2 architectures.
// Angles are degrees at this boundary; the library works in radians.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "athena/athena_kin.h"

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

double deg2rad(double d) { return d * kDeg; }
double rad2deg(double r) { return r / kDeg; }

int exit_code_for(athena_status s) {
    switch (s) {
        case ATHENA_OK: return 0;
        case ATHENA_ERR_UNREACHABLE:
        case ATHENA_ERR_NO_ROOT_IN_RANGE:
        case ATHENA_ERR_JOINT_LIMIT:
        case ATHENA_ERR_DEGENERATE_TIP:
        case ATHENA_ERR_INSERTION_RANGE: return 2;
        case ATHENA_ERR_NO_CONVERGENCE:
        case ATHENA_ERR_SINGULAR_JACOBIAN: return 3;
        case ATHENA_ERR_IO: return 4;
        case ATHENA_ERR_GRID_MISMATCH: return 5;
        default: return 1;
    }
}

struct ModelHandle {
    athena_model* ptr = nullptr;
    ~ModelHandle() { athena_model_destroy(ptr); }
};

struct WorkspaceHandle {
    athena_workspace* ptr = nullptr;
    ~WorkspaceHandle() { athena_workspace_destroy(ptr); }
};

struct GlobalOpts {
    std::string config_path;
    bool lenient = false;
    std::string arch = "athena1";
    std::string variant;
    std::string branch;
    std::string q3_root;
    int workers = 0;
    bool json = false;
    std::string manifest_path;
};

struct Manifest {
    nlohmann::ordered_json flags = nlohmann::ordered_json::object();
    std::string subcommand;
    std::string config_path;
    std::string config_hash;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

Manifest g_manifest;

void manifest_flag(const std::string& key, const nlohmann::ordered_json& value) {
    g_manifest.flags[key] = value;
}

void write_manifest(const GlobalOpts& g) {
    if (g.manifest_path.empty()) return;
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - g_manifest.start)
                             .count();
    nlohmann::ordered_json doc;
    doc["tool"] = "athena-kin";
    doc["version"] = athena_version();
    doc["subcommand"] = g_manifest.subcommand;
    doc["config_path"] = g_manifest.config_path;
    doc["config_hash"] = g_manifest.config_hash;
    doc["flags"] = g_manifest.flags;
    doc["duration_ms"] = elapsed;
    std::ofstream out(g.manifest_path, std::ios::binary);
    if (out) out << doc.dump(2) << "\n";
}

[[noreturn]] void die(athena_status s) {
    std::cerr << "error: " << athena_status_name(s) << ": " << athena_last_error() << "\n";
    std::exit(exit_code_for(s));
}

void check(athena_status s) {
    if (s != ATHENA_OK) die(s);
}

/// Resolves the configuration source (flag, then ATHENA_KIN_CONFIG, then the
/// embedded default) and applies the solver option flags.
athena_status make_model_impl(const GlobalOpts& g, ModelHandle& model) {
    std::string resolved = g.config_path;
    if (resolved.empty()) {
        if (const char* env = std::getenv("ATHENA_KIN_CONFIG")) resolved = env;
    }
    athena_status s;
    if (resolved.empty()) {
        g_manifest.config_path = "builtin-default";
        s = athena_model_create_default(&model.ptr);
    } else {
        g_manifest.config_path = resolved;
        s = athena_model_create_from_file(resolved.c_str(), g.lenient ? 1 : 0, &model.ptr);
    }
    if (s != ATHENA_OK) return s;
    if (!g.variant.empty()) {
        s = athena_model_set_option(model.ptr, "variant", g.variant.c_str());
        if (s != ATHENA_OK) return s;
    }
    if (!g.branch.empty()) {
        s = athena_model_set_option(model.ptr, "branch", g.branch.c_str());
        if (s != ATHENA_OK) return s;
    }
    if (!g.q3_root.empty()) {
        s = athena_model_set_option(model.ptr, "q3_root", g.q3_root.c_str());
        if (s != ATHENA_OK) return s;
    }
    char hash[32];
    if (athena_model_content_hash(model.ptr, hash, sizeof hash) == ATHENA_OK)
        g_manifest.config_hash = hash;
    return ATHENA_OK;
}

/// Any failure to assemble the model is a configuration error: exit 1.
void make_model(const GlobalOpts& g, ModelHandle& model) {
    const athena_status s = make_model_impl(g, model);
    if (s != ATHENA_OK) {
        std::cerr << "error: " << athena_status_name(s) << ": " << athena_last_error()
                  << "\n";
        std::exit(1);
    }
}

int arch_id(const std::string& name) {
    return name == "athena2" ? ATHENA_ARCH_2 : ATHENA_ARCH_1;
}

struct GridFlags {
    double x_min = 0.0, x_max = 300.0;
    double y_min = -500.0, y_max = 500.0;
    double z_min = -350.0, z_max = 0.0;
    double step = 2.0;

    athena_grid grid() const {
        return athena_grid{x_min, x_max, y_min, y_max, z_min, z_max, step};
    }

    void add_options(CLI::App* cmd) {
        cmd->add_option("--x-min", x_min, "grid x minimum [mm]")->capture_default_str();
        cmd->add_option("--x-max", x_max, "grid x maximum [mm]")->capture_default_str();
        cmd->add_option("--y-min", y_min, "grid y minimum [mm]")->capture_default_str();
        cmd->add_option("--y-max", y_max, "grid y maximum [mm]")->capture_default_str();
        cmd->add_option("--z-min", z_min, "grid z minimum [mm]")->capture_default_str();
        cmd->add_option("--z-max", z_max, "grid z maximum [mm]")->capture_default_str();
        cmd->add_option("--step", step, "grid increment [mm]")->capture_default_str();
    }

    void record_manifest() const {
        manifest_flag("grid", {x_min, x_max, y_min, y_max, z_min, z_max});
        manifest_flag("step", step);
    }
};

void print_joints_text(int arch, const athena_joints& q) {
    std::printf("arch=%s\n", athena_arch_name(arch));
    std::printf("q1 = %.6f mm\n", q.q1_mm);
    std::printf("q2 = %.6f mm\n", q.q2_mm);
    if (arch == ATHENA_ARCH_1)
        std::printf("q3 = %.6f mm\n", q.q3);
    else
        std::printf("q3 = %.6f deg\n", rad2deg(q.q3));
    std::printf("q4 = %.6f deg\n", rad2deg(q.q4_rad));
}

// ---------------------------------------------------------------------
// ik
// ---------------------------------------------------------------------

int cmd_ik(const GlobalOpts& g, double psi_deg, double theta_deg, double phi_deg,
           double lins_mm, bool no_limit_check, bool verify) {
    ModelHandle model;
    make_model(g, model);

    const int arch = arch_id(g.arch);
    const athena_pose pose{deg2rad(psi_deg), deg2rad(theta_deg), deg2rad(phi_deg), lins_mm};
    if (verify) athena_model_set_option(model.ptr, "verify_q3", "on");

    athena_joints q{};
    unsigned mask = 0;
    athena_status s = athena_ik(model.ptr, arch, &pose, 0, &q, &mask);
    if (s == ATHENA_ERR_UNREACHABLE) {
        std::cerr << "error: unreachable pose, reason NO_REAL_SOLUTION ("
                  << athena_last_error() << ")\n";
        return 2;
    }
    if (s == ATHENA_ERR_NO_ROOT_IN_RANGE) {
        std::cerr << "error: no crank root in range, reason NO_ROOT_IN_RANGE\n";
        return 2;
    }
    if (s != ATHENA_OK) die(s);

    double f[4], scale[4];
    check(athena_residuals(model.ptr, arch, &q, &pose, f, scale));

    if (g.json) {
        nlohmann::ordered_json doc;
        doc["arch"] = athena_arch_name(arch);
        doc["q1_mm"] = q.q1_mm;
        doc["q2_mm"] = q.q2_mm;
        if (arch == ATHENA_ARCH_1)
            doc["q3_mm"] = q.q3;
        else
            doc["q3_deg"] = rad2deg(q.q3);
        doc["q4_deg"] = rad2deg(q.q4_rad);
        doc["limit_violations"] = mask;
        if (verify) {
            doc["residuals"] = {f[0], f[1], f[2], f[3]};
            doc["residual_scales"] = {scale[0], scale[1], scale[2], scale[3]};
        }
        std::cout << doc.dump(2) << "\n";
    } else {
        print_joints_text(arch, q);
        if (!no_limit_check && mask) {
            const char* names[] = {"q1", "q2", "q3", "q4"};
            for (int i = 0; i < 4; ++i)
                if (mask & (1u << i))
                    std::printf("warning: %s outside joint limits\n", names[i]);
        }
        if (verify) {
            for (int i = 0; i < 4; ++i)
                std::printf("f%d = %+.3e (scaled %.3e)\n", i + 1, f[i],
                            std::fabs(f[i]) / scale[i]);
        }
    }
    manifest_flag("arch", athena_arch_name(arch));
    manifest_flag("pose_deg", {psi_deg, theta_deg, phi_deg, lins_mm});
    return 0;
}

// ---------------------------------------------------------------------
// fk
// ---------------------------------------------------------------------

int cmd_fk(const GlobalOpts& g, double q1, double q2, double q3_in, double q4_deg) {
    ModelHandle model;
    make_model(g, model);

    const int arch = arch_id(g.arch);
    athena_joints q{q1, q2, arch == ATHENA_ARCH_1 ? q3_in : deg2rad(q3_in),
                    deg2rad(q4_deg)};
    athena_pose pose{};
    int iters = 0;
    double resid = 0.0;
    const athena_status s = athena_fk(model.ptr, arch, &q, nullptr, &pose, &iters, &resid);
    if (s != ATHENA_OK) die(s);

    if (g.json) {
        nlohmann::ordered_json doc;
        doc["arch"] = athena_arch_name(arch);
        doc["psi_deg"] = rad2deg(pose.psi_rad);
        doc["theta_deg"] = rad2deg(pose.theta_rad);
        doc["phi_deg"] = rad2deg(pose.phi_rad);
        doc["l_ins_mm"] = pose.l_ins_mm;
        doc["iterations"] = iters;
        doc["scaled_residual"] = resid;
        std::cout << doc.dump(2) << "\n";
    } else {
        std::printf("arch=%s\n", athena_arch_name(arch));
        std::printf("psi   = %.6f deg\n", rad2deg(pose.psi_rad));
        std::printf("theta = %.6f deg\n", rad2deg(pose.theta_rad));
        std::printf("phi   = %.6f deg\n", rad2deg(pose.phi_rad));
        std::printf("l_ins = %.6f mm\n", pose.l_ins_mm);
        std::printf("iterations=%d scaled_residual=%.3e\n", iters, resid);
    }
    manifest_flag("arch", athena_arch_name(arch));
    manifest_flag("joints", {q.q1_mm, q.q2_mm, q.q3, rad2deg(q.q4_rad)});
    return 0;
}

// ---------------------------------------------------------------------
// workspace
// ---------------------------------------------------------------------

int run_one_sweep(const GlobalOpts& g, athena_model* model, int arch, const GridFlags& gf,
                  bool store_all, bool count_only, bool frame_base,
                  const std::string& out_prefix, const std::vector<std::string>& formats,
                  bool json_points, const std::string& slices_dir,
                  nlohmann::ordered_json* json_out) {
    const athena_grid grid = gf.grid();
    if (count_only) {
        unsigned long long visited = 0;
        check(athena_grid_enumerate(
            &grid,
            [](void* user, double, double, double) {
                ++*static_cast<unsigned long long*>(user);
                return 1;
            },
            &visited));
        if (g.json && json_out)
            (*json_out)["total"] = visited;
        else
            std::printf("arch=%s total=%llu\n", athena_arch_name(arch), visited);
        return 0;
    }

    athena_sweep_options opt{};
    opt.store_all = store_all ? 1 : 0;
    opt.counts_only = 0;
    opt.workers = g.workers;
    opt.frame_base = frame_base ? 1 : 0;

    WorkspaceHandle ws;
    check(athena_sweep(model, arch, &grid, &opt, &ws.ptr));

    unsigned long long total = 0, valid = 0;
    check(athena_workspace_counts(ws.ptr, &total, &valid));
    const double ratio = total ? 100.0 * static_cast<double>(valid) / static_cast<double>(total)
                               : 0.0;

    for (const auto& fmt : formats) {
        const std::string path = out_prefix + "." + fmt;
        check(athena_workspace_export(ws.ptr, fmt.c_str(), path.c_str(),
                                      json_points ? 1 : 0));
        std::fprintf(stderr, "wrote %s\n", path.c_str());
    }
    if (!slices_dir.empty()) {
        int files = 0;
        check(athena_workspace_export_slices(ws.ptr, slices_dir.c_str(), &files));
        std::fprintf(stderr, "wrote %d slice files under %s\n", files, slices_dir.c_str());
    }

    if (g.json && json_out) {
        unsigned long long hist[ATHENA_REASON_COUNT];
        check(athena_workspace_histogram(ws.ptr, hist));
        (*json_out)["arch"] = athena_arch_name(arch);
        (*json_out)["total"] = total;
        (*json_out)["valid"] = valid;
        (*json_out)["ratio_pct"] = ratio;
        nlohmann::ordered_json h;
        for (int i = 0; i < ATHENA_REASON_COUNT; ++i) h[athena_reason_name(i)] = hist[i];
        (*json_out)["reason_histogram"] = std::move(h);
    } else {
        std::printf("arch=%s total=%llu valid=%llu ratio=%.3f%%\n", athena_arch_name(arch),
                    total, valid, ratio);
    }
    return 0;
}

int cmd_workspace(const GlobalOpts& g, const std::string& arch_sel, const GridFlags& gf,
                  bool store_all, bool count_only, const std::string& frame,
                  std::string out_prefix, const std::string& format_list, bool json_points,
                  const std::string& slices_dir) {
    ModelHandle model;
    make_model(g, model);

    std::vector<std::string> formats;
    if (!format_list.empty()) {
        std::size_t pos = 0;
        while (pos != std::string::npos) {
            const std::size_t comma = format_list.find(',', pos);
            formats.push_back(format_list.substr(pos, comma - pos));
            pos = comma == std::string::npos ? comma : comma + 1;
        }
    }
    const bool frame_base = frame == "base";

    gf.record_manifest();
    manifest_flag("arch", arch_sel);
    manifest_flag("frame", frame);
    manifest_flag("workers", g.workers);

    std::vector<int> archs;
    if (arch_sel == "both") {
        archs = {ATHENA_ARCH_1, ATHENA_ARCH_2};
    } else {
        archs = {arch_id(arch_sel)};
    }

    nlohmann::ordered_json results = nlohmann::ordered_json::array();
    for (int arch : archs) {
        std::string prefix = out_prefix;
        if (prefix.empty()) prefix = std::string("workspace_") + athena_arch_name(arch);
        else if (archs.size() > 1) prefix += std::string("_") + athena_arch_name(arch);
        nlohmann::ordered_json one;
        const int rc = run_one_sweep(g, model.ptr, arch, gf, store_all, count_only,
                                     frame_base, prefix, formats, json_points, slices_dir,
                                     &one);
        if (rc != 0) return rc;
        if (g.json) results.push_back(std::move(one));
    }
    if (g.json) std::cout << results.dump(2) << "\n";
    return 0;
}

// ---------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------

void print_compare(const GlobalOpts& g, const athena_compare_report& rep) {
    if (g.json) {
        nlohmann::ordered_json doc;
        doc["arch_a"] = athena_arch_name(rep.arch_a);
        doc["arch_b"] = athena_arch_name(rep.arch_b);
        doc["total_candidates"] = rep.total_candidates;
        doc["valid_a"] = rep.valid_a;
        doc["valid_b"] = rep.valid_b;
        doc["pct_difference"] = rep.pct_difference;
        doc["volume_a_mm3"] = rep.volume_a_mm3;
        doc["volume_b_mm3"] = rep.volume_b_mm3;
        nlohmann::ordered_json ha, hb;
        for (int i = 0; i < ATHENA_REASON_COUNT; ++i) {
            ha[athena_reason_name(i)] = rep.hist_a[i];
            hb[athena_reason_name(i)] = rep.hist_b[i];
        }
        doc["histogram_a"] = std::move(ha);
        doc["histogram_b"] = std::move(hb);
        std::cout << doc.dump(2) << "\n";
        return;
    }
    std::printf("total candidates : %llu\n", rep.total_candidates);
    std::printf("%-10s valid=%llu volume=%.3e mm^3\n", athena_arch_name(rep.arch_a),
                rep.valid_a, rep.volume_a_mm3);
    std::printf("%-10s valid=%llu volume=%.3e mm^3\n", athena_arch_name(rep.arch_b),
                rep.valid_b, rep.volume_b_mm3);
    std::printf("difference (b vs a): %+.4f%%\n", rep.pct_difference);
    std::printf("%-20s %12s %12s\n", "reason", athena_arch_name(rep.arch_a),
                athena_arch_name(rep.arch_b));
    for (int i = 0; i < ATHENA_REASON_COUNT; ++i)
        std::printf("%-20s %12llu %12llu\n", athena_reason_name(i), rep.hist_a[i],
                    rep.hist_b[i]);
}

int cmd_compare(const GlobalOpts& g, const std::vector<std::string>& files, bool both,
                const GridFlags& gf) {
    athena_compare_report rep{};
    if (both) {
        ModelHandle model;
        make_model(g, model);
        gf.record_manifest();
        const athena_grid grid = gf.grid();
        athena_sweep_options opt{};
        opt.counts_only = 1;
        opt.workers = g.workers;
        WorkspaceHandle a, b;
        check(athena_sweep(model.ptr, ATHENA_ARCH_1, &grid, &opt, &a.ptr));
        check(athena_sweep(model.ptr, ATHENA_ARCH_2, &grid, &opt, &b.ptr));
        check(athena_workspace_compare(a.ptr, b.ptr, &rep));
    } else {
        if (files.size() != 2) {
            std::cerr << "error: compare needs two sweep JSON files or --both\n";
            return 1;
        }
        g_manifest.config_path = "n/a";
        manifest_flag("inputs", {files[0], files[1]});
        WorkspaceHandle a, b;
        check(athena_workspace_load_json(files[0].c_str(), &a.ptr));
        check(athena_workspace_load_json(files[1].c_str(), &b.ptr));
        check(athena_workspace_compare(a.ptr, b.ptr, &rep));
    }
    print_compare(g, rep);
    return 0;
}

// ---------------------------------------------------------------------
// singularity
// ---------------------------------------------------------------------

int cmd_singularity(const GlobalOpts& g, const std::string& in_json, const GridFlags& gf,
                    double threshold, unsigned long long stride,
                    const std::string& out_json) {
    ModelHandle model;
    make_model(g, model);

    WorkspaceHandle ws;
    const int arch = arch_id(g.arch);
    if (!in_json.empty()) {
        check(athena_workspace_load_json(in_json.c_str(), &ws.ptr));
        manifest_flag("input", in_json);
    } else {
        gf.record_manifest();
        const athena_grid grid = gf.grid();
        athena_sweep_options opt{};
        opt.workers = g.workers;
        check(athena_sweep(model.ptr, arch, &grid, &opt, &ws.ptr));
    }
    manifest_flag("threshold", threshold);
    manifest_flag("stride", stride);

    athena_scan_report rep{};
    check(athena_singularity_scan(model.ptr, ws.ptr, threshold, stride, &rep));
    if (!out_json.empty()) {
        check(athena_scan_report_write_json(&rep, out_json.c_str()));
        std::fprintf(stderr, "wrote %s\n", out_json.c_str());
    }

    if (g.json) {
        nlohmann::ordered_json doc;
        doc["arch"] = athena_arch_name(rep.arch);
        doc["threshold"] = rep.threshold;
        doc["evaluated_count"] = rep.evaluated_count;
        doc["flagged_count"] = rep.flagged_count;
        doc["min_abs_det_q"] = rep.min_abs_det_q;
        doc["argmin_point"] = {rep.argmin_point.x_mm, rep.argmin_point.y_mm,
                               rep.argmin_point.z_mm};
        std::cout << doc.dump(2) << "\n";
    } else {
        std::printf("arch=%s evaluated=%llu flagged=%llu (threshold %.1e)\n",
                    athena_arch_name(rep.arch), rep.evaluated_count, rep.flagged_count,
                    rep.threshold);
        std::printf("min normalized |det Jq| = %.6e at (%.1f, %.1f, %.1f) mm\n",
                    rep.min_abs_det_q, rep.argmin_point.x_mm, rep.argmin_point.y_mm,
                    rep.argmin_point.z_mm);
    }
    return 0;
}

// ---------------------------------------------------------------------
// stiffness
// ---------------------------------------------------------------------

int cmd_stiffness(const GlobalOpts& g, const std::vector<double>& from_deflection,
                  bool estimate, double psi_deg, double theta_deg, double lins_mm) {
    if (!from_deflection.empty()) {
        if (from_deflection.size() != 2) {
            std::cerr << "error: --from-deflection needs FORCE_N DEFLECTION_MM\n";
            return 1;
        }
        double k = 0.0;
        const athena_status s =
            athena_stiffness_from_deflection(from_deflection[0], from_deflection[1], &k);
        if (s != ATHENA_OK) die(s);
        manifest_flag("from_deflection", {from_deflection[0], from_deflection[1]});
        if (g.json) {
            nlohmann::ordered_json doc;
            doc["force_n"] = from_deflection[0];
            doc["deflection_mm"] = from_deflection[1];
            doc["stiffness_n_per_mm"] = k;
            std::cout << doc.dump(2) << "\n";
        } else {
            std::printf("%.6f\n", k);
        }
        return 0;
    }

    ModelHandle model;
    make_model(g, model);

    std::vector<athena_stiffness_estimate> ests;
    std::vector<std::string> labels;
    double ratio = 0.0;
    bool have_ratio = false;
    if (estimate) {
        const athena_pose pose{deg2rad(psi_deg), deg2rad(theta_deg), 0.0, lins_mm};
        double k_axis[2] = {0.0, 0.0};
        for (int idx = 0; idx < 2; ++idx) {
            const int arch = idx == 0 ? ATHENA_ARCH_1 : ATHENA_ARCH_2;
            athena_joints q{};
            athena_status s = athena_ik(model.ptr, arch, &pose, 0, &q, nullptr);
            if (s != ATHENA_OK) die(s);
            double kmat[9];
            s = athena_lumped_tip_stiffness(model.ptr, arch, &pose, &q, nullptr, kmat,
                                            &k_axis[idx]);
            if (s != ATHENA_OK) die(s);
            labels.push_back(std::string(athena_arch_name(arch)) + " (lumped)");
        }
        for (int idx = 0; idx < 2; ++idx)
            ests.push_back(athena_stiffness_estimate{labels[idx].c_str(),
                                                     idx == 0 ? ATHENA_ARCH_1 : ATHENA_ARCH_2,
                                                     k_axis[idx]});
        if (k_axis[1] > 0.0) {
            ratio = k_axis[0] / k_axis[1];
            have_ratio = true;
        }
        manifest_flag("estimate_pose_deg", {psi_deg, theta_deg, 0.0, lins_mm});
    }

    size_t needed = 0;
    athena_stiffness_report(ests.data(), ests.size(), g.json ? 1 : 0, nullptr, 0, &needed);
    std::string buf(needed + 1, '\0');
    check(athena_stiffness_report(ests.data(), ests.size(), g.json ? 1 : 0, buf.data(),
                                  buf.size(), &needed));
    buf.resize(needed);
    std::cout << buf;
    if (have_ratio && !g.json)
        std::printf("lumped axis-stiffness ratio athena1/athena2 = %.3f\n", ratio);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"athena-kin: kinematics and workspace analysis for the ATHENA-1/ATHENA-2 "
                 "parallel architectures"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string("athena-kin ") + athena_version());

    GlobalOpts g;
    app.add_option("--config", g.config_path,
                   "configuration file (fallback: ATHENA_KIN_CONFIG, then built-in)");
    app.add_flag("--lenient", g.lenient, "ignore unknown configuration keys");
    app.add_option("--arch", g.arch, "architecture: athena1|athena2")
        ->check(CLI::IsMember({"athena1", "athena2"}))
        ->capture_default_str();
    app.add_option("--variant", g.variant, "rail formula variant: literal|symmetrized")
        ->check(CLI::IsMember({"literal", "symmetrized"}));
    app.add_option("--branch", g.branch, "transverse branch sign: +|-")
        ->check(CLI::IsMember({"+", "-"}));
    app.add_option("--q3-root", g.q3_root, "crank root choice: min|alt")
        ->check(CLI::IsMember({"min", "alt"}));
    app.add_option("--workers", g.workers, "worker threads (0 = hardware)");
    app.add_flag("--json", g.json, "machine-readable output");
    app.add_option("--manifest", g.manifest_path, "write a run manifest JSON to this path");

    // ik
    double psi = 0.0, theta = 90.0, phi = 0.0, lins = 100.0;
    bool no_limit_check = false, verify = false;
    auto* ik = app.add_subcommand("ik", "closed-form inverse kinematics");
    ik->add_option("--psi", psi, "azimuth [deg]")->capture_default_str();
    ik->add_option("--theta", theta, "polar angle [deg]")->capture_default_str();
    ik->add_option("--phi", phi, "tip roll [deg]")->capture_default_str();
    ik->add_option("--lins", lins, "insertion [mm]")->capture_default_str();
    ik->add_flag("--no-limit-check", no_limit_check, "suppress joint-limit warnings");
    ik->add_flag("--verify", verify, "print loop-closure residuals");

    // fk
    double q1 = 0.0, q2 = 0.0, q3 = 0.0, q4 = 0.0;
    auto* fk = app.add_subcommand("fk", "Newton forward kinematics");
    fk->add_option("--q1", q1, "q1 [mm]")->required();
    fk->add_option("--q2", q2, "q2 [mm]")->required();
    fk->add_option("--q3", q3, "q3 [mm for athena1, deg for athena2]")->required();
    fk->add_option("--q4", q4, "q4 [deg]")->capture_default_str();

    // workspace
    GridFlags gf;
    std::string ws_arch = "athena1", frame = "rcm", out_prefix, format_list = "csv",
                slices_dir;
    bool store_all = false, count_only = false, json_points = false;
    auto* ws = app.add_subcommand("workspace", "grid sweep and export");
    gf.add_options(ws);
    ws->add_option("--arch", ws_arch, "athena1|athena2|both")
        ->check(CLI::IsMember({"athena1", "athena2", "both"}))
        ->capture_default_str();
    ws->add_option("--frame", frame, "grid frame: rcm|base")
        ->check(CLI::IsMember({"rcm", "base"}))
        ->capture_default_str();
    ws->add_option("--out", out_prefix, "output path prefix");
    ws->add_option("--format", format_list, "comma list of csv,ply,json (empty: none)")
        ->capture_default_str();
    ws->add_flag("--store-all", store_all, "store failing records too");
    ws->add_flag("--count-only", count_only, "enumerate candidates without classifying");
    ws->add_flag("--json-points", json_points, "include points in JSON exports");
    ws->add_option("--plot-slices", slices_dir, "emit per-z-slice CSV files into DIR");

    // compare
    GridFlags gf_cmp;
    std::vector<std::string> cmp_files;
    bool cmp_both = false;
    auto* cmp = app.add_subcommand("compare", "compare two workspace results");
    cmp->add_option("files", cmp_files, "two sweep JSON exports");
    cmp->add_flag("--both", cmp_both, "sweep both architectures now");
    gf_cmp.add_options(cmp);

    // singularity
    GridFlags gf_sing;
    std::string sing_in, sing_out;
    double threshold = 1e-8;
    unsigned long long stride = 1;
    auto* sing = app.add_subcommand("singularity", "Jacobian singularity-proximity scan");
    sing->add_option("--in", sing_in, "sweep JSON export with stored points");
    gf_sing.add_options(sing);
    sing->add_option("--threshold", threshold, "normalized |det Jq| flag threshold")
        ->capture_default_str();
    sing->add_option("--stride", stride, "evaluate every stride-th valid point")
        ->capture_default_str();
    sing->add_option("--out", sing_out, "write the scan report JSON to this path");

    // stiffness
    std::vector<double> from_deflection;
    bool estimate = false;
    double st_psi = 0.0, st_theta = 135.0, st_lins = 125.0;
    auto* st = app.add_subcommand("stiffness", "deflection stiffness and comparison report");
    st->add_option("--from-deflection", from_deflection,
                   "FORCE_N DEFLECTION_MM: print K = F/delta and exit")
        ->expected(2);
    st->add_flag("--estimate", estimate, "append lumped-model estimates for both archs");
    st->add_option("--psi", st_psi, "estimate pose azimuth [deg]")->capture_default_str();
    st->add_option("--theta", st_theta, "estimate pose polar angle [deg]")
        ->capture_default_str();
    st->add_option("--lins", st_lins, "estimate pose insertion [mm]")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    int rc = 0;
    if (ik->parsed()) {
        g_manifest.subcommand = "ik";
        rc = cmd_ik(g, psi, theta, phi, lins, no_limit_check, verify);
    } else if (fk->parsed()) {
        g_manifest.subcommand = "fk";
        rc = cmd_fk(g, q1, q2, q3, q4);
    } else if (ws->parsed()) {
        g_manifest.subcommand = "workspace";
        rc = cmd_workspace(g, ws_arch, gf, store_all, count_only, frame, out_prefix,
                           format_list, json_points, slices_dir);
    } else if (cmp->parsed()) {
        g_manifest.subcommand = "compare";
        rc = cmd_compare(g, cmp_files, cmp_both, gf_cmp);
    } else if (sing->parsed()) {
        g_manifest.subcommand = "singularity";
        rc = cmd_singularity(g, sing_in, gf_sing, threshold, stride, sing_out);
    } else if (st->parsed()) {
        g_manifest.subcommand = "stiffness";
        rc = cmd_stiffness(g, from_deflection, estimate, st_psi, st_theta, st_lins);
    }
    write_manifest(g);
    return rc;
}
