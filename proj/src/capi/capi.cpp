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

#include "athena/athena_kin.h"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <exception>
#include <string>
#include <vector>

#include "config.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "jacobian.hpp"
#include "kinematics.hpp"
#include "rcm.hpp"
#include "stiffness.hpp"
#include "types.hpp"
#include "version.hpp"
#include "workspace.hpp"

struct athena_model_s {
    athena::Model m;
};

struct athena_workspace_s {
    athena::WorkspaceResult r;
};

namespace {

thread_local std::string t_last_error = "ok";

athena_status fail(athena_status s, std::string msg) {
    t_last_error = std::move(msg);
    return s;
}

athena_status ok() {
    t_last_error = "ok";
    return ATHENA_OK;
}

athena_status from_kin_status(athena::KinStatus s, const std::string& detail) {
    using athena::KinStatus;
    switch (s) {
        case KinStatus::Ok: return ok();
        case KinStatus::Unreachable: return fail(ATHENA_ERR_UNREACHABLE, detail);
        case KinStatus::NoRootInRange: return fail(ATHENA_ERR_NO_ROOT_IN_RANGE, detail);
        case KinStatus::JointLimit: return fail(ATHENA_ERR_JOINT_LIMIT, detail);
        case KinStatus::DegenerateTip: return fail(ATHENA_ERR_DEGENERATE_TIP, detail);
        case KinStatus::InsertionRange: return fail(ATHENA_ERR_INSERTION_RANGE, detail);
        case KinStatus::DomainError: return fail(ATHENA_ERR_DOMAIN, detail);
        case KinStatus::NoConvergence: return fail(ATHENA_ERR_NO_CONVERGENCE, detail);
        case KinStatus::SingularJacobian: return fail(ATHENA_ERR_SINGULAR_JACOBIAN, detail);
    }
    return fail(ATHENA_ERR_INVALID_ARGUMENT, detail);
}

bool to_arch(int arch, athena::Arch& out) {
    if (arch == ATHENA_ARCH_1) {
        out = athena::Arch::Athena1;
        return true;
    }
    if (arch == ATHENA_ARCH_2) {
        out = athena::Arch::Athena2;
        return true;
    }
    return false;
}

athena::TaskPose to_pose(const athena_pose& p) {
    return athena::TaskPose{p.psi_rad, p.theta_rad, p.phi_rad, p.l_ins_mm};
}

athena_pose from_pose(const athena::TaskPose& p) {
    return athena_pose{p.psi, p.theta, p.phi, p.l_ins};
}

athena::JointVector to_joints(const athena_joints& j, athena::Arch arch) {
    return athena::JointVector{j.q1_mm, j.q2_mm, j.q3, j.q4_rad, arch};
}

athena_joints from_joints(const athena::JointVector& j) {
    return athena_joints{j.q1, j.q2, j.q3, j.q4};
}

athena::GridSpec to_grid(const athena_grid& g) {
    return athena::GridSpec{g.x_min_mm, g.x_max_mm, g.y_min_mm,
                            g.y_max_mm, g.z_min_mm, g.z_max_mm, g.step_mm};
}

athena_grid from_grid(const athena::GridSpec& g) {
    return athena_grid{g.x_min, g.x_max, g.y_min, g.y_max, g.z_min, g.z_max, g.step};
}

athena_record from_record(const athena::ValidityRecord& rec) {
    athena_record out{};
    out.tip = athena_tip{rec.tip.x, rec.tip.y, rec.tip.z};
    out.arch = static_cast<int>(rec.arch);
    out.reason = static_cast<int>(rec.reason);
    out.valid = rec.valid() ? 1 : 0;
    out.joints = rec.valid() ? from_joints(rec.joints) : athena_joints{0.0, 0.0, 0.0, 0.0};
    return out;
}

athena_status grid_valid(const athena_grid* g) {
    if (!g) return fail(ATHENA_ERR_INVALID_ARGUMENT, "grid is NULL");
    if (!(g->step_mm > 0.0))
        return fail(ATHENA_ERR_INVALID_ARGUMENT, "grid step must be positive");
    if (g->x_max_mm < g->x_min_mm || g->y_max_mm < g->y_min_mm || g->z_max_mm < g->z_min_mm)
        return fail(ATHENA_ERR_INVALID_ARGUMENT, "grid ranges must be nonempty");
    return ATHENA_OK;
}

athena_status config_error(const athena::ConfigError& e) {
    return fail(e.kind() == athena::ConfigError::Kind::Parse ? ATHENA_ERR_PARSE
                                                             : ATHENA_ERR_VALIDATION,
                e.what());
}

athena_status write_string(const std::string& text, char* buf, size_t cap, size_t* needed) {
    if (needed) *needed = text.size();
    if (!buf) return ok();
    if (cap < text.size() + 1)
        return fail(ATHENA_ERR_BUFFER_TOO_SMALL, "output buffer too small");
    std::memcpy(buf, text.data(), text.size());
    buf[text.size()] = '\0';
    return ok();
}

std::string limit_mask_text(unsigned mask) {
    std::string joints;
    const char* names[] = {"q1", "q2", "q3", "q4"};
    for (int i = 0; i < 4; ++i) {
        if (mask & (1u << i)) {
            if (!joints.empty()) joints += ", ";
            joints += names[i];
        }
    }
    return joints;
}

}  // namespace

extern "C" {

const char* athena_version(void) { return athena::kVersion; }

const char* athena_status_name(athena_status status) {
    switch (status) {
        case ATHENA_OK: return "ok";
        case ATHENA_ERR_INVALID_ARGUMENT: return "invalid-argument";
        case ATHENA_ERR_PARSE: return "parse-error";
        case ATHENA_ERR_VALIDATION: return "validation-error";
        case ATHENA_ERR_UNREACHABLE: return "unreachable";
        case ATHENA_ERR_NO_ROOT_IN_RANGE: return "no-root-in-range";
        case ATHENA_ERR_JOINT_LIMIT: return "joint-limit-violation";
        case ATHENA_ERR_DEGENERATE_TIP: return "degenerate-tip";
        case ATHENA_ERR_INSERTION_RANGE: return "insertion-out-of-range";
        case ATHENA_ERR_DOMAIN: return "domain-error";
        case ATHENA_ERR_NO_CONVERGENCE: return "no-convergence";
        case ATHENA_ERR_SINGULAR_JACOBIAN: return "singular-jacobian";
        case ATHENA_ERR_GRID_MISMATCH: return "grid-mismatch";
        case ATHENA_ERR_UNSUPPORTED_FORMAT: return "unsupported-format";
        case ATHENA_ERR_IO: return "io-error";
        case ATHENA_ERR_BUFFER_TOO_SMALL: return "buffer-too-small";
    }
    return "unknown";
}

const char* athena_reason_name(int reason) {
    if (reason < 0 || reason >= ATHENA_REASON_COUNT) return "UNKNOWN";
    return athena::reason_name(static_cast<athena::Reason>(reason));
}

const char* athena_arch_name(int arch) {
    return arch == ATHENA_ARCH_2 ? "athena2" : "athena1";
}

const char* athena_last_error(void) { return t_last_error.c_str(); }

/* ------------------------------------------------------------------ */

athena_status athena_model_create_default(athena_model** out) {
    if (!out) return fail(ATHENA_ERR_INVALID_ARGUMENT, "out is NULL");
    try {
        *out = new athena_model_s{athena::default_model()};
        return ok();
    } catch (const athena::ConfigError& e) {
        return config_error(e);
    } catch (const std::exception& e) {
        return fail(ATHENA_ERR_INVALID_ARGUMENT, e.what());
    }
}

athena_status athena_model_create_from_file(const char* path, int lenient,
                                            athena_model** out) {
    if (!out || !path) return fail(ATHENA_ERR_INVALID_ARGUMENT, "path/out is NULL");
    try {
        *out = new athena_model_s{athena::load_config_file(path, lenient != 0)};
        return ok();
    } catch (const athena::ConfigError& e) {
        return config_error(e);
    } catch (const athena::IoError& e) {
        return fail(ATHENA_ERR_IO, e.what());
    } catch (const std::exception& e) {
        return fail(ATHENA_ERR_INVALID_ARGUMENT, e.what());
    }
}

athena_status athena_model_create_from_json(const char* text, int lenient,
                                            athena_model** out) {
    if (!out || !text) return fail(ATHENA_ERR_INVALID_ARGUMENT, "text/out is NULL");
    try {
        *out = new athena_model_s{athena::load_config_text(text, lenient != 0)};
        return ok();
    } catch (const athena::ConfigError& e) {
        return config_error(e);
    } catch (const std::exception& e) {
        return fail(ATHENA_ERR_INVALID_ARGUMENT, e.what());
    }
}

void athena_model_destroy(athena_model* model) { delete model; }

athena_status athena_model_serialize(const athena_model* model, char* buf, size_t cap,
                                     size_t* needed) {
    if (!model) return fail(ATHENA_ERR_INVALID_ARGUMENT, "model is NULL");
    return write_string(athena::serialize_config(model->m), buf, cap, needed);
}

athena_status athena_model_content_hash(const athena_model* model, char* buf, size_t cap) {
    if (!model || !buf) return fail(ATHENA_ERR_INVALID_ARGUMENT, "model/buf is NULL");
    const std::string hash =
        "fnv1a64:" + athena::fnv1a64_hex(athena::serialize_config(model->m));
    if (cap < hash.size() + 1)
        return fail(ATHENA_ERR_BUFFER_TOO_SMALL, "hash buffer too small");
    std::memcpy(buf, hash.c_str(), hash.size() + 1);
    return ok();
}

athena_status athena_model_get_param(const athena_model* model, const char* key,
                                     double* out) {
    if (!model || !key || !out) return fail(ATHENA_ERR_INVALID_ARGUMENT, "NULL argument");
    const athena::Model& m = model->m;
    const std::string k = key;
    if (k == "l1") *out = m.geom.l1;
    else if (k == "l2") *out = m.geom.l2;
    else if (k == "l3") *out = m.geom.l3;
    else if (k == "l4") *out = m.geom.l4;
    else if (k == "l5") *out = m.geom.l5;
    else if (k == "l2min") *out = m.geom.l2min;
    else if (k == "l2max") *out = m.geom.l2max;
    else if (k == "l_tool") *out = m.geom.l_tool;
    else if (k == "l01") *out = m.geom.l01;
    else if (k == "l02") *out = m.geom.l02;
    else if (k == "l03") *out = m.geom.l03;
    else if (k == "l0") *out = m.geom.l0;
    else if (k == "lins_max_mm") *out = m.limits.lins_max;
    else if (k == "q3a2_min_deg") *out = m.limits.q3a2_min_deg;
    else if (k == "q3a2_max_deg") *out = m.limits.q3a2_max_deg;
    else if (k == "q4_min_deg") *out = m.limits.q4_min_deg;
    else if (k == "q4_max_deg") *out = m.limits.q4_max_deg;
    else if (k == "q1_n_per_mm") *out = m.stiffness.q1;
    else if (k == "q2_n_per_mm") *out = m.stiffness.q2;
    else if (k == "q3_athena1_n_per_mm") *out = m.stiffness.q3_athena1;
    else if (k == "q3_athena2_nmm_per_rad") *out = m.stiffness.q3_athena2;
    else if (k == "q4_nmm_per_rad") *out = m.stiffness.q4;
    else return fail(ATHENA_ERR_INVALID_ARGUMENT, std::string("unknown parameter: ") + key);
    return ok();
}

athena_status athena_model_set_option(athena_model* model, const char* key,
                                      const char* value) {
    if (!model || !key || !value) return fail(ATHENA_ERR_INVALID_ARGUMENT, "NULL argument");
    const std::string k = key, v = value;
    athena::ModelOptions& opt = model->m.options;
    if (k == "variant") {
        if (v == "literal") opt.variant = athena::Variant::Literal;
        else if (v == "symmetrized") opt.variant = athena::Variant::Symmetrized;
        else return fail(ATHENA_ERR_INVALID_ARGUMENT, "variant: literal|symmetrized");
    } else if (k == "branch") {
        if (v == "+") opt.branch = athena::BranchSign::Plus;
        else if (v == "-") opt.branch = athena::BranchSign::Minus;
        else return fail(ATHENA_ERR_INVALID_ARGUMENT, "branch: +|-");
    } else if (k == "q3_root") {
        if (v == "min") opt.q3_root = athena::Q3RootChoice::MinAbs;
        else if (v == "alt") opt.q3_root = athena::Q3RootChoice::Alternate;
        else return fail(ATHENA_ERR_INVALID_ARGUMENT, "q3_root: min|alt");
    } else if (k == "a2_x_sign") {
        if (v == "+") opt.a2_x_sign = athena::A2XSign::Plus;
        else if (v == "-") opt.a2_x_sign = athena::A2XSign::Minus;
        else return fail(ATHENA_ERR_INVALID_ARGUMENT, "a2_x_sign: +|-");
    } else if (k == "verify_q3") {
        if (v == "on") opt.verify_q3_numeric = true;
        else if (v == "off") opt.verify_q3_numeric = false;
        else return fail(ATHENA_ERR_INVALID_ARGUMENT, "verify_q3: on|off");
    } else {
        return fail(ATHENA_ERR_INVALID_ARGUMENT, std::string("unknown option: ") + key);
    }
    return ok();
}

athena_status athena_model_get_option(const athena_model* model, const char* key, char* buf,
                                      size_t cap) {
    if (!model || !key || !buf) return fail(ATHENA_ERR_INVALID_ARGUMENT, "NULL argument");
    const std::string k = key;
    const athena::ModelOptions& opt = model->m.options;
    std::string v;
    if (k == "variant")
        v = opt.variant == athena::Variant::Literal ? "literal" : "symmetrized";
    else if (k == "branch")
        v = opt.branch == athena::BranchSign::Plus ? "+" : "-";
    else if (k == "q3_root")
        v = opt.q3_root == athena::Q3RootChoice::MinAbs ? "min" : "alt";
    else if (k == "a2_x_sign")
        v = opt.a2_x_sign == athena::A2XSign::Plus ? "+" : "-";
    else if (k == "verify_q3")
        v = opt.verify_q3_numeric ? "on" : "off";
    else
        return fail(ATHENA_ERR_INVALID_ARGUMENT, std::string("unknown option: ") + key);
    if (cap < v.size() + 1) return fail(ATHENA_ERR_BUFFER_TOO_SMALL, "buffer too small");
    std::memcpy(buf, v.c_str(), v.size() + 1);
    return ok();
}

/* ------------------------------------------------------------------ */

athena_status athena_pose_to_tip(const athena_model* model, const athena_pose* pose,
                                 athena_tip* out) {
    if (!model || !pose || !out) return fail(ATHENA_ERR_INVALID_ARGUMENT, "NULL argument");
    const athena::TipPoint t = athena::pose_to_tip(to_pose(*pose), model->m.geom);
    *out = athena_tip{t.x, t.y, t.z};
    return ok();
}

athena_status athena_tip_to_pose(const athena_model* model, const athena_tip* tip,
                                 double phi_rad, athena_pose* out,
                                 int* azimuth_degenerate) {
    if (!model || !tip || !out) return fail(ATHENA_ERR_INVALID_ARGUMENT, "NULL argument");
    const athena::TipToPose r = athena::tip_to_pose(
        athena::TipPoint{tip->x_mm, tip->y_mm, tip->z_mm}, phi_rad, model->m.geom,
        model->m.limits);
    if (r.status != athena::KinStatus::Ok)
        return from_kin_status(r.status, r.status == athena::KinStatus::DegenerateTip
                                             ? "tip coincides with the RCM"
                                             : "implied insertion outside [0, lins_max)");
    *out = from_pose(r.pose);
    if (azimuth_degenerate) *azimuth_degenerate = r.azimuth_degenerate ? 1 : 0;
    return ok();
}

athena_status athena_ik(const athena_model* model, int arch, const athena_pose* pose,
                        int check_limits, athena_joints* out, unsigned* limit_mask) {
    if (!model || !pose || !out) return fail(ATHENA_ERR_INVALID_ARGUMENT, "NULL argument");
    athena::Arch a;
    if (!to_arch(arch, a)) return fail(ATHENA_ERR_INVALID_ARGUMENT, "bad arch selector");

    const athena::IkResult r = athena::inverse_kinematics(a, to_pose(*pose), model->m);
    if (limit_mask) *limit_mask = r.limit_violations;
    if (r.status == athena::KinStatus::Unreachable)
        return from_kin_status(r.status, std::string("unreachable pose: ") +
                                             athena::domain_term_name(r.term));
    *out = from_joints(r.q);
    if (r.status == athena::KinStatus::NoRootInRange)
        return from_kin_status(r.status, "crank roots exist but lie outside the travel range");
    if (r.status != athena::KinStatus::Ok)
        return from_kin_status(r.status, "inverse kinematics failed");
    if (check_limits && r.limit_violations)
        return fail(ATHENA_ERR_JOINT_LIMIT,
                    "joint limits violated: " + limit_mask_text(r.limit_violations));
    return ok();
}

athena_status athena_residuals(const athena_model* model, int arch,
                               const athena_joints* joints, const athena_pose* pose,
                               double f[4], double scale[4]) {
    if (!model || !joints || !pose || !f)
        return fail(ATHENA_ERR_INVALID_ARGUMENT, "NULL argument");
    athena::Arch a;
    if (!to_arch(arch, a)) return fail(ATHENA_ERR_INVALID_ARGUMENT, "bad arch selector");
    const athena::ResidualEval e =
        athena::residuals(a, to_joints(*joints, a), to_pose(*pose), model->m);
    if (!e.ok)
        return fail(ATHENA_ERR_DOMAIN, std::string("term left the real domain: ") +
                                           athena::domain_term_name(e.term));
    for (int i = 0; i < 4; ++i) {
        f[i] = e.r.f[i];
        if (scale) scale[i] = e.r.scale[i];
    }
    return ok();
}

athena_status athena_fk(const athena_model* model, int arch, const athena_joints* joints,
                        const athena_pose* seed, athena_pose* out, int* iterations,
                        double* final_scaled_residual) {
    if (!model || !joints || !out) return fail(ATHENA_ERR_INVALID_ARGUMENT, "NULL argument");
    athena::Arch a;
    if (!to_arch(arch, a)) return fail(ATHENA_ERR_INVALID_ARGUMENT, "bad arch selector");
    athena::TaskPose seed_pose;
    const athena::TaskPose* seed_ptr = nullptr;
    if (seed) {
        seed_pose = to_pose(*seed);
        seed_ptr = &seed_pose;
    }
    const athena::FkResult r =
        athena::forward_kinematics(a, to_joints(*joints, a), model->m, seed_ptr);
    if (iterations) *iterations = r.iterations;
    if (final_scaled_residual) *final_scaled_residual = r.final_scaled_residual;
    if (r.status != athena::KinStatus::Ok) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "forward kinematics: %s after %d iterations (scaled residual %.3e)",
                      r.status == athena::KinStatus::SingularJacobian ? "singular Jacobian"
                                                                      : "no convergence",
                      r.iterations, r.final_scaled_residual);
        return from_kin_status(r.status, msg);
    }
    *out = from_pose(r.pose);
    return ok();
}

/* ------------------------------------------------------------------ */

athena_status athena_jacobians(const athena_model* model, int arch, const athena_pose* pose,
                               const athena_joints* joints, double jq[16], double jx[16]) {
    if (!model || !pose || !joints || !jq || !jx)
        return fail(ATHENA_ERR_INVALID_ARGUMENT, "NULL argument");
    athena::Arch a;
    if (!to_arch(arch, a)) return fail(ATHENA_ERR_INVALID_ARGUMENT, "bad arch selector");
    const athena::JacobianEval e =
        athena::numeric_jacobians(a, to_pose(*pose), to_joints(*joints, a), model->m);
    if (!e.ok)
        return fail(ATHENA_ERR_DOMAIN, std::string("finite-difference probe left the real "
                                                   "domain: ") +
                                           athena::domain_term_name(e.term));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            jq[i * 4 + j] = e.jp.jq(i, j);
            jx[i * 4 + j] = e.jp.jx(i, j);
        }
    return ok();
}

athena_status athena_singularity_metrics(const double jq[16], const double jx[16],
                                         athena_metrics* out) {
    if (!jq || !jx || !out) return fail(ATHENA_ERR_INVALID_ARGUMENT, "NULL argument");
    athena::JacobianPair jp;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            jp.jq(i, j) = jq[i * 4 + j];
            jp.jx(i, j) = jx[i * 4 + j];
        }
    const athena::SingularityMetrics s = athena::singularity_metrics(jp);
    out->abs_det_jq = s.abs_det_jq;
    out->abs_det_jx = s.abs_det_jx;
    out->cond_jq = s.cond_jq;
    out->cond_jx = s.cond_jx;
    out->manipulability = s.manipulability;
    out->normalized_abs_det_jq = s.normalized_abs_det_jq;
    return ok();
}

/* ------------------------------------------------------------------ */

void athena_grid_default(athena_grid* out) {
    if (out) *out = from_grid(athena::default_grid());
}

athena_status athena_grid_candidate_count(const athena_grid* grid, unsigned long long* out) {
    const athena_status s = grid_valid(grid);
    if (s != ATHENA_OK) return s;
    if (!out) return fail(ATHENA_ERR_INVALID_ARGUMENT, "out is NULL");
    *out = athena::candidate_count(to_grid(*grid));
    return ok();
}

athena_status athena_grid_enumerate(const athena_grid* grid, athena_grid_visit_fn visit,
                                    void* user) {
    const athena_status s = grid_valid(grid);
    if (s != ATHENA_OK) return s;
    if (!visit) return fail(ATHENA_ERR_INVALID_ARGUMENT, "visit is NULL");
    athena::enumerate_grid(to_grid(*grid), [&](double x, double y, double z) {
        return visit(user, x, y, z) != 0;
    });
    return ok();
}

athena_status athena_classify(const athena_model* model, int arch, const athena_tip* tip,
                              int frame_base, athena_record* out) {
    if (!model || !tip || !out) return fail(ATHENA_ERR_INVALID_ARGUMENT, "NULL argument");
    athena::Arch a;
    if (!to_arch(arch, a)) return fail(ATHENA_ERR_INVALID_ARGUMENT, "bad arch selector");
    const athena::ValidityRecord rec = athena::classify_point(
        athena::TipPoint{tip->x_mm, tip->y_mm, tip->z_mm}, a, model->m, frame_base != 0);
    *out = from_record(rec);
    return ok();
}

athena_status athena_sweep(const athena_model* model, int arch, const athena_grid* grid,
                           const athena_sweep_options* options, athena_workspace** out) {
    if (!model || !out) return fail(ATHENA_ERR_INVALID_ARGUMENT, "NULL argument");
    athena::Arch a;
    if (!to_arch(arch, a)) return fail(ATHENA_ERR_INVALID_ARGUMENT, "bad arch selector");
    const athena_status s = grid_valid(grid);
    if (s != ATHENA_OK) return s;

    athena::SweepOptions opt;
    if (options) {
        opt.store_all = options->store_all != 0;
        opt.counts_only = options->counts_only != 0;
        opt.workers = options->workers;
        opt.frame_base = options->frame_base != 0;
    }
    try {
        *out = new athena_workspace_s{athena::sweep(a, to_grid(*grid), model->m, opt)};
        return ok();
    } catch (const std::bad_alloc&) {
        return fail(ATHENA_ERR_IO, "out of memory during sweep");
    } catch (const std::exception& e) {
        return fail(ATHENA_ERR_INVALID_ARGUMENT, e.what());
    }
}

void athena_workspace_destroy(athena_workspace* ws) { delete ws; }

athena_status athena_workspace_counts(const athena_workspace* ws, unsigned long long* total,
                                      unsigned long long* valid) {
    if (!ws) return fail(ATHENA_ERR_INVALID_ARGUMENT, "workspace is NULL");
    if (total) *total = ws->r.total_candidates;
    if (valid) *valid = ws->r.valid_count;
    return ok();
}

athena_status athena_workspace_histogram(const athena_workspace* ws,
                                         unsigned long long hist[ATHENA_REASON_COUNT]) {
    if (!ws || !hist) return fail(ATHENA_ERR_INVALID_ARGUMENT, "NULL argument");
    for (int i = 0; i < ATHENA_REASON_COUNT; ++i) hist[i] = ws->r.histogram[i];
    return ok();
}

athena_status athena_workspace_grid(const athena_workspace* ws, athena_grid* out) {
    if (!ws || !out) return fail(ATHENA_ERR_INVALID_ARGUMENT, "NULL argument");
    *out = from_grid(ws->r.grid);
    return ok();
}

athena_status athena_workspace_arch(const athena_workspace* ws, int* out) {
    if (!ws || !out) return fail(ATHENA_ERR_INVALID_ARGUMENT, "NULL argument");
    *out = static_cast<int>(ws->r.arch);
    return ok();
}

athena_status athena_workspace_record_count(const athena_workspace* ws,
                                            unsigned long long* out) {
    if (!ws || !out) return fail(ATHENA_ERR_INVALID_ARGUMENT, "NULL argument");
    *out = ws->r.records.size();
    return ok();
}

athena_status athena_workspace_record(const athena_workspace* ws, unsigned long long index,
                                      athena_record* out) {
    if (!ws || !out) return fail(ATHENA_ERR_INVALID_ARGUMENT, "NULL argument");
    if (index >= ws->r.records.size())
        return fail(ATHENA_ERR_INVALID_ARGUMENT, "record index out of range");
    *out = from_record(ws->r.records[static_cast<std::size_t>(index)]);
    return ok();
}

athena_status athena_workspace_export(const athena_workspace* ws, const char* format,
                                      const char* path, int include_points) {
    if (!ws || !format || !path) return fail(ATHENA_ERR_INVALID_ARGUMENT, "NULL argument");
    const std::string fmt = format;
    try {
        if (fmt == "csv")
            athena::export_csv(ws->r, path);
        else if (fmt == "ply")
            athena::export_ply(ws->r, path);
        else if (fmt == "json")
            athena::export_json(ws->r, path, include_points != 0);
        else
            return fail(ATHENA_ERR_UNSUPPORTED_FORMAT,
                        "unsupported export format: " + fmt);
        return ok();
    } catch (const athena::IoError& e) {
        return fail(ATHENA_ERR_IO, e.what());
    }
}

athena_status athena_workspace_export_slices(const athena_workspace* ws, const char* dir,
                                             int* files_written) {
    if (!ws || !dir) return fail(ATHENA_ERR_INVALID_ARGUMENT, "NULL argument");
    try {
        const int n = athena::export_slices(ws->r, dir);
        if (files_written) *files_written = n;
        return ok();
    } catch (const athena::IoError& e) {
        return fail(ATHENA_ERR_IO, e.what());
    } catch (const std::exception& e) {
        return fail(ATHENA_ERR_IO, e.what());
    }
}

athena_status athena_workspace_load_json(const char* path, athena_workspace** out) {
    if (!path || !out) return fail(ATHENA_ERR_INVALID_ARGUMENT, "NULL argument");
    try {
        *out = new athena_workspace_s{athena::load_result_json(path)};
        return ok();
    } catch (const athena::IoError& e) {
        return fail(ATHENA_ERR_IO, e.what());
    } catch (const std::exception& e) {
        return fail(ATHENA_ERR_IO, e.what());
    }
}

athena_status athena_workspace_compare(const athena_workspace* a, const athena_workspace* b,
                                       athena_compare_report* out) {
    if (!a || !b || !out) return fail(ATHENA_ERR_INVALID_ARGUMENT, "NULL argument");
    try {
        const athena::ComparisonReport rep = athena::compare(a->r, b->r);
        out->total_candidates = rep.total_candidates;
        out->valid_a = rep.valid_a;
        out->valid_b = rep.valid_b;
        out->pct_difference = rep.pct_difference;
        out->volume_a_mm3 = rep.volume_a_mm3;
        out->volume_b_mm3 = rep.volume_b_mm3;
        for (int i = 0; i < ATHENA_REASON_COUNT; ++i) {
            out->hist_a[i] = rep.histogram_a[i];
            out->hist_b[i] = rep.histogram_b[i];
        }
        out->arch_a = static_cast<int>(rep.arch_a);
        out->arch_b = static_cast<int>(rep.arch_b);
        return ok();
    } catch (const athena::GridMismatchError& e) {
        return fail(ATHENA_ERR_GRID_MISMATCH, e.what());
    }
}

/* ------------------------------------------------------------------ */

athena_status athena_singularity_scan(const athena_model* model, const athena_workspace* ws,
                                      double threshold, unsigned long long stride,
                                      athena_scan_report* out) {
    if (!model || !ws || !out) return fail(ATHENA_ERR_INVALID_ARGUMENT, "NULL argument");
    const athena::ScanReport rep =
        athena::singularity_scan(ws->r, model->m, threshold, stride == 0 ? 1 : stride);
    out->arch = static_cast<int>(rep.arch);
    out->threshold = rep.threshold;
    out->stride = rep.stride;
    out->evaluated_count = rep.evaluated_count;
    out->flagged_count = rep.flagged_count;
    out->min_abs_det_q = rep.min_normalized_abs_det_jq;
    out->argmin_point = athena_tip{rep.argmin_point.x, rep.argmin_point.y, rep.argmin_point.z};
    return ok();
}

athena_status athena_scan_report_write_json(const athena_scan_report* report,
                                            const char* path) {
    if (!report || !path) return fail(ATHENA_ERR_INVALID_ARGUMENT, "NULL argument");
    athena::ScanReport rep;
    rep.arch = report->arch == ATHENA_ARCH_2 ? athena::Arch::Athena2 : athena::Arch::Athena1;
    rep.threshold = report->threshold;
    rep.stride = report->stride;
    rep.evaluated_count = report->evaluated_count;
    rep.flagged_count = report->flagged_count;
    rep.min_normalized_abs_det_jq = report->min_abs_det_q;
    rep.argmin_point = athena::TipPoint{report->argmin_point.x_mm, report->argmin_point.y_mm,
                                        report->argmin_point.z_mm};
    try {
        athena::write_scan_report_json(rep, path);
        return ok();
    } catch (const athena::IoError& e) {
        return fail(ATHENA_ERR_IO, e.what());
    }
}

/* ------------------------------------------------------------------ */

athena_status athena_stiffness_from_deflection(double force_n, double deflection_mm,
                                               double* out) {
    if (!out) return fail(ATHENA_ERR_INVALID_ARGUMENT, "out is NULL");
    try {
        *out = athena::stiffness_from_deflection(force_n, deflection_mm);
        return ok();
    } catch (const std::invalid_argument& e) {
        return fail(ATHENA_ERR_INVALID_ARGUMENT, e.what());
    }
}

athena_status athena_lumped_tip_stiffness(const athena_model* model, int arch,
                                          const athena_pose* pose,
                                          const athena_joints* joints,
                                          const double joint_stiffness[4], double k_matrix[9],
                                          double* k_axis) {
    if (!model || !pose || !joints || !k_matrix)
        return fail(ATHENA_ERR_INVALID_ARGUMENT, "NULL argument");
    athena::Arch a;
    if (!to_arch(arch, a)) return fail(ATHENA_ERR_INVALID_ARGUMENT, "bad arch selector");

    std::array<double, 4> ks{};
    if (joint_stiffness) {
        for (int i = 0; i < 4; ++i) ks[i] = joint_stiffness[i];
    } else {
        const athena::JointStiffness& d = model->m.stiffness;
        ks = {d.q1, d.q2, a == athena::Arch::Athena1 ? d.q3_athena1 : d.q3_athena2, d.q4};
    }

    const athena::LumpedResult r = athena::lumped_tip_stiffness(
        a, to_pose(*pose), to_joints(*joints, a), model->m, ks);
    if (r.status != athena::KinStatus::Ok)
        return from_kin_status(r.status,
                               r.status == athena::KinStatus::SingularJacobian
                                   ? "tip stiffness undefined near a singularity"
                                   : "joint stiffness values must be positive and the "
                                     "(pose, joints) pair consistent");
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) k_matrix[i * 3 + j] = r.estimate.matrix(i, j);
    if (k_axis) *k_axis = r.estimate.scalar_along_axis;
    return ok();
}

athena_status athena_stiffness_report(const athena_stiffness_estimate* est, size_t n_est,
                                      int as_json, char* buf, size_t cap, size_t* needed) {
    if (n_est > 0 && !est) return fail(ATHENA_ERR_INVALID_ARGUMENT, "estimates are NULL");
    std::vector<athena::StiffnessRow> rows = athena::fem_reference_rows();
    for (size_t i = 0; i < n_est; ++i) {
        athena::StiffnessRow row;
        row.label = est[i].label ? est[i].label : athena_arch_name(est[i].arch);
        row.force_n = std::nan("");
        row.displacement_lo = row.displacement_hi = std::nan("");
        row.stiffness_lo = row.stiffness_hi = est[i].k_axis_n_per_mm;
        row.von_mises_lo = row.von_mises_hi = std::nan("");
        row.provenance = athena::Provenance::LumpedModel;
        rows.push_back(std::move(row));
    }
    const std::string text = as_json ? athena::render_stiffness_report_json(rows)
                                     : athena::render_stiffness_report_text(rows);
    return write_string(text, buf, cap, needed);
}

}  // extern "C"
