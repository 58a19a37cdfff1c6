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

#ifndef ATHENA_KIN_H
#define ATHENA_KIN_H

/*
 * athena-kin C API.
 *
 * Kinematics and workspace analysis for the ATHENA-1 and ATHENA-2 4-DOF
 * parallel architectures: closed-form inverse kinematics, Newton forward
 * kinematics, RCM pose modeling, grid workspace sweeps, Jacobian
 * singularity scanning and stiffness reporting.
 *
 * Conventions:
 *  - lengths in mm, angles in rad (configuration files use degrees);
 *  - every function returns an athena_status; results go to out-params;
 *  - opaque handles are created and destroyed by this library;
 *  - athena_last_error() returns a thread-local message for the most
 *    recent failure on the calling thread;
 *  - handles are immutable after configuration and safe to share across
 *    threads, except *_set_option which must not race with readers.
 */

#include <stddef.h>

#if defined(_WIN32)
#define ATHENA_KIN_API __declspec(dllexport)
#elif defined(__GNUC__) || defined(__clang__)
#define ATHENA_KIN_API __attribute__((visibility("default")))
#else
#define ATHENA_KIN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum athena_status {
    ATHENA_OK = 0,
    ATHENA_ERR_INVALID_ARGUMENT = 1,
    ATHENA_ERR_PARSE = 2,            /* malformed configuration document */
    ATHENA_ERR_VALIDATION = 3,       /* schema or invariant violation */
    ATHENA_ERR_UNREACHABLE = 4,      /* no real kinematic solution */
    ATHENA_ERR_NO_ROOT_IN_RANGE = 5, /* crank roots exist, none in travel */
    ATHENA_ERR_JOINT_LIMIT = 6,
    ATHENA_ERR_DEGENERATE_TIP = 7,   /* tip coincides with the RCM */
    ATHENA_ERR_INSERTION_RANGE = 8,  /* insertion outside [0, lins_max) */
    ATHENA_ERR_DOMAIN = 9,           /* evaluation left the real domain */
    ATHENA_ERR_NO_CONVERGENCE = 10,
    ATHENA_ERR_SINGULAR_JACOBIAN = 11,
    ATHENA_ERR_GRID_MISMATCH = 12,
    ATHENA_ERR_UNSUPPORTED_FORMAT = 13,
    ATHENA_ERR_IO = 14,
    ATHENA_ERR_BUFFER_TOO_SMALL = 15
} athena_status;

/* Architecture selectors. */
#define ATHENA_ARCH_1 1
#define ATHENA_ARCH_2 2

/* Workspace classification reason codes, in precedence order. */
typedef enum athena_reason {
    ATHENA_REASON_OK = 0,
    ATHENA_REASON_NO_REAL_SOLUTION = 1,
    ATHENA_REASON_Q1_LIMIT = 2,
    ATHENA_REASON_Q2_LIMIT = 3,
    ATHENA_REASON_Q3_LIMIT = 4,
    ATHENA_REASON_Q4_LIMIT = 5,
    ATHENA_REASON_INSERTION_LIMIT = 6,
    ATHENA_REASON_DEGENERATE_TIP = 7
} athena_reason;
#define ATHENA_REASON_COUNT 8

ATHENA_KIN_API const char* athena_version(void);
ATHENA_KIN_API const char* athena_status_name(athena_status status);
ATHENA_KIN_API const char* athena_reason_name(int reason);
ATHENA_KIN_API const char* athena_arch_name(int arch);

/* Thread-local message describing the most recent failure. Never NULL. */
ATHENA_KIN_API const char* athena_last_error(void);

/* ------------------------------------------------------------------ */
/* Model: geometry, joint limits and solver options.                    */
/* ------------------------------------------------------------------ */

typedef struct athena_model_s athena_model;

ATHENA_KIN_API athena_status athena_model_create_default(athena_model** out);
ATHENA_KIN_API athena_status athena_model_create_from_file(const char* path, int lenient,
                                                           athena_model** out);
ATHENA_KIN_API athena_status athena_model_create_from_json(const char* text, int lenient,
                                                           athena_model** out);
ATHENA_KIN_API void athena_model_destroy(athena_model* model);

/* Canonical serialization back to the file schema. Call with buf == NULL
 * to query the required size (excluding the terminator) via *needed. */
ATHENA_KIN_API athena_status athena_model_serialize(const athena_model* model, char* buf,
                                                    size_t cap, size_t* needed);

/* FNV-1a-64 hash of the canonical serialization, "fnv1a64:<16 hex>".
 * cap must be at least 25. */
ATHENA_KIN_API athena_status athena_model_content_hash(const athena_model* model, char* buf,
                                                       size_t cap);

/* Numeric parameters by key: geometry keys (l1, l2, l3, l4, l5, l2min,
 * l2max, l_tool, l01, l02, l03, l0), limit keys (lins_max_mm, q3a2_min_deg,
 * q3a2_max_deg, q4_min_deg, q4_max_deg) and stiffness keys (q1_n_per_mm,
 * q2_n_per_mm, q3_athena1_n_per_mm, q3_athena2_nmm_per_rad, q4_nmm_per_rad). */
ATHENA_KIN_API athena_status athena_model_get_param(const athena_model* model,
                                                    const char* key, double* out);

/* String options: "variant" = literal|symmetrized, "branch" = +|-,
 * "q3_root" = min|alt, "a2_x_sign" = +|-. */
ATHENA_KIN_API athena_status athena_model_set_option(athena_model* model, const char* key,
                                                     const char* value);
ATHENA_KIN_API athena_status athena_model_get_option(const athena_model* model,
                                                     const char* key, char* buf, size_t cap);

/* ------------------------------------------------------------------ */
/* Kinematics.                                                          */
/* ------------------------------------------------------------------ */

typedef struct athena_pose {
    double psi_rad;
    double theta_rad;
    double phi_rad;
    double l_ins_mm;
} athena_pose;

typedef struct athena_tip {
    double x_mm;
    double y_mm;
    double z_mm;
} athena_tip;

/* q3 is mm for ATHENA_ARCH_1 and rad for ATHENA_ARCH_2. */
typedef struct athena_joints {
    double q1_mm;
    double q2_mm;
    double q3;
    double q4_rad;
} athena_joints;

ATHENA_KIN_API athena_status athena_pose_to_tip(const athena_model* model,
                                                const athena_pose* pose, athena_tip* out);

/* azimuth_degenerate (optional) is set when the tip lies on the polar axis
 * and psi is 0 by convention. */
ATHENA_KIN_API athena_status athena_tip_to_pose(const athena_model* model,
                                                const athena_tip* tip, double phi_rad,
                                                athena_pose* out, int* azimuth_degenerate);

/* Closed-form inverse kinematics. With check_limits nonzero, a violated
 * joint limit yields ATHENA_ERR_JOINT_LIMIT (joints still written, the
 * violation mask set); solvability failures report UNREACHABLE or
 * NO_ROOT_IN_RANGE. limit_mask (optional) gets bits 1<<0..1<<3 for q1..q4. */
ATHENA_KIN_API athena_status athena_ik(const athena_model* model, int arch,
                                       const athena_pose* pose, int check_limits,
                                       athena_joints* out, unsigned* limit_mask);

/* Residuals of the loop-closure system at (joints, pose), plus the
 * per-equation magnitude scales. */
ATHENA_KIN_API athena_status athena_residuals(const athena_model* model, int arch,
                                              const athena_joints* joints,
                                              const athena_pose* pose, double f[4],
                                              double scale[4]);

/* Newton forward kinematics. seed may be NULL for the mid-range default.
 * iterations/final_scaled_residual are optional out-params. */
ATHENA_KIN_API athena_status athena_fk(const athena_model* model, int arch,
                                       const athena_joints* joints, const athena_pose* seed,
                                       athena_pose* out, int* iterations,
                                       double* final_scaled_residual);

/* ------------------------------------------------------------------ */
/* Jacobians and singularity metrics.                                  */
/* ------------------------------------------------------------------ */

/* Row-major 4x4: jq = df/d(q1..q4), jx = df/d(psi, theta, phi, l_ins). */
ATHENA_KIN_API athena_status athena_jacobians(const athena_model* model, int arch,
                                              const athena_pose* pose,
                                              const athena_joints* joints, double jq[16],
                                              double jx[16]);

typedef struct athena_metrics {
    double abs_det_jq;
    double abs_det_jx;
    double cond_jq;
    double cond_jx;
    double manipulability;          /* sqrt(det(Jq Jq^T)) */
    double normalized_abs_det_jq;   /* |det Jq| / product of row norms */
} athena_metrics;

ATHENA_KIN_API athena_status athena_singularity_metrics(const double jq[16],
                                                        const double jx[16],
                                                        athena_metrics* out);

/* ------------------------------------------------------------------ */
/* Workspace sweeps.                                                   */
/* ------------------------------------------------------------------ */

typedef struct athena_grid {
    double x_min_mm, x_max_mm;
    double y_min_mm, y_max_mm;
    double z_min_mm, z_max_mm;
    double step_mm;
} athena_grid;

/* x in [0, 300], y in [-500, 500], z in [-350, 0], 2 mm increment. */
ATHENA_KIN_API void athena_grid_default(athena_grid* out);

ATHENA_KIN_API athena_status athena_grid_candidate_count(const athena_grid* grid,
                                                         unsigned long long* out);

/* Visits points in documented order (x outer, y, z inner); return nonzero
 * from the callback to continue, zero to stop. */
typedef int (*athena_grid_visit_fn)(void* user, double x_mm, double y_mm, double z_mm);
ATHENA_KIN_API athena_status athena_grid_enumerate(const athena_grid* grid,
                                                   athena_grid_visit_fn visit, void* user);

typedef struct athena_record {
    athena_tip tip;
    int arch;
    int reason;          /* athena_reason */
    int valid;           /* reason == ATHENA_REASON_OK */
    athena_joints joints; /* meaningful iff valid */
} athena_record;

/* Classifies one tip point; constraint failures are data (reason codes),
 * not errors. */
ATHENA_KIN_API athena_status athena_classify(const athena_model* model, int arch,
                                             const athena_tip* tip, int frame_base,
                                             athena_record* out);

typedef struct athena_sweep_options {
    int store_all;   /* keep failing records too */
    int counts_only; /* keep no records */
    int workers;     /* <= 0 selects hardware concurrency */
    int frame_base;  /* grid given in the robot base frame */
} athena_sweep_options;

typedef struct athena_workspace_s athena_workspace;

/* Deterministic for any worker count. options may be NULL for defaults
 * (valid-only storage, automatic workers, RCM frame). */
ATHENA_KIN_API athena_status athena_sweep(const athena_model* model, int arch,
                                          const athena_grid* grid,
                                          const athena_sweep_options* options,
                                          athena_workspace** out);
ATHENA_KIN_API void athena_workspace_destroy(athena_workspace* ws);

ATHENA_KIN_API athena_status athena_workspace_counts(const athena_workspace* ws,
                                                     unsigned long long* total,
                                                     unsigned long long* valid);
ATHENA_KIN_API athena_status athena_workspace_histogram(
    const athena_workspace* ws, unsigned long long hist[ATHENA_REASON_COUNT]);
ATHENA_KIN_API athena_status athena_workspace_grid(const athena_workspace* ws,
                                                   athena_grid* out);
ATHENA_KIN_API athena_status athena_workspace_arch(const athena_workspace* ws, int* out);
ATHENA_KIN_API athena_status athena_workspace_record_count(const athena_workspace* ws,
                                                           unsigned long long* out);
ATHENA_KIN_API athena_status athena_workspace_record(const athena_workspace* ws,
                                                     unsigned long long index,
                                                     athena_record* out);

/* format: "csv", "ply" or "json". include_points only affects JSON. */
ATHENA_KIN_API athena_status athena_workspace_export(const athena_workspace* ws,
                                                     const char* format, const char* path,
                                                     int include_points);

/* Per-z-slice CSV files under dir; *files_written optional. */
ATHENA_KIN_API athena_status athena_workspace_export_slices(const athena_workspace* ws,
                                                            const char* dir,
                                                            int* files_written);

/* Rehydrates a JSON export (sweep results round-trip; points optional). */
ATHENA_KIN_API athena_status athena_workspace_load_json(const char* path,
                                                        athena_workspace** out);

typedef struct athena_compare_report {
    unsigned long long total_candidates;
    unsigned long long valid_a, valid_b;
    double pct_difference; /* (valid_b/valid_a - 1) * 100 */
    double volume_a_mm3, volume_b_mm3;
    unsigned long long hist_a[ATHENA_REASON_COUNT];
    unsigned long long hist_b[ATHENA_REASON_COUNT];
    int arch_a, arch_b;
} athena_compare_report;

ATHENA_KIN_API athena_status athena_workspace_compare(const athena_workspace* a,
                                                      const athena_workspace* b,
                                                      athena_compare_report* out);

/* ------------------------------------------------------------------ */
/* Singularity scan.                                                    */
/* ------------------------------------------------------------------ */

typedef struct athena_scan_report {
    int arch;
    double threshold;
    unsigned long long stride;
    unsigned long long evaluated_count;
    unsigned long long flagged_count;
    double min_abs_det_q; /* row-norm-normalized |det Jq| minimum */
    athena_tip argmin_point;
} athena_scan_report;

/* stride 0 behaves as 1. The sweep must have stored valid records. */
ATHENA_KIN_API athena_status athena_singularity_scan(const athena_model* model,
                                                     const athena_workspace* ws,
                                                     double threshold,
                                                     unsigned long long stride,
                                                     athena_scan_report* out);
ATHENA_KIN_API athena_status athena_scan_report_write_json(const athena_scan_report* report,
                                                           const char* path);

/* ------------------------------------------------------------------ */
/* Stiffness.                                                           */
/* ------------------------------------------------------------------ */

ATHENA_KIN_API athena_status athena_stiffness_from_deflection(double force_n,
                                                              double deflection_mm,
                                                              double* out);

/* Joint stiffness order: q1, q2, q3, q4 (prismatic N/mm, revolute
 * N*mm/rad). joint_stiffness may be NULL to use the model's illustrative
 * defaults. k_matrix is the row-major 3x3 Cartesian tip stiffness (N/mm);
 * k_axis the scalar stiffness along the instrument axis. */
ATHENA_KIN_API athena_status athena_lumped_tip_stiffness(const athena_model* model, int arch,
                                                         const athena_pose* pose,
                                                         const athena_joints* joints,
                                                         const double joint_stiffness[4],
                                                         double k_matrix[9], double* k_axis);

typedef struct athena_stiffness_estimate {
    const char* label;
    int arch;
    double k_axis_n_per_mm;
} athena_stiffness_estimate;

/* Renders the comparison report (bundled FEM reference rows plus the given
 * model estimates), text or JSON. Buffer protocol as in
 * athena_model_serialize. */
ATHENA_KIN_API athena_status athena_stiffness_report(const athena_stiffness_estimate* est,
                                                     size_t n_est, int as_json, char* buf,
                                                     size_t cap, size_t* needed);

#ifdef __cplusplus
}
#endif

#endif /* ATHENA_KIN_H */
