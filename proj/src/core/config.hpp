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

#ifndef ATHENA_CORE_CONFIG_HPP
#define ATHENA_CORE_CONFIG_HPP

#include <string>

#include "errors.hpp"
#include "types.hpp"

namespace athena {

/// Parses and validates a configuration document (JSON syntax; see the
/// repository README for the schema). Lengths are mm and angles degrees in
/// the file; the returned model uses mm and radians throughout.
///
/// Unknown keys are rejected unless `lenient` is set. Missing optional
/// fields take the documented defaults (notably l0, which binds to l01).
/// Throws ConfigError on syntax, schema, or validation problems.
Model load_config_text(const std::string& text, bool lenient = false);

/// load_config_text over the content of `path`. Throws IoError when the
/// file cannot be read.
Model load_config_file(const std::string& path, bool lenient = false);

/// The repository default parameter set. Parsed from the single versioned
/// document embedded at build time, through the same loader and validation
/// as any user file.
Model default_model();

/// Text of the embedded default configuration document.
const std::string& default_config_text();

/// Canonical serialization of a model back to the file schema (degrees in
/// the file). Numeric fields are written with enough digits that
/// load_config_text(serialize_config(m)) reproduces `m` bit-exactly.
std::string serialize_config(const Model& model);

/// Validates the cross-field invariants of an assembled model. Throws
/// ConfigError::Validation naming the field and constraint on failure.
void validate(const Model& model);

/// FNV-1a 64-bit hash of a byte string, hex encoded. Used for run manifests
/// and cheap content identity, not for security.
std::string fnv1a64_hex(const std::string& bytes);

}  // namespace athena

#endif
