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

#ifndef ATHENA_CORE_ERRORS_HPP
#define ATHENA_CORE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace athena {

/// Configuration document problems: syntax, schema, or validation. `field`
/// names the offending key and `constraint` the violated rule, so callers
/// can report both without parsing the message.
class ConfigError : public std::runtime_error {
  public:
    enum class Kind { Parse, Schema, Validation };

    ConfigError(Kind kind, std::string field, std::string constraint)
        : std::runtime_error(compose(kind, field, constraint)),
          kind_(kind),
          field_(std::move(field)),
          constraint_(std::move(constraint)) {}

    Kind kind() const noexcept { return kind_; }
    const std::string& field() const noexcept { return field_; }
    const std::string& constraint() const noexcept { return constraint_; }

  private:
    static std::string compose(Kind kind, const std::string& field,
                               const std::string& constraint) {
        const char* what = kind == Kind::Parse        ? "config parse error"
                           : kind == Kind::Schema     ? "config schema error"
                                                      : "config validation error";
        std::string msg = what;
        if (!field.empty()) msg += ": field '" + field + "'";
        if (!constraint.empty()) msg += ": " + constraint;
        return msg;
    }

    Kind kind_;
    std::string field_;
    std::string constraint_;
};

/// I/O failures when reading or writing artifact files.
class IoError : public std::runtime_error {
  public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace athena

#endif
