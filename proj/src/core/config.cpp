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

#include "config.hpp"

#include <fstream>
#include <mutex>
#include <set>
#include <sstream>

#include <json.hpp>

#include "default_config_inc.hpp"
#include "math_util.hpp"

namespace athena {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail_validation(const std::string& field, const std::string& constraint) {
    throw ConfigError(ConfigError::Kind::Validation, field, constraint);
}

[[noreturn]] void fail_schema(const std::string& field, const std::string& constraint) {
    throw ConfigError(ConfigError::Kind::Schema, field, constraint);
}

double require_number(const json& obj, const std::string& scope, const std::string& key) {
    auto it = obj.find(key);
    if (it == obj.end())
        fail_schema(scope + "." + key, "required field is missing");
    if (!it->is_number())
        fail_schema(scope + "." + key, "expected a number");
    return it->get<double>();
}

double optional_number(const json& obj, const std::string& scope, const std::string& key,
                       double fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_number())
        fail_schema(scope + "." + key, "expected a number");
    return it->get<double>();
}

std::pair<double, double> optional_range(const json& obj, const std::string& scope,
                                         const std::string& key, double lo, double hi) {
    auto it = obj.find(key);
    if (it == obj.end()) return {lo, hi};
    if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number())
        fail_schema(scope + "." + key, "expected [min, max] numbers");
    return {(*it)[0].get<double>(), (*it)[1].get<double>()};
}

void check_known_keys(const json& obj, const std::string& scope,
                      const std::set<std::string>& known, bool lenient) {
    if (lenient) return;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!known.count(it.key()))
            fail_schema(scope.empty() ? it.key() : scope + "." + it.key(),
                        "unknown key (strict mode; pass lenient to ignore)");
    }
}

void require_positive(double v, const std::string& field) {
    if (!(v > 0.0)) fail_validation(field, "must be strictly positive");
}

const JointStiffness& fallback_stiffness() {
    // Single source: the embedded default document carries the shipped values.
    static const JointStiffness k = default_model().stiffness;
    return k;
}

}  // namespace

Model load_config_text(const std::string& text, bool lenient) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(ConfigError::Kind::Parse, "", e.what());
    }
    if (!doc.is_object()) fail_schema("", "top-level value must be an object");

    check_known_keys(doc, "", {"geometry", "limits", "options", "joint_stiffness"}, lenient);

    auto geom_it = doc.find("geometry");
    if (geom_it == doc.end() || !geom_it->is_object())
        fail_schema("geometry", "required object is missing");
    const json& g = *geom_it;
    check_known_keys(g, "geometry",
                     {"l1", "l2", "l3", "l4", "l5", "l2min", "l2max", "l_tool", "l01", "l02",
                      "l03", "l0"},
                     lenient);

    Model m;
    m.geom.l1 = require_number(g, "geometry", "l1");
    m.geom.l2 = require_number(g, "geometry", "l2");
    m.geom.l3 = require_number(g, "geometry", "l3");
    m.geom.l4 = require_number(g, "geometry", "l4");
    m.geom.l5 = require_number(g, "geometry", "l5");
    m.geom.l2min = require_number(g, "geometry", "l2min");
    m.geom.l2max = require_number(g, "geometry", "l2max");
    m.geom.l_tool = require_number(g, "geometry", "l_tool");
    m.geom.l01 = require_number(g, "geometry", "l01");
    m.geom.l02 = require_number(g, "geometry", "l02");
    m.geom.l03 = require_number(g, "geometry", "l03");
    m.geom.l0 = optional_number(g, "geometry", "l0", m.geom.l01);

    const json limits = doc.value("limits", json::object());
    if (!limits.is_object()) fail_schema("limits", "expected an object");
    check_known_keys(limits, "limits", {"q4_range_deg", "lins_max_mm", "q3a2_range_deg"},
                     lenient);
    auto [q4lo, q4hi] = optional_range(limits, "limits", "q4_range_deg", -90.0, 90.0);
    auto [q3lo, q3hi] = optional_range(limits, "limits", "q3a2_range_deg", -45.0, 45.0);
    m.limits.q4_min_deg = q4lo;
    m.limits.q4_max_deg = q4hi;
    m.limits.q3a2_min_deg = q3lo;
    m.limits.q3a2_max_deg = q3hi;
    m.limits.q4_min = deg2rad(q4lo);
    m.limits.q4_max = deg2rad(q4hi);
    m.limits.q3a2_min = deg2rad(q3lo);
    m.limits.q3a2_max = deg2rad(q3hi);
    m.limits.lins_max = optional_number(limits, "limits", "lins_max_mm", 250.0);

    m.limits.q1_min = 0.0;
    m.limits.q1_max = m.geom.l1;
    m.limits.q2_min = 0.0;
    m.limits.q2_max = 2.0 * m.geom.l1;
    m.limits.q3a1_min = m.geom.l2min;
    m.limits.q3a1_max = m.geom.l2max;

    const json opts = doc.value("options", json::object());
    if (!opts.is_object()) fail_schema("options", "expected an object");
    check_known_keys(opts, "options", {"a2_x_sign", "variant"}, lenient);
    if (opts.contains("a2_x_sign")) {
        const std::string s = opts["a2_x_sign"].is_string() ? opts["a2_x_sign"].get<std::string>() : "";
        if (s == "+")
            m.options.a2_x_sign = A2XSign::Plus;
        else if (s == "-")
            m.options.a2_x_sign = A2XSign::Minus;
        else
            fail_schema("options.a2_x_sign", "expected \"+\" or \"-\"");
    }
    if (opts.contains("variant")) {
        const std::string s = opts["variant"].is_string() ? opts["variant"].get<std::string>() : "";
        if (s == "literal")
            m.options.variant = Variant::Literal;
        else if (s == "symmetrized")
            m.options.variant = Variant::Symmetrized;
        else
            fail_schema("options.variant", "expected \"literal\" or \"symmetrized\"");
    }

    if (doc.contains("joint_stiffness")) {
        const json& ks = doc["joint_stiffness"];
        if (!ks.is_object()) fail_schema("joint_stiffness", "expected an object");
        check_known_keys(ks, "joint_stiffness",
                         {"note", "q1_n_per_mm", "q2_n_per_mm", "q3_athena1_n_per_mm",
                          "q3_athena2_nmm_per_rad", "q4_nmm_per_rad"},
                         lenient);
        // Fallbacks resolve lazily: the embedded default document lists every
        // value, so parsing it never re-enters default_model().
        auto opt_ks = [&](const char* key, double JointStiffness::*field) {
            auto it = ks.find(key);
            if (it != ks.end()) {
                if (!it->is_number())
                    fail_schema(std::string("joint_stiffness.") + key, "expected a number");
                return it->get<double>();
            }
            return fallback_stiffness().*field;
        };
        m.stiffness.q1 = opt_ks("q1_n_per_mm", &JointStiffness::q1);
        m.stiffness.q2 = opt_ks("q2_n_per_mm", &JointStiffness::q2);
        m.stiffness.q3_athena1 = opt_ks("q3_athena1_n_per_mm", &JointStiffness::q3_athena1);
        m.stiffness.q3_athena2 = opt_ks("q3_athena2_nmm_per_rad", &JointStiffness::q3_athena2);
        m.stiffness.q4 = opt_ks("q4_nmm_per_rad", &JointStiffness::q4);
    } else {
        m.stiffness = fallback_stiffness();
    }

    validate(m);
    return m;
}

Model load_config_file(const std::string& path, bool lenient) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_config_text(buf.str(), lenient);
}

const std::string& default_config_text() {
    static const std::string text = detail::kDefaultConfigJson;
    return text;
}

Model default_model() {
    static std::once_flag once;
    static Model model;
    std::call_once(once, [] {
        // The embedded document must name its joint stiffness values
        // explicitly; parse them first so the general loader never recurses
        // into default_model() for this document.
        const json doc = json::parse(default_config_text());
        if (!doc.contains("joint_stiffness"))
            fail_schema("joint_stiffness", "embedded default must list stiffness values");
        model = load_config_text(default_config_text(), false);
    });
    return model;
}

void validate(const Model& m) {
    require_positive(m.geom.l1, "l1");
    require_positive(m.geom.l2, "l2");
    require_positive(m.geom.l3, "l3");
    require_positive(m.geom.l4, "l4");
    require_positive(m.geom.l5, "l5");
    require_positive(m.geom.l2min, "l2min");
    require_positive(m.geom.l2max, "l2max");
    require_positive(m.geom.l_tool, "l_tool");
    // l01, l02, l03, l0 may be any real.

    if (!(m.geom.l2min < m.geom.l2max))
        fail_validation("l2min", "l2min < l2max");
    if (!(m.limits.lins_max > 0.0))
        fail_validation("lins_max_mm", "must be strictly positive");
    if (!(m.geom.l_tool > m.limits.lins_max))
        fail_validation("l_tool", "l_tool > lins_max_mm (instrument longer than max insertion)");
    if (!(m.limits.q4_min < m.limits.q4_max))
        fail_validation("q4_range_deg", "min < max");
    if (!(m.limits.q3a2_min < m.limits.q3a2_max))
        fail_validation("q3a2_range_deg", "min < max");

    require_positive(m.stiffness.q1, "q1_n_per_mm");
    require_positive(m.stiffness.q2, "q2_n_per_mm");
    require_positive(m.stiffness.q3_athena1, "q3_athena1_n_per_mm");
    require_positive(m.stiffness.q3_athena2, "q3_athena2_nmm_per_rad");
    require_positive(m.stiffness.q4, "q4_nmm_per_rad");
}

std::string serialize_config(const Model& m) {
    ordered_json g;
    g["l1"] = m.geom.l1;
    g["l2"] = m.geom.l2;
    g["l3"] = m.geom.l3;
    g["l4"] = m.geom.l4;
    g["l5"] = m.geom.l5;
    g["l2min"] = m.geom.l2min;
    g["l2max"] = m.geom.l2max;
    g["l_tool"] = m.geom.l_tool;
    g["l01"] = m.geom.l01;
    g["l02"] = m.geom.l02;
    g["l03"] = m.geom.l03;
    g["l0"] = m.geom.l0;

    ordered_json lim;
    lim["q4_range_deg"] = {m.limits.q4_min_deg, m.limits.q4_max_deg};
    lim["lins_max_mm"] = m.limits.lins_max;
    lim["q3a2_range_deg"] = {m.limits.q3a2_min_deg, m.limits.q3a2_max_deg};

    ordered_json opts;
    opts["a2_x_sign"] = m.options.a2_x_sign == A2XSign::Plus ? "+" : "-";
    opts["variant"] = m.options.variant == Variant::Literal ? "literal" : "symmetrized";

    ordered_json ks;
    ks["q1_n_per_mm"] = m.stiffness.q1;
    ks["q2_n_per_mm"] = m.stiffness.q2;
    ks["q3_athena1_n_per_mm"] = m.stiffness.q3_athena1;
    ks["q3_athena2_nmm_per_rad"] = m.stiffness.q3_athena2;
    ks["q4_nmm_per_rad"] = m.stiffness.q4;

    ordered_json doc;
    doc["geometry"] = std::move(g);
    doc["limits"] = std::move(lim);
    doc["options"] = std::move(opts);
    doc["joint_stiffness"] = std::move(ks);
    return doc.dump(2) + "\n";
}

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace athena
