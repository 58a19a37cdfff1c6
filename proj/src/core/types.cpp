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

#include "types.hpp"

namespace athena {

const char* arch_name(Arch arch) noexcept {
    return arch == Arch::Athena1 ? "athena1" : "athena2";
}

bool arch_from_name(const std::string& name, Arch& out) noexcept {
    if (name == "athena1" || name == "ATHENA-1" || name == "1") {
        out = Arch::Athena1;
        return true;
    }
    if (name == "athena2" || name == "ATHENA-2" || name == "2") {
        out = Arch::Athena2;
        return true;
    }
    return false;
}

const char* domain_term_name(DomainTerm term) noexcept {
    switch (term) {
        case DomainTerm::None: return "none";
        case DomainTerm::RailRadicand: return "l1^2 - (transverse)^2";
        case DomainTerm::CouplerRadicand: return "l3^2 - (transverse)^2";
        case DomainTerm::PlanarReach: return "planar distance below l4";
        case DomainTerm::CrankRadicand: return "(x + l0)^2 + z^2 - l4^2";
        case DomainTerm::CrankNoRealRoot: return "no real crank root";
    }
    return "unknown";
}

const char* reason_name(Reason reason) noexcept {
    switch (reason) {
        case Reason::OK: return "OK";
        case Reason::NoRealSolution: return "NO_REAL_SOLUTION";
        case Reason::Q1Limit: return "Q1_LIMIT";
        case Reason::Q2Limit: return "Q2_LIMIT";
        case Reason::Q3Limit: return "Q3_LIMIT";
        case Reason::Q4Limit: return "Q4_LIMIT";
        case Reason::InsertionLimit: return "INSERTION_LIMIT";
        case Reason::DegenerateTip: return "DEGENERATE_TIP";
    }
    return "UNKNOWN";
}

bool reason_from_name(const std::string& name, Reason& out) noexcept {
    for (int i = 0; i < kReasonCount; ++i) {
        auto r = static_cast<Reason>(i);
        if (name == reason_name(r)) {
            out = r;
            return true;
        }
    }
    return false;
}

}  // namespace athena
