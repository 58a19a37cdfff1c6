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

#ifndef ATHENA_CORE_MATH_UTIL_HPP
#define ATHENA_CORE_MATH_UTIL_HPP

#include <cmath>
#include <numbers>

namespace athena {

inline constexpr double kPi = std::numbers::pi;

inline double deg2rad(double deg) noexcept { return deg * (kPi / 180.0); }
inline double rad2deg(double rad) noexcept { return rad * (180.0 / kPi); }

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) noexcept {
    a = std::fmod(a, 2.0 * kPi);
    if (a <= -kPi) a += 2.0 * kPi;
    if (a > kPi) a -= 2.0 * kPi;
    return a;
}

/// Principal solution of sin(x) = sin(a): returns `a` unchanged when it is
/// already inside [-pi/2, pi/2], so in-range values survive bit-exactly.
inline double principal_sine_angle(double a) noexcept {
    if (a >= -kPi / 2.0 && a <= kPi / 2.0) return a;
    return std::asin(std::sin(a));
}

inline double clamp_unit(double v) noexcept {
    if (v < -1.0) return -1.0;
    if (v > 1.0) return 1.0;
    return v;
}

}  // namespace athena

#endif
