// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#include "srmq/bigcount.hpp"

namespace srmq {

// Nonnegative float with a 53-bit mantissa and an unbounded binary
// exponent: value = m * 2^e with m in [0.5, 1), or zero. Plain IEEE
// double arithmetic underneath, so results are reproducible between the
// build and load paths of the same binary. Counting code that needs an
// upper bound applies an explicit safety inflation afterwards.
struct xfloat {
    double m = 0.0;
    int64_t e = 0;

    static xfloat zero() { return {}; }
    static xfloat one() { return {0.5, 1}; }

    bool is_zero() const { return m == 0.0; }

    static xfloat normalized(double v, int64_t e0) {
        if (v == 0.0) return {};
        int ex;
        double mm = std::frexp(v, &ex);
        return {mm, e0 + ex};
    }

    static xfloat from_u64(uint64_t v) { return normalized(static_cast<double>(v), 0); }

    // v * 2^shift with v < 2^53 representable exactly.
    static xfloat from_scaled(uint64_t v, int64_t shift) {
        return normalized(static_cast<double>(v), shift);
    }

    static xfloat from_big(const big_count& v) {
        if (v == 0) return {};
        long exp = 0;
        double d = mpz_get_d_2exp(&exp, v.get_mpz_t());
        return normalized(d, exp);
    }

    // Largest power-of-two exponent E with 2^E <= value (value > 0).
    int64_t floor_log2() const { return e - 1; }

    double log2() const {
        if (is_zero()) return -std::numeric_limits<double>::infinity();
        return std::log2(m) + static_cast<double>(e);
    }

    friend xfloat operator*(const xfloat& a, const xfloat& b) {
        if (a.is_zero() || b.is_zero()) return {};
        return normalized(a.m * b.m, a.e + b.e);
    }

    friend xfloat operator/(const xfloat& a, const xfloat& b) {
        if (a.is_zero()) return {};
        return normalized(a.m / b.m, a.e - b.e);
    }

    friend xfloat operator+(const xfloat& a, const xfloat& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        const xfloat *hi = &a, *lo = &b;
        if (b.e > a.e) { hi = &b; lo = &a; }
        int64_t d = hi->e - lo->e;
        if (d > 128) return *hi;
        return normalized(hi->m + std::ldexp(lo->m, static_cast<int>(-d)), hi->e);
    }

    xfloat& operator+=(const xfloat& o) { *this = *this + o; return *this; }
    xfloat& operator*=(const xfloat& o) { *this = *this * o; return *this; }

    friend bool operator<(const xfloat& a, const xfloat& b) {
        if (a.is_zero()) return !b.is_zero();
        if (b.is_zero()) return false;
        if (a.e != b.e) return a.e < b.e;
        return a.m < b.m;
    }
    friend bool operator<=(const xfloat& a, const xfloat& b) { return !(b < a); }

    // 2^x for real x, split into integer and fractional parts.
    static xfloat exp2(double x) {
        double ip = std::floor(x);
        double frac = x - ip;
        return normalized(std::exp2(frac), static_cast<int64_t>(ip));
    }

    // Multiply by (1 + 2^-28): the uniform safety margin applied to any
    // float-evaluated sum that must upper-bound an exact integer total.
    xfloat inflated() const {
        if (is_zero()) return {};
        return normalized(m * (1.0 + 0x1p-28), e);
    }

    // The value rounded down / up to an integer; requires e <= 62.
    uint64_t floor_u64() const {
        if (is_zero()) return 0;
        return static_cast<uint64_t>(std::floor(std::ldexp(m, static_cast<int>(e))));
    }
    uint64_t ceil_u64() const {
        if (is_zero()) return 0;
        return static_cast<uint64_t>(std::ceil(std::ldexp(m, static_cast<int>(e))));
    }
};

}  // namespace srmq
