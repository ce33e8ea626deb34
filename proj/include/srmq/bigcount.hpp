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

#include <gmpxx.h>

#include <cassert>
#include <cmath>
#include <cstdint>
#include <string>

namespace srmq {

// Exact nonnegative counters (Catalan numbers, capacities, ranks, z
// payloads). All arithmetic stays in the integers; no rounding.
using big_count = mpz_class;

inline uint64_t bit_length(const big_count& x) {
    if (x == 0) return 0;
    return mpz_sizeinbase(x.get_mpz_t(), 2);
}

// log2 of a positive big integer with >= 64-bit mantissa precision:
// bit-length plus long-double refinement of the top 64 bits.
inline long double log2_big(const big_count& x) {
    assert(x > 0);
    uint64_t bits = bit_length(x);
    if (bits <= 64)
        return std::log2(static_cast<long double>(mpz_get_ui(x.get_mpz_t())));
    big_count top = x >> (bits - 64);
    long double t = static_cast<long double>(mpz_get_ui(top.get_mpz_t()));
    return std::log2(t) + static_cast<long double>(bits - 64);
}

inline big_count pow2_big(uint64_t e) {
    big_count r = 1;
    r <<= e;
    return r;
}

inline big_count ceil_div(const big_count& a, const big_count& b) {
    big_count q, rem;
    mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline big_count binomial(uint64_t n, uint64_t k) {
    if (k > n) return 0;
    big_count r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

inline std::string to_decimal(const big_count& x) { return x.get_str(); }

inline big_count from_decimal(const std::string& s) { return big_count(s); }

}  // namespace srmq
