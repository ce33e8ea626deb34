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

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "srmq/bigcount.hpp"

namespace srmq {

// C_x = binom(2x, x) / (x + 1).
inline big_count catalan_number(uint64_t x) {
    big_count b = binomial(2 * x, x);
    return b / (x + 1);
}

// Sum over compositions i_1+...+i_m = U (parts >= 1) of prod C_{i_j - 1},
// in closed form: (m / (2U - m)) * binom(2U - m, U).
inline big_count mfold_convolution(uint64_t m, uint64_t U) {
    if (m == 0 && U == 0) return 1;  // empty product
    if (m == 0 || m > U) throw std::invalid_argument("mfold_convolution: need 1 <= m <= U");
    big_count b = binomial(2 * U - m, U);
    return b * m / (2 * U - m);
}

// Zero-extended variant for counting sums: out-of-domain terms vanish.
inline big_count mfold_or_zero(uint64_t m, uint64_t U) {
    if (m == 0) return U == 0 ? 1 : 0;
    if (m > U) return 0;
    return mfold_convolution(m, U);
}

// Same quantity by exhaustive enumeration of compositions; the oracle for
// mfold_convolution on a bounded domain.
inline big_count mfold_convolution_bruteforce(uint64_t m, uint64_t U) {
    if (m == 0 || m > U) throw std::invalid_argument("mfold_convolution_bruteforce: need 1 <= m <= U");
    if (U > 24) throw std::invalid_argument("mfold_convolution_bruteforce: U beyond enumeration budget");
    std::vector<big_count> cat(U + 1);
    for (uint64_t i = 0; i <= U; ++i) cat[i] = catalan_number(i);
    // dp[j][u] = sum over compositions of u into j parts of prod C_{part-1}
    std::vector<big_count> dp(U + 1, 0), next(U + 1, 0);
    dp[0] = 1;
    for (uint64_t j = 1; j <= m; ++j) {
        for (auto& v : next) v = 0;
        for (uint64_t u = j - 1; u <= U; ++u) {
            if (dp[u] == 0) continue;
            for (uint64_t part = 1; u + part <= U; ++part)
                next[u + part] += dp[u] * cat[part - 1];
        }
        std::swap(dp, next);
    }
    return dp[U];
}

// M(B, u): number of weighted placements of a size-u set in [B] with
// Catalan gap weights; equals the (u+1)-fold convolution at U = B+1.
inline big_count capacity_M(uint64_t B, uint64_t u) {
    if (B == 0) throw std::invalid_argument("capacity_M: B >= 1 required");
    if (u > B) throw std::invalid_argument("capacity_M: u <= B required");
    return mfold_convolution(u + 1, B + 1);
}

// Explicit envelopes around log2 M(B,u): the upper uses exp(-u^2/4B), the
// lower exp(-u^2/(4B-2u)). The unquantified (1 +- o(1)) factors are
// absorbed by the slack multiplier.
struct log2_envelope {
    double lo;
    double hi;
};

inline log2_envelope log2_bounds_M(uint64_t B, uint64_t u, double c_slack = 2.0) {
    long double ls = std::log2(static_cast<long double>(c_slack));
    if (u == 0) {
        // M(B,0) = C_B; the classic asymptotic 4^B / (sqrt(pi) B^1.5).
        long double mid = 2.0L * B - 1.5L * std::log2(static_cast<long double>(B)) -
                          std::log2(std::sqrt(3.14159265358979323846L));
        return {static_cast<double>(mid - ls), static_cast<double>(mid + ls)};
    }
    long double pi_half = std::sqrt(3.14159265358979323846L / 2.0L);
    long double common = std::log2(2.0L * u) - std::log2(pi_half) -
                         1.5L * std::log2(static_cast<long double>(2 * B - u)) +
                         (2.0L * B - u);
    long double ln2 = 0.69314718055994530942L;
    long double hi = common - (static_cast<long double>(u) * u / (4.0L * B)) / ln2 + ls;
    long double lo = common - (static_cast<long double>(u) * u / (4.0L * B - 2.0L * u)) / ln2 - ls;
    return {static_cast<double>(lo), static_cast<double>(hi)};
}

// d * log2 M(B,u) + log2 Z, the exact information floor for pred-z.
inline double entropy_budget(uint64_t d, uint64_t u, uint64_t B, const big_count& Z) {
    long double per_set = log2_big(capacity_M(B, u));
    long double z_bits = Z > 0 ? log2_big(Z) : 0.0L;
    return static_cast<double>(d * per_set + z_bits);
}

// ---------------------------------------------------------------------
// Tree shapes and unranking.

// Binary tree over in-order positions 1..n. Index 0 means "absent".
struct tree_shape {
    uint32_t n = 0;
    uint32_t root = 0;
    std::vector<uint32_t> left;   // 1-based node -> left child or 0
    std::vector<uint32_t> right;  // 1-based node -> right child or 0

    bool operator==(const tree_shape& o) const {
        return n == o.n && root == o.root && left == o.left && right == o.right;
    }
};

// Ballot completions: number of +-1 paths of length len starting at
// height h, ending at 0, staying >= 0.
inline big_count ballot_completions(uint64_t len, uint64_t h) {
    if ((len + h) % 2 != 0 || h > len) return 0;
    if (len == 0) return 1;
    return binomial(len + 1, (len - h) / 2) * (h + 1) / (len + 1);
}

// Lexicographic unranking of the balanced-parenthesis word ('(' < ')'),
// then parse into a shape. z is 1-based in [1, C_n].
tree_shape tree_unrank(uint32_t n, const big_count& z);
big_count tree_rank(const tree_shape& t);

// In-order position labelling: fills left/right/root so that the in-order
// traversal of the shape visits 1..n. `word` uses 1 = '('.
tree_shape bp_word_to_shape(const std::vector<bool>& word);
std::vector<bool> shape_to_bp_word(const tree_shape& t);

// Interleave patterns: bit sequences of length a+b with a zeros. k is
// 1-based in [1, binom(a+b, a)]; rank/unrank use a colex walk over the
// positions of the ones.
std::vector<bool> interleave_unrank(uint64_t a, uint64_t b, const big_count& k);
big_count interleave_rank(uint64_t a, const std::vector<bool>& seq);

// --- implementations -------------------------------------------------

inline tree_shape bp_word_to_shape(const std::vector<bool>& word) {
    tree_shape t;
    t.n = static_cast<uint32_t>(word.size() / 2);
    t.left.assign(t.n + 1, 0);
    t.right.assign(t.n + 1, 0);
    uint32_t counter = 0;  // in-order position counter
    size_t pos = 0;
    // returns root index of the parsed subtree (0 if empty)
    auto parse = [&](auto&& self) -> uint32_t {
        if (pos >= word.size() || !word[pos]) return 0;
        ++pos;  // '('
        uint32_t l = self(self);
        if (pos >= word.size() || word[pos]) throw std::invalid_argument("bp word: malformed");
        ++pos;  // ')'
        uint32_t me = ++counter;
        uint32_t r = self(self);
        t.left[me] = l;
        t.right[me] = r;
        return me;
    };
    // in-order numbering requires assigning after the left subtree:
    // parse consumes "(" enc(left) ")" then numbers the node, then right.
    t.root = parse(parse);
    if (pos != word.size() || counter != t.n) throw std::invalid_argument("bp word: malformed");
    return t;
}

inline std::vector<bool> shape_to_bp_word(const tree_shape& t) {
    std::vector<bool> word;
    word.reserve(2 * t.n);
    auto emit = [&](auto&& self, uint32_t node) -> void {
        if (node == 0) return;
        word.push_back(true);
        self(self, t.left[node]);
        word.push_back(false);
        self(self, t.right[node]);
    };
    emit(emit, t.root);
    return word;
}

inline tree_shape tree_unrank(uint32_t n, const big_count& z) {
    if (n == 0) throw std::invalid_argument("tree_unrank: n >= 1 required");
    big_count cn = catalan_number(n);
    if (z < 1 || z > cn) throw std::out_of_range("tree_unrank: z out of [1, C_n]");
    big_count rest = z - 1;  // 0-based walk
    std::vector<bool> word;
    word.reserve(2 * n);
    uint64_t h = 0;
    for (uint64_t step = 0; step < 2 * static_cast<uint64_t>(n); ++step) {
        uint64_t rem = 2 * static_cast<uint64_t>(n) - step - 1;
        big_count with_open = ballot_completions(rem, h + 1);
        if (rest < with_open) {
            word.push_back(true);
            ++h;
        } else {
            rest -= with_open;
            word.push_back(false);
            --h;
        }
    }
    return bp_word_to_shape(word);
}

inline big_count tree_rank(const tree_shape& t) {
    std::vector<bool> word = shape_to_bp_word(t);
    big_count rank = 0;
    uint64_t h = 0;
    for (size_t step = 0; step < word.size(); ++step) {
        uint64_t rem = word.size() - step - 1;
        if (word[step]) {
            ++h;
        } else {
            rank += ballot_completions(rem, h + 1);
            --h;
        }
    }
    return rank + 1;
}

inline std::vector<bool> interleave_unrank(uint64_t a, uint64_t b, const big_count& k) {
    big_count total = binomial(a + b, a);
    if (k < 1 || k > total) throw std::out_of_range("interleave_unrank: k out of range");
    big_count rest = k - 1;
    std::vector<bool> seq(a + b, false);
    // colex: choose positions of the b ones greedily from the top.
    uint64_t slots = a + b;
    for (uint64_t ones = b; ones >= 1; --ones) {
        uint64_t c = slots;  // candidate position (1-based), scan downward
        while (c >= ones) {
            big_count below = binomial(c - 1, ones);
            if (rest >= below) {
                seq[c - 1] = true;
                rest -= below;
                slots = c - 1;
                break;
            }
            --c;
        }
    }
    return seq;
}

inline big_count interleave_rank(uint64_t a, const std::vector<bool>& seq) {
    uint64_t total_len = seq.size();
    uint64_t b = 0;
    for (bool bit : seq) b += bit ? 1 : 0;
    if (a + b != total_len) throw std::invalid_argument("interleave_rank: zero count mismatch");
    big_count rank = 0;
    uint64_t seen = 0;
    for (uint64_t pos = 1; pos <= total_len; ++pos) {
        if (seq[pos - 1]) {
            ++seen;
            rank += binomial(pos - 1, seen);
        }
    }
    return rank + 1;
}

}  // namespace srmq
