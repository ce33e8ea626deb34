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

#include <random>
#include <set>

#include "doctest.h"
#include "srmq/spillover.hpp"

using namespace srmq;

static bit_vec random_bits(std::mt19937_64& rng, uint64_t len) {
    bit_vec v(len);
    for (uint64_t i = 0; i < len; ++i) v.set(i, rng() & 1);
    return v;
}

TEST_CASE("degenerate model stores nothing") {
    density_model m;
    m.weight = {big_count(1)};
    m.m_bits = {0};
    m.k_uni = {1};
    m.declared_h = 0.0;
    spill_codec codec(m, 8);
    spill_rep rep = codec.encode(0, bit_vec(0), 0);
    CHECK(rep.accounted_bits() == doctest::Approx(0.0));
    auto dec = codec.decode(rep);
    CHECK(dec.x == 0);
}

TEST_CASE("three-symbol model meets the budget") {
    density_model m;
    m.weight = {big_count(2), big_count(1), big_count(1)};
    m.m_bits = {0, 0, 0};
    m.k_uni = {1, 1, 1};
    m.declared_h = 2.0;
    spill_codec codec(m, 8);
    for (uint32_t x = 0; x < 3; ++x) {
        spill_rep rep = codec.encode(x, bit_vec(0), 0);
        CHECK(rep.accounted_bits() <= 2.0 + 0.5);
        CHECK(codec.decode(rep).x == x);
    }
}

TEST_CASE("round trip over exhaustive tiny models") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 60; ++trial) {
        size_t nx = 1 + rng() % 8;
        density_model m;
        for (size_t x = 0; x < nx; ++x) {
            m.weight.push_back(big_count(1 + rng() % 9));
            m.m_bits.push_back(rng() % 12);
            m.k_uni.push_back(1 + rng() % 9);
        }
        m.declared_h = m.tight_h() + 1e-9;
        uint64_t r = 4 + rng() % 60;
        spill_codec codec(m, r);
        for (uint32_t x = 0; x < nx; ++x) {
            bit_vec ym = random_bits(rng, m.m_bits[x]);
            uint64_t yk = rng() % m.k_uni[x];
            spill_rep rep = codec.encode(x, ym, yk);
            CHECK(rep.k_star == codec.envelope().k);
            auto dec = codec.decode(rep);
            CHECK(dec.x == x);
            CHECK(dec.y_k == yk);
            CHECK(dec.y_m == ym);
        }
    }
}

TEST_CASE("redundancy is at most 4/r and the spill universe at most 2r") {
    std::mt19937_64 rng(202);
    for (int trial = 0; trial < 300; ++trial) {
        size_t nx = 2 + rng() % 30;
        density_model m;
        for (size_t x = 0; x < nx; ++x) {
            m.weight.push_back(big_count(1 + rng() % 1000));
            m.m_bits.push_back(rng() % 40);
            m.k_uni.push_back(1 + rng() % 100);
        }
        double h = m.tight_h();
        uint64_t r = 8 << (rng() % 8);
        // the 4/r guarantee presumes the budget is at least log2 r
        if (h < std::log2(static_cast<double>(r)) + 1) continue;
        m.declared_h = h + 1e-9;
        spill_codec codec(m, r);
        uint32_t x = rng() % nx;
        spill_rep rep = codec.encode(x, random_bits(rng, m.m_bits[x]), rng() % m.k_uni[x]);
        CHECK(rep.k_star <= 2 * r);
        CHECK(rep.accounted_bits() <= h + 4.0 / static_cast<double>(r));
    }
}

TEST_CASE("decode touches a bounded number of cells") {
    // frozen from the reference build: table-driven decode stays within
    // a dozen word reads on these models
    std::mt19937_64 rng(303);
    uint64_t worst = 0;
    for (int trial = 0; trial < 100; ++trial) {
        size_t nx = 2 + rng() % 8;
        density_model m;
        for (size_t x = 0; x < nx; ++x) {
            m.weight.push_back(big_count(1 + rng() % 16));
            m.m_bits.push_back(rng() % 64);
            m.k_uni.push_back(1 + rng() % 16);
        }
        m.declared_h = m.tight_h() + 1e-9;
        spill_codec codec(m, 64);
        uint32_t x = rng() % nx;
        spill_rep rep = codec.encode(x, random_bits(rng, m.m_bits[x]), rng() % m.k_uni[x]);
        probe_counter pc;
        codec.decode(rep, &pc);
        worst = std::max(worst, pc.total());
    }
    CHECK(worst <= 12);
}

TEST_CASE("chained applications keep the additive redundancy") {
    // n symbols, each chained over the previous representation; with
    // r = 8n the total stays within Sum H_i + 8(n-1)/r <= Sum H_i + 1,
    // where H_i = max_x log2(1/p_i(x)) is the symbol's own budget.
    std::mt19937_64 rng(404);
    const int n = 100;
    const uint64_t r = 8 * n;
    double sum_h = 0.0;
    spill_rep rep;  // empty chain start: 0 bits, spill universe 1
    rep.memory = bit_vec(0);
    rep.spill = 0;
    rep.k_star = 1;
    std::vector<uint32_t> symbols;
    std::vector<spill_codec> codecs;
    for (int i = 0; i < n; ++i) {
        density_model m;
        size_t nx = 2 + rng() % 6;
        big_count wsum = 0;
        big_count wmin = 0;
        for (size_t x = 0; x < nx; ++x) {
            m.weight.push_back(big_count(1 + rng() % 7));
            m.m_bits.push_back(rep.memory.size());
            m.k_uni.push_back(rep.k_star);
            wsum += m.weight.back();
            if (wmin == 0 || m.weight.back() < wmin) wmin = m.weight.back();
        }
        m.declared_h = m.tight_h() + 1e-9;
        sum_h += static_cast<double>(log2_big(wsum) - log2_big(wmin));
        codecs.emplace_back(m, r);
        uint32_t x = rng() % nx;
        symbols.push_back(x);
        rep = codecs.back().encode(x, rep.memory, rep.spill);
    }
    double total = rep.accounted_bits();
    CHECK(total <= sum_h + 8.0 * (n - 1) / static_cast<double>(r) + 1e-6);
    CHECK(total <= sum_h + 1.0 + 1e-6);

    // decode the chain back
    spill_rep cur = rep;
    for (int i = n - 1; i >= 0; --i) {
        auto dec = codecs[i].decode(cur);
        CHECK(dec.x == symbols[i]);
        spill_rep prev;
        prev.memory = dec.y_m;
        prev.spill = dec.y_k;
        prev.k_star = i > 0 ? codecs[i - 1].envelope().k : 1;
        cur = prev;
    }
    CHECK(cur.memory.size() == 0);
}

TEST_CASE("set select") {
    set_select_rep rep = set_select_build({2, 5, 7}, 8, 64);
    CHECK(set_select(rep, 1) == 2);
    CHECK(set_select(rep, 2) == 5);
    CHECK(set_select(rep, 3) == 7);
    CHECK_THROWS(set_select(rep, 4));

    // full set: identity
    std::vector<uint32_t> full;
    for (uint32_t i = 1; i <= 9; ++i) full.push_back(i);
    set_select_rep frep = set_select_build(full, 9, 64);
    for (uint32_t i = 1; i <= 9; ++i) CHECK(set_select(frep, i) == i);

    // size bound for S in [64], |S| = 8
    std::mt19937_64 rng(505);
    for (int t = 0; t < 20; ++t) {
        std::vector<uint32_t> s;
        std::set<uint32_t> seen;
        while (seen.size() < 8) seen.insert(1 + rng() % 64);
        s.assign(seen.begin(), seen.end());
        uint64_t r = 8 << (t % 6);
        set_select_rep sr = set_select_build(s, 64, r);
        double bound = static_cast<double>(log2_big(binomial(64, 8))) + 4.0 / static_cast<double>(r);
        CHECK(sr.accounted_bits() <= bound);
        for (uint32_t i = 1; i <= 8; ++i) CHECK(set_select(sr, i) == s[i - 1]);
    }

    // agreement with direct sorted-array indexing on random (S, i)
    for (int t = 0; t < 2000; ++t) {
        uint32_t u = 2 + rng() % 120;
        uint32_t cnt = 1 + rng() % u;
        std::set<uint32_t> seen;
        while (seen.size() < cnt) seen.insert(1 + rng() % u);
        std::vector<uint32_t> s(seen.begin(), seen.end());
        set_select_rep sr = set_select_build(s, u, 32);
        uint32_t i = 1 + rng() % cnt;
        CHECK(set_select(sr, i) == s[i - 1]);
    }
}
