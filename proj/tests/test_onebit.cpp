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

#include <map>
#include <random>
#include <sstream>

#include "doctest.h"
#include "srmq/onebit.hpp"
#include "srmq/sparse_table.hpp"

using namespace srmq;

namespace {

// Greedy chain lengths straight from an array: the label oracle.
std::pair<uint32_t, uint32_t> chain_label(const value_array& a, uint32_t lo, uint32_t hi) {
    uint32_t l = 0, r = 0;
    int64_t best;
    best = INT64_MAX;
    for (uint32_t i = lo; i <= hi; ++i)
        if (a[i - 1] < best) { best = a[i - 1]; ++l; }
    best = INT64_MAX;
    for (uint32_t i = hi; i >= lo; --i) {
        if (a[i - 1] < best) { best = a[i - 1]; ++r; }
        if (i == lo) break;
    }
    return {l, r};
}

value_array class_array(uint32_t n, const big_count& z) {
    return canonical_array(tree_unrank(n, z));
}

}  // namespace

TEST_CASE("count_n basics") {
    CHECK(count_n(1, 1, 1) == 1);
    big_count s3 = 0, s8 = 0;
    for (uint32_t l = 1; l <= 3; ++l)
        for (uint32_t r = 1; r <= 3; ++r) s3 += count_n(3, l, r);
    CHECK(s3 == 5);
    for (uint32_t l = 1; l <= 8; ++l)
        for (uint32_t r = 1; r <= 8; ++r) s8 += count_n(8, l, r);
    CHECK(s8 == catalan_number(8));
    CHECK(s8 == 1430);
}

TEST_CASE("count_n agrees with label enumeration") {
    for (uint32_t n = 1; n <= 8; ++n) {
        std::map<std::pair<uint32_t, uint32_t>, uint64_t> hist;
        big_count cn = catalan_number(n);
        for (big_count z = 1; z <= cn; ++z) {
            value_array a = class_array(n, z);
            hist[chain_label(a, 1, n)]++;
        }
        for (uint32_t l = 1; l <= n; ++l)
            for (uint32_t r = 1; r <= n; ++r) {
                uint64_t want = hist.count({l, r}) ? hist[{l, r}] : 0;
                CHECK(count_n(n, l, r) == want);
            }
    }
}

TEST_CASE("merge counts") {
    // two leaves, minimum on the left
    CHECK(merge_count({1, 2}, {1, 1}, {1, 1}) == 1);
    CHECK(merge_count({2, 1}, {1, 1}, {1, 1}) == 1);
    CHECK_THROWS(merge_count({1, 1}, {1, 1}, {1, 1}));

    // recursion consistency: N(a+b, phi) = sum over mergeable label pairs
    for (uint32_t s = 2; s <= 10; ++s) {
        uint32_t a = (s + 1) / 2, b = s - a;
        for (uint32_t l = 1; l <= s; ++l)
            for (uint32_t r = 1; r + l <= s + 1; ++r) {
                big_count total = 0;
                for (uint32_t l1 = 1; l1 <= a; ++l1)
                    for (uint32_t r1 = 1; r1 + l1 <= a + 1; ++r1)
                        for (uint32_t l2 = 1; l2 <= b; ++l2)
                            for (uint32_t r2 = 1; r2 + l2 <= b + 1; ++r2)
                                total += count_n(a, l1, r1) * count_n(b, l2, r2) *
                                         merge_count_or_zero({l, r}, {l1, r1}, {l2, r2});
                CHECK(total == count_n(s, l, r));
            }
    }

    // symmetric labels give symmetric counts under left/right swap
    for (uint32_t s = 2; s <= 6; ++s)
        for (uint32_t l = 1; l <= s; ++l)
            for (uint32_t r = 1; r + l <= s + 1; ++r)
                CHECK(count_n(s, l, r) == count_n(s, r, l));
}

TEST_CASE("onebit: exhaustive small classes") {
    for (uint32_t n = 1; n <= 8; ++n) {
        big_count cn = catalan_number(n);
        for (big_count z = 1; z <= cn; ++z) {
            value_array a = class_array(n, z);
            onebit_rmq ds = onebit_rmq::build(a);
            for (uint32_t i = 1; i <= n; ++i)
                for (uint32_t j = i; j <= n; ++j) {
                    CAPTURE(n);
                    CAPTURE(to_decimal(z));
                    CAPTURE(i);
                    CAPTURE(j);
                    REQUIRE(ds.query(i, j) == rmq_scan(a, i, j));
                }
        }
    }
}

TEST_CASE("onebit: random arrays with ties") {
    std::mt19937_64 rng(71);
    for (uint32_t n : {13u, 32u, 64u, 100u}) {
        for (int rep = 0; rep < 3; ++rep) {
            value_array a(n);
            for (auto& v : a) v = static_cast<int64_t>(rng() % (n / 2 + 2));
            onebit_rmq ds = onebit_rmq::build(a);
            sparse_table st(a);
            for (uint32_t i = 1; i <= n; ++i)
                for (uint32_t j = i; j <= n; ++j) REQUIRE(ds.query(i, j) == st.query(i, j));
        }
    }
}

TEST_CASE("onebit: space law at small sizes") {
    std::mt19937_64 rng(72);
    for (uint32_t n : {1u, 2u, 4u, 8u, 64u, 256u}) {
        value_array a(n);
        for (auto& v : a) v = static_cast<int64_t>(rng());
        onebit_rmq ds = onebit_rmq::build(a);
        double budget = n == 1 ? 0.0 : static_cast<double>(log2_big(catalan_number(n)));
        CHECK(ds.accounted_bits() <= budget + 1.0);
        CHECK(ds.physical_payload_bits() <= static_cast<uint64_t>(std::ceil(budget)) + 2);
    }
    // structured inputs stay within the same bound
    for (uint32_t n : {16u, 128u}) {
        value_array inc(n), dec(n);
        for (uint32_t i = 0; i < n; ++i) {
            inc[i] = i;
            dec[i] = n - i;
        }
        double budget = static_cast<double>(log2_big(catalan_number(n)));
        CHECK(onebit_rmq::build(inc).accounted_bits() <= budget + 1.0);
        CHECK(onebit_rmq::build(dec).accounted_bits() <= budget + 1.0);
        sparse_table sti(inc);
        onebit_rmq di = onebit_rmq::build(inc);
        for (uint32_t i = 1; i <= n; i += 3)
            for (uint32_t j = i; j <= n; j += 5) CHECK(di.query(i, j) == sti.query(i, j));
    }
}

TEST_CASE("onebit: relocation ranks match the chain oracle") {
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 300; ++trial) {
        uint32_t n = 2 + rng() % 510;
        value_array a(n);
        for (auto& v : a) v = static_cast<int64_t>(rng() % (2 * n));
        onebit_rmq ds = onebit_rmq::build(a);
        value_array canon = canonical_array(build_cartesian(a));
        uint32_t qa = 1 + rng() % n;
        uint32_t qb = 1 + rng() % n;
        if (qa > qb) std::swap(qa, qb);
        if (qa == qb) continue;
        auto rel = ds.relocate(qa, qb);
        // the straddling node and its midpoint
        uint32_t lo = rel.node_lo, hi = rel.node_hi;
        uint32_t mid = lo + (hi - lo + 1 + 1) / 2 - 1;
        REQUIRE(lo <= qa);
        REQUIRE(qb <= hi);
        REQUIRE(qa <= mid);
        REQUIRE(mid < qb);
        // rank of min(canon[qa..mid]) in the suffix chain of [lo..mid]:
        // the number of suffix minima at positions >= qa
        uint32_t a_rank = 0;
        int64_t best = INT64_MAX;
        for (uint32_t i = mid; i >= lo; --i) {
            if (canon[i - 1] < best) {
                best = canon[i - 1];
                if (i >= qa) ++a_rank;
            }
            if (i == lo) break;
        }
        uint32_t b_rank = 0;
        best = INT64_MAX;
        for (uint32_t i = mid + 1; i <= hi; ++i) {
            if (canon[i - 1] < best) {
                best = canon[i - 1];
                if (i <= qb) ++b_rank;
            }
        }
        CHECK(rel.a_rank == a_rank);
        CHECK(rel.b_rank == b_rank);
    }
}

TEST_CASE("onebit: determinism and serialization") {
    std::mt19937_64 rng(74);
    value_array a(200);
    for (auto& v : a) v = static_cast<int64_t>(rng() % 64);
    onebit_rmq d1 = onebit_rmq::build(a);
    onebit_rmq d2 = onebit_rmq::build(a);
    std::stringstream s1, s2;
    d1.save(s1);
    d2.save(s2);
    CHECK(s1.str() == s2.str());

    std::stringstream s3(s1.str());
    onebit_rmq d3 = onebit_rmq::load(s3);
    sparse_table st(a);
    for (int t = 0; t < 500; ++t) {
        uint32_t i = 1 + rng() % a.size();
        uint32_t j = 1 + rng() % a.size();
        if (i > j) std::swap(i, j);
        CHECK(d3.query(i, j) == st.query(i, j));
    }

    // corrupting the header is rejected
    std::string bytes = s1.str();
    bytes[9] = 2;  // kind
    std::stringstream s4(bytes);
    CHECK_THROWS(onebit_rmq::load(s4));
}

TEST_CASE("onebit: probes are counted") {
    std::mt19937_64 rng(75);
    value_array a(512);
    for (auto& v : a) v = static_cast<int64_t>(rng());
    onebit_rmq ds = onebit_rmq::build(a);
    probe_counter pc;
    ds.query(17, 400, &pc);
    CHECK(pc.total() > 0);
    CHECK(pc.distinct() > 0);
    CHECK(pc.distinct() <= pc.total());
}
