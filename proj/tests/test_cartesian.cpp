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
#include "srmq/cartesian.hpp"
#include "srmq/sparse_table.hpp"

using namespace srmq;

TEST_CASE("cartesian construction") {
    tree_shape t = build_cartesian({2, 1, 3});
    CHECK(t.root == 2);
    CHECK(t.left[2] == 1);
    CHECK(t.right[2] == 3);

    tree_shape tie = build_cartesian({1, 1});
    CHECK(tie.root == 1);  // leftmost minimum on ties
    CHECK(tie.right[1] == 2);

    tree_shape inc = build_cartesian({1, 2, 3, 4});
    CHECK(inc.root == 1);
    for (uint32_t v = 1; v < 4; ++v) {
        CHECK(inc.right[v] == v + 1);
        CHECK(inc.left[v] == 0);
    }
}

TEST_CASE("rmq_scan") {
    value_array a{5, 3, 4, 1, 2};
    CHECK(rmq_scan(a, 1, 5) == 4);
    CHECK(rmq_scan(a, 2, 2) == 2);
    CHECK(rmq_scan({1, 1}, 1, 2) == 1);
    CHECK_THROWS(rmq_scan(a, 3, 2));
    CHECK_THROWS(rmq_scan(a, 0, 2));
}

TEST_CASE("sparse table equals the scan oracle") {
    CHECK(sparse_table({3, 1, 2}).query(2, 3) == 2);
    CHECK(sparse_table({42}).query(1, 1) == 1);
    std::mt19937_64 rng(23);
    for (uint32_t n : {1u, 2u, 17u, 64u, 128u}) {
        value_array a(n);
        for (auto& v : a) v = static_cast<int64_t>(rng() % 32);  // ties likely
        sparse_table st(a);
        for (uint32_t i = 1; i <= n; ++i)
            for (uint32_t j = i; j <= n; ++j) CHECK(st.query(i, j) == rmq_scan(a, i, j));
    }
}

TEST_CASE("rmq equals the cartesian lca") {
    std::mt19937_64 rng(29);
    for (uint32_t n : {1u, 2u, 5u, 33u, 64u}) {
        for (int rep = 0; rep < 3; ++rep) {
            value_array a(n);
            for (auto& v : a) v = static_cast<int64_t>(rng() % (n + 2));
            tree_shape t = build_cartesian(a);
            for (uint32_t i = 1; i <= n; ++i)
                for (uint32_t j = i; j <= n; ++j) CHECK(rmq_scan(a, i, j) == lca_naive(t, i, j));
        }
    }
}

TEST_CASE("value invariance of answers") {
    CHECK(cartesian_equivalent({1, 2, 3}, {10, 20, 30}));
    CHECK(!cartesian_equivalent({1, 2}, {2, 1}));
    value_array a{4, 7, 2, 9, 9, 1};
    CHECK(cartesian_equivalent(a, a));
    value_array b{40, 70, 20, 91, 92, 10};  // same relative order, ties broken the same way
    REQUIRE(cartesian_equivalent(a, b));
    for (uint32_t i = 1; i <= a.size(); ++i)
        for (uint32_t j = i; j <= a.size(); ++j) CHECK(rmq_scan(a, i, j) == rmq_scan(b, i, j));
}

TEST_CASE("canonical arrays rebuild their shape") {
    for (uint32_t n = 1; n <= 8; ++n) {
        big_count cn = catalan_number(n);
        for (big_count z = 1; z <= cn; ++z) {
            tree_shape t = tree_unrank(n, z);
            CHECK(build_cartesian(canonical_array(t)) == t);
        }
    }
}

TEST_CASE("dfuds encode/decode") {
    // the unique 1-node encoding
    dfuds_string d1 = dfuds_encode(tree_unrank(1, 1));
    CHECK(d1.bits.size() == 4);
    CHECK(is_balanced(d1.bits));
    CHECK(dfuds_decode(d1) == tree_unrank(1, 1));

    // decode(encode(t)) = t for all trees up to n = 8; injectivity at n = 4
    for (uint32_t n = 1; n <= 8; ++n) {
        big_count cn = catalan_number(n);
        std::set<std::vector<uint64_t>> images;
        for (big_count z = 1; z <= cn; ++z) {
            tree_shape t = tree_unrank(n, z);
            dfuds_string d = dfuds_encode(t);
            CHECK(d.bits.size() == 2 * n + 2);
            CHECK(is_balanced(d.bits));
            CHECK(dfuds_decode(d) == t);
            if (n == 4) images.insert(d.bits.words());
        }
        if (n == 4) CHECK(images.size() == 14);
    }

    // malformed strings are rejected
    dfuds_string bad;
    bad.n = 2;
    bad.bits = parens_from_string("(()())");
    bad.bits.set(5, true);  // unbalanced now
    CHECK_THROWS(dfuds_decode(bad));
}
