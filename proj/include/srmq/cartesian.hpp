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
#include <vector>

#include "srmq/bitvec.hpp"
#include "srmq/catalan.hpp"

namespace srmq {

using value_array = std::vector<int64_t>;  // 1-indexed at the API level

// Leftmost index of the minimum of A[a..b]; the canonical oracle.
inline uint32_t rmq_scan(const value_array& a_vals, uint32_t a, uint32_t b) {
    if (a < 1 || a > b || b > a_vals.size())
        throw std::out_of_range("rmq_scan: bad range");
    uint32_t best = a;
    for (uint32_t i = a + 1; i <= b; ++i)
        if (a_vals[i - 1] < a_vals[best - 1]) best = i;
    return best;
}

// Cartesian tree: root = leftmost minimum, subtrees built on each side.
// Rightmost-spine stack construction, O(n).
inline tree_shape build_cartesian(const value_array& a) {
    uint32_t n = static_cast<uint32_t>(a.size());
    if (n == 0) throw std::invalid_argument("build_cartesian: empty array");
    tree_shape t;
    t.n = n;
    t.left.assign(n + 1, 0);
    t.right.assign(n + 1, 0);
    std::vector<uint32_t> spine;  // indices, values increasing towards the top
    for (uint32_t i = 1; i <= n; ++i) {
        uint32_t last_popped = 0;
        // strict pop: an equal later element goes into the right subtree
        while (!spine.empty() && a[spine.back() - 1] > a[i - 1]) {
            last_popped = spine.back();
            spine.pop_back();
        }
        t.left[i] = last_popped;
        if (!spine.empty()) t.right[spine.back()] = i;
        spine.push_back(i);
    }
    t.root = spine.front();
    return t;
}

inline bool cartesian_equivalent(const value_array& a1, const value_array& a2) {
    if (a1.size() != a2.size())
        throw std::invalid_argument("cartesian_equivalent: length mismatch");
    return build_cartesian(a1) == build_cartesian(a2);
}

// Distinct-valued representative of a shape: the root of every subtree
// gets the smallest value in its range (preorder numbering). Its
// Cartesian tree is the input shape.
inline value_array canonical_array(const tree_shape& t) {
    value_array a(t.n, 0);
    int64_t next = 0;
    auto walk = [&](auto&& self, uint32_t node) -> void {
        if (node == 0) return;
        a[node - 1] = next++;
        self(self, t.left[node]);
        self(self, t.right[node]);
    };
    walk(walk, t.root);
    return a;
}

// 2d-min-heap: parent(i) = max { j < i : A[j] <= A[i] }, with a super
// root 0. The <= tie rule preserves the leftmost-minimum answer.
struct min_heap_tree {
    uint32_t n = 0;
    std::vector<uint32_t> parent;                 // 1..n -> 0..n
    std::vector<std::vector<uint32_t>> children;  // 0..n, increasing order
};

inline min_heap_tree build_min_heap(const value_array& a) {
    min_heap_tree h;
    h.n = static_cast<uint32_t>(a.size());
    h.parent.assign(h.n + 1, 0);
    h.children.assign(h.n + 1, {});
    std::vector<uint32_t> stack;  // strictly increasing values bottom-up
    for (uint32_t i = 1; i <= h.n; ++i) {
        while (!stack.empty() && a[stack.back() - 1] > a[i - 1]) stack.pop_back();
        h.parent[i] = stack.empty() ? 0 : stack.back();
        stack.push_back(i);
    }
    for (uint32_t i = 1; i <= h.n; ++i) h.children[h.parent[i]].push_back(i);
    return h;
}

// DFUDS of the heap tree: preorder, deg(v) opens then one close, with one
// artificial leading open. n+1 vertices give 2n+2 bits; preorder visits
// the positions 0..n in increasing order.
struct dfuds_string {
    uint32_t n = 0;  // array length (the heap has n+1 vertices)
    bit_vec bits;    // 1 = '(' , 0 = ')'
};

inline dfuds_string dfuds_encode_heap(const min_heap_tree& h) {
    dfuds_string d;
    d.n = h.n;
    d.bits = bit_vec(2 * static_cast<uint64_t>(h.n) + 2);
    uint64_t pos = 0;
    d.bits.set(pos++, true);  // artificial open
    for (uint32_t v = 0; v <= h.n; ++v) {
        for (size_t c = 0; c < h.children[v].size(); ++c) d.bits.set(pos++, true);
        d.bits.set(pos++, false);
    }
    return d;
}

inline dfuds_string dfuds_encode(const tree_shape& t) {
    return dfuds_encode_heap(build_min_heap(canonical_array(t)));
}

// Inverse: parse vertex degrees in preorder, rebuild the heap, then map
// back to the binary shape (right child = last heap child, left child =
// previous heap sibling; the shape root is the last child of vertex 0).
inline tree_shape dfuds_decode(const dfuds_string& d) {
    const bit_vec& bits = d.bits;
    uint64_t m = bits.size();
    if (m != 2 * static_cast<uint64_t>(d.n) + 2 || m < 2 || !bits.get(0) || !is_balanced(bits))
        throw std::invalid_argument("dfuds_decode: malformed string");
    uint32_t n = d.n;
    std::vector<uint32_t> degree(n + 1, 0);
    uint64_t pos = 1;
    for (uint32_t v = 0; v <= n; ++v) {
        uint32_t deg = 0;
        while (pos < m && bits.get(pos)) { ++deg; ++pos; }
        if (pos >= m) throw std::invalid_argument("dfuds_decode: malformed string");
        ++pos;  // close
        degree[v] = deg;
    }
    if (pos != m) throw std::invalid_argument("dfuds_decode: malformed string");
    // preorder = position order; children go to the nearest open slot
    std::vector<std::vector<uint32_t>> children(n + 1);
    std::vector<std::pair<uint32_t, uint32_t>> open;  // (vertex, remaining slots)
    open.emplace_back(0, degree[0]);
    for (uint32_t v = 1; v <= n; ++v) {
        while (!open.empty() && open.back().second == 0) open.pop_back();
        if (open.empty()) throw std::invalid_argument("dfuds_decode: malformed string");
        children[open.back().first].push_back(v);
        --open.back().second;
        open.emplace_back(v, degree[v]);
    }
    while (!open.empty() && open.back().second == 0) open.pop_back();
    if (!open.empty()) throw std::invalid_argument("dfuds_decode: malformed string");

    tree_shape t;
    t.n = n;
    t.left.assign(n + 1, 0);
    t.right.assign(n + 1, 0);
    for (uint32_t v = 0; v <= n; ++v) {
        const auto& ch = children[v];
        for (size_t k = 1; k < ch.size(); ++k) t.left[ch[k]] = ch[k - 1];  // previous sibling
        if (v != 0 && !ch.empty()) t.right[v] = ch.back();                 // last child
    }
    t.root = children[0].empty() ? 0 : children[0].back();
    if (n > 0 && t.root == 0) throw std::invalid_argument("dfuds_decode: malformed string");
    return t;
}

// Test-only LCA by parent walks; the RMQ-tree law oracle.
inline uint32_t lca_naive(const tree_shape& t, uint32_t x, uint32_t y) {
    std::vector<uint32_t> parent(t.n + 1, 0);
    for (uint32_t v = 1; v <= t.n; ++v) {
        if (t.left[v]) parent[t.left[v]] = v;
        if (t.right[v]) parent[t.right[v]] = v;
    }
    std::vector<bool> seen(t.n + 1, false);
    for (uint32_t v = x; v != 0; v = parent[v]) {
        seen[v] = true;
        if (v == t.root) break;
    }
    for (uint32_t v = y; v != 0; v = parent[v]) {
        if (seen[v]) return v;
        if (v == t.root) break;
    }
    return t.root;
}

}  // namespace srmq
