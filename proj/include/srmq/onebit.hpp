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
#include <iosfwd>
#include <memory>

#include "srmq/bigcount.hpp"
#include "srmq/cartesian.hpp"
#include "srmq/probe.hpp"
#include "srmq/spillover.hpp"

namespace srmq {

// Number of Cartesian-tree classes of an s-element array whose prefix-
// minima chain has length phi_l and suffix-minima chain length phi_r.
// Exact; the envelope machinery uses a float image of the same sums.
big_count count_n(uint32_t s, uint32_t phi_l, uint32_t phi_r);

// Merge-witness count for a parent label given the child labels.
// merge_count rejects label triples outside the mergeable set.
bool mergeable(std::pair<uint32_t, uint32_t> phi, std::pair<uint32_t, uint32_t> phi_l,
               std::pair<uint32_t, uint32_t> phi_r);
big_count merge_count_or_zero(std::pair<uint32_t, uint32_t> phi,
                              std::pair<uint32_t, uint32_t> phi_l,
                              std::pair<uint32_t, uint32_t> phi_r);
big_count merge_count(std::pair<uint32_t, uint32_t> phi, std::pair<uint32_t, uint32_t> phi_l,
                      std::pair<uint32_t, uint32_t> phi_r);

struct onebit_ctx;  // input-independent model tables, derived from (n, r)

// The augmented-binary-tree RMQ structure packed into a single spill-over
// representation. Accounted size <= log2 C_n + 1 bits.
class onebit_rmq {
public:
    static onebit_rmq build(const value_array& a);

    uint32_t size() const { return n_; }
    uint64_t r_param() const { return r_; }

    uint32_t query(uint32_t a, uint32_t b, probe_counter* pc = nullptr) const;

    // The range relocation step on its own: ranks of min(A[a..mid]) and
    // min(A[mid+1..b]) in the straddling node's two greedy chains.
    struct relocation {
        uint32_t node_lo, node_hi;  // straddling node's interval
        uint32_t a_rank, b_rank;
    };
    relocation relocate(uint32_t a, uint32_t b, probe_counter* pc = nullptr) const;

    // m* + log2 k*, the fractional-bit size of the representation.
    double accounted_bits() const;
    uint64_t physical_payload_bits() const;

    void save(std::ostream& os) const;
    static onebit_rmq load(std::istream& is);

    const bit_vec& memory() const { return memory_; }
    uint64_t spill() const { return spill_; }

private:
    uint32_t n_ = 0;
    uint64_t r_ = 0;
    mk_size env_;
    bit_vec memory_;
    uint64_t spill_ = 0;
    std::shared_ptr<onebit_ctx> ctx_;
};

}  // namespace srmq
