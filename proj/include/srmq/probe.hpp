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
#include <unordered_set>

namespace srmq {

// Cell-probe tally: every w-bit cell read by an instrumented structure
// counts once towards `total`, and once towards `distinct` per query.
// Region ids separate the structure memory from auxiliary tables, which
// are counted by default (tables_free() drops them from the totals).
class probe_counter {
public:
    explicit probe_counter(unsigned word_bits = 64, bool tables_free = false)
        : w_(word_bits), tables_free_(tables_free) {}

    static constexpr uint64_t kMemRegion = 0;
    static constexpr uint64_t kTableRegion = 1;

    unsigned word_bits() const { return w_; }

    void reset() {
        seen_.clear();
        total_ = 0;
        total_tables_ = 0;
    }

    // Bit-addressed access: cell index = bit_offset / w.
    void touch_bits(uint64_t region, uint64_t bit_offset, uint64_t bit_len) {
        if (bit_len == 0) return;
        uint64_t first = bit_offset / w_;
        uint64_t last = (bit_offset + bit_len - 1) / w_;
        for (uint64_t c = first; c <= last; ++c) touch_cell(region, c);
    }

    void touch_cell(uint64_t region, uint64_t cell) {
        bool is_table = region >= kTableRegion;
        if (is_table && tables_free_) return;
        (is_table ? total_tables_ : total_)++;
        seen_.insert((region << 48) ^ cell);
    }

    uint64_t total() const { return total_ + total_tables_; }
    uint64_t total_memory() const { return total_; }
    uint64_t total_tables() const { return total_tables_; }
    uint64_t distinct() const { return seen_.size(); }

private:
    unsigned w_;
    bool tables_free_;
    uint64_t total_ = 0;
    uint64_t total_tables_ = 0;
    std::unordered_set<uint64_t> seen_;
};

}  // namespace srmq
