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

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace srmq {

// Doubling sparse table over argmin, leftmost tie. 1-based queries.
class sparse_table {
public:
    sparse_table() = default;

    explicit sparse_table(const std::vector<int64_t>& a) : vals_(a) {
        size_t n = a.size();
        unsigned levels = n ? std::bit_width(n) : 1;
        idx_.assign(levels, {});
        idx_[0].resize(n);
        for (size_t i = 0; i < n; ++i) idx_[0][i] = static_cast<uint32_t>(i);
        for (unsigned l = 1; l < levels; ++l) {
            size_t span = size_t(1) << l;
            idx_[l].resize(n - span + 1);
            for (size_t i = 0; i + span <= n; ++i)
                idx_[l][i] = pick(idx_[l - 1][i], idx_[l - 1][i + span / 2]);
        }
    }

    size_t size() const { return vals_.size(); }

    uint32_t query(uint32_t a, uint32_t b) const {
        if (a < 1 || a > b || b > vals_.size()) throw std::out_of_range("sparse_table: bad range");
        uint32_t i = a - 1, j = b - 1;
        unsigned l = std::bit_width(uint64_t(j - i + 1)) - 1;
        return pick(idx_[l][i], idx_[l][j + 1 - (uint32_t(1) << l)]) + 1;
    }

    // Total table bits, for redundancy accounting by consumers.
    uint64_t table_bits() const {
        uint64_t entries = 0;
        for (const auto& row : idx_) entries += row.size();
        unsigned ew = vals_.empty() ? 1 : std::bit_width(vals_.size());
        return entries * ew;
    }

private:
    uint32_t pick(uint32_t i, uint32_t j) const {
        if (vals_[j] < vals_[i]) return j;
        return i;  // leftmost on ties (i < j always here)
    }

    std::vector<int64_t> vals_;
    std::vector<std::vector<uint32_t>> idx_;
};

}  // namespace srmq
