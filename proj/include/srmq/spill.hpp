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

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "srmq/bigcount.hpp"
#include "srmq/bitvec.hpp"
#include "srmq/probe.hpp"
#include "srmq/xfloat.hpp"

namespace srmq {

using u128 = unsigned __int128;

inline big_count mpz_from_u128(u128 v) {
    big_count hi = static_cast<uint64_t>(v >> 64);
    big_count lo = static_cast<uint64_t>(v);
    return (hi << 64) | lo;
}

inline u128 u128_from_mpz(const big_count& v) {
    assert(v >= 0 && bit_length(v) <= 127);
    big_count hi = v >> 64;
    big_count lo = v & ((big_count(1) << 64) - 1);
    return (u128(mpz_get_ui(hi.get_mpz_t())) << 64) | mpz_get_ui(lo.get_mpz_t());
}

// Exact value k * 2^m: the advertised size of a spill-over component.
struct mk_size {
    int64_t m_bits = 0;
    uint64_t k = 1;

    bool trivial() const { return m_bits == 0 && k == 1; }
    xfloat value_xf() const { return xfloat::from_scaled(k, m_bits); }
    double bits() const { return static_cast<double>(m_bits) + std::log2(static_cast<double>(k)); }
};

// Smallest (M, K) grid point covering v, with K in [2^rho, 2^(rho+1)]
// (or K = floor(v) when v < 2^rho; the true total is an integer, so the
// floor still covers it).
inline mk_size canon_mk(const xfloat& v, unsigned rho) {
    if (v.is_zero()) return {0, 1};
    int64_t E = v.floor_log2();
    if (E < static_cast<int64_t>(rho)) {
        uint64_t k = v.floor_u64();
        return {0, k == 0 ? 1 : k};
    }
    int64_t M = E - static_cast<int64_t>(rho);
    double scaled = std::ldexp(v.m, static_cast<int>(rho) + 1);  // = v / 2^M
    uint64_t k = static_cast<uint64_t>(std::ceil(scaled));
    return {M, k};
}

// Build-side code of a component: an exact integer c < k * 2^m packing
// (spill = c >> m, memory = low m bits, stored LSB-first).
struct code_blob {
    big_count c = 0;
    int64_t m_bits = 0;
    u128 k = 1;
};

// Concatenation: `lo` occupies the lower-offset memory and the
// low-order spill factor.
inline code_blob combine(const code_blob& lo, const code_blob& hi) {
    code_blob out;
    out.m_bits = lo.m_bits + hi.m_bits;
    out.k = lo.k * hi.k;
    big_count q_lo = lo.c >> lo.m_bits;
    big_count r_lo = lo.c - (q_lo << lo.m_bits);
    big_count q_hi = hi.c >> hi.m_bits;
    big_count r_hi = hi.c - (q_hi << hi.m_bits);
    big_count q = q_hi * mpz_from_u128(lo.k) + q_lo;
    out.c = (q << out.m_bits) + (r_hi << lo.m_bits) + r_lo;
    return out;
}

// Decode-side handle on a component: its memory region plus its spill.
struct code_view {
    uint64_t offset = 0;  // absolute bit offset into the structure memory
    int64_t m_bits = 0;
    u128 spill = 0;
};

inline std::pair<code_view, code_view> split(const code_view& v, int64_t lo_m, u128 lo_k) {
    code_view a{v.offset, lo_m, v.spill % lo_k};
    code_view b{v.offset + static_cast<uint64_t>(lo_m), v.m_bits - lo_m, v.spill / lo_k};
    return {a, b};
}

// One compression-lemma application: an injective map from
// { (x, inner code) : inner < K(x) * 2^M(x) } into [0, K* * 2^M*),
// allocated as consecutive intervals in decreasing M(x) order so that
// every interval start is a multiple of 2^M(x). Decoding x reads the
// spill plus O(1) words near the top of the region; the inner memory
// bits are the untouched low M(x) bits.
class spill_model {
public:
    struct entry_in {
        uint32_t id;  // dense id in [0, N)
        int64_t m_bits;
        u128 k;
    };

    spill_model() = default;

    // `prescribed` fixes the output envelope (it must cover the exact
    // total); otherwise the envelope is derived from the total at the
    // given rho.
    spill_model(std::vector<entry_in> entries, unsigned rho, const mk_size* prescribed,
                uint64_t table_uid = 0)
        : uid_(table_uid) {
        if (entries.empty()) throw std::invalid_argument("spill_model: empty support");
        std::stable_sort(entries.begin(), entries.end(), [](const entry_in& a, const entry_in& b) {
            if (a.m_bits != b.m_bits) return a.m_bits > b.m_bits;
            return a.id < b.id;
        });
        entries_.resize(entries.size());
        by_id_.assign(entries.size(), UINT32_MAX);
        big_count base = 0;
        for (size_t i = 0; i < entries.size(); ++i) {
            const entry_in& in = entries[i];
            entry& e = entries_[i];
            e.id = in.id;
            e.m_bits = in.m_bits;
            e.k = in.k;
            if (in.id >= by_id_.size() || by_id_[in.id] != UINT32_MAX)
                throw std::invalid_argument("spill_model: ids must be dense and unique");
            by_id_[in.id] = static_cast<uint32_t>(i);
            // alignment: base is a multiple of 2^m_bits by the sort order
            big_count mant = base >> e.m_bits;
            assert((mant << e.m_bits) == base);
            e.mant_off = static_cast<uint32_t>(pool_.size());
            size_t words = (bit_length(mant) + 63) / 64;
            pool_.resize(pool_.size() + std::max<size_t>(words, 2), 0);
            if (mant != 0) {
                size_t count = 0;
                mpz_export(pool_.data() + e.mant_off, &count, -1, 8, 0, 0, mant.get_mpz_t());
                assert(count <= std::max<size_t>(words, 2));
            }
            e.mant_len = static_cast<uint32_t>(std::max<size_t>(words, 2));
            base += mpz_from_u128(e.k) << e.m_bits;
        }
        total_ = base;
        if (prescribed) {
            env_ = *prescribed;
        } else {
            env_ = canon_mk(xfloat::from_big(total_).inflated(), rho);
        }
        big_count cover = big_count(env_.k) << env_.m_bits;
        if (total_ > cover) throw std::logic_error("spill_model: envelope too small");
        ew_ = static_cast<uint64_t>(env_.m_bits) + std::bit_width(env_.k);
        // direct-indexed bucket over the top bits of the code
        unsigned want = std::bit_width(entries_.size()) + 2;
        tb_ = static_cast<unsigned>(std::min<uint64_t>({want, ew_, 22}));
        bucket_.assign((size_t(1) << tb_) + 1, 0);
        uint64_t cut = ew_ - tb_;
        // key of each entry's base, then for each key the last entry that
        // starts strictly below the bucket (safe understart; decode scans up)
        std::vector<uint64_t> ekey(entries_.size());
        {
            big_count run = 0;
            for (size_t i = 0; i < entries_.size(); ++i) {
                big_count kk = run >> cut;
                ekey[i] = bit_length(kk) <= 64 ? mpz_get_ui(kk.get_mpz_t()) : ~uint64_t(0);
                run += mpz_from_u128(entries_[i].k) << entries_[i].m_bits;
            }
        }
        size_t idx = 0;
        for (uint64_t key = 0; key < (uint64_t(1) << tb_); ++key) {
            while (idx + 1 < entries_.size() && ekey[idx + 1] < key) ++idx;
            bucket_[key] = static_cast<uint32_t>(idx);
        }
    }

    const mk_size& envelope() const { return env_; }
    size_t support_size() const { return entries_.size(); }
    const big_count& exact_total() const { return total_; }

    int64_t entry_m(uint32_t id) const { return entries_[by_id_[id]].m_bits; }
    u128 entry_k(uint32_t id) const { return entries_[by_id_[id]].k; }

    // Build side: wrap an inner code for symbol `id`.
    code_blob wrap(uint32_t id, const code_blob& inner) const {
        const entry& e = entries_[by_id_[id]];
        if (inner.m_bits != e.m_bits || inner.k > e.k)
            throw std::logic_error("spill_model: inner code does not match the declared size");
        code_blob out;
        out.c = base_of_index(by_id_[id]) + inner.c;
        out.m_bits = env_.m_bits;
        out.k = env_.k;
        return out;
    }

    struct hit {
        uint32_t id;
        code_view inner;
    };

    // Decode one symbol from (memory region at view.offset, view.spill).
    hit decode(const bit_vec& mem, const code_view& view, probe_counter* pc) const {
        assert(view.m_bits == env_.m_bits && view.spill < env_.k);
        uint64_t spill = static_cast<uint64_t>(view.spill);
        size_t idx;
        if (entries_.size() == 1) {
            idx = 0;
        } else {
            uint64_t key = code_window(mem, view, spill, ew_ - tb_, tb_, pc);
            idx = bucket_[key];
            touch_table(pc, 0, key >> 1);
            while (idx + 1 < entries_.size() &&
                   code_ge(mem, view, spill, entries_[idx + 1], pc))
                ++idx;
        }
        const entry& e = entries_[idx];
        touch_table(pc, 1u << 23, idx);
        // q = (c - base) >> m, taken mod 2^128: the high parts agree.
        u128 a = 0;
        int64_t p = e.m_bits;
        uint64_t lo = code_window(mem, view, spill, p, 64, pc);
        uint64_t hi = code_window(mem, view, spill, p + 64, 64, pc);
        a = (u128(hi) << 64) | lo;
        u128 b = mant_low128(e);
        u128 q = a - b;  // mod 2^128
        if (q >= e.k) throw std::runtime_error("spill decode: corrupt structure");
        return {e.id, code_view{view.offset, e.m_bits, q}};
    }

private:
    struct entry {
        uint32_t id;
        int64_t m_bits;
        u128 k;
        uint32_t mant_off;
        uint32_t mant_len;
    };

    big_count base_of_index(size_t i) const {
        const entry& e = entries_[i];
        big_count mant = 0;
        mpz_import(mant.get_mpz_t(), e.mant_len, -1, 8, 0, 0, pool_.data() + e.mant_off);
        return mant << e.m_bits;
    }

    u128 mant_low128(const entry& e) const {
        u128 lo = pool_[e.mant_off];
        if (e.mant_len > 1) lo |= u128(pool_[e.mant_off + 1]) << 64;
        return lo;
    }

    void touch_table(probe_counter* pc, uint64_t zone, uint64_t cell) const {
        if (pc) pc->touch_cell(probe_counter::kTableRegion, (uid_ << 24) ^ zone ^ cell);
    }

    // Value of (c >> p_lo) & ((1<<len)-1) where c = spill*2^Mstar + region.
    uint64_t code_window(const bit_vec& mem, const code_view& view, uint64_t spill,
                         int64_t p_lo, unsigned len, probe_counter* pc) const {
        if (len == 0) return 0;
        assert(len <= 64);
        int64_t mstar = view.m_bits;
        uint64_t res = 0;
        if (p_lo < mstar) {
            unsigned from_mem = static_cast<unsigned>(std::min<int64_t>(len, mstar - p_lo));
            uint64_t abs = view.offset + static_cast<uint64_t>(p_lo);
            res = mem.get_bits(abs, from_mem);
            if (pc) pc->touch_bits(probe_counter::kMemRegion, abs, from_mem);
            if (from_mem < len) {
                uint64_t hi = spill & ((len - from_mem >= 64) ? ~uint64_t(0)
                                                              : ((uint64_t(1) << (len - from_mem)) - 1));
                res |= hi << from_mem;
            }
        } else {
            uint64_t sh = static_cast<uint64_t>(p_lo - mstar);
            uint64_t v = sh >= 64 ? 0 : (spill >> sh);
            res = (len >= 64) ? v : (v & ((uint64_t(1) << len) - 1));
        }
        return res;
    }

    // c >= base(e)? Compares the bits above e.m_bits chunkwise from the top.
    bool code_ge(const bit_vec& mem, const code_view& view, uint64_t spill, const entry& e,
                 probe_counter* pc) const {
        int64_t p_hi = static_cast<int64_t>(ew_);
        int64_t floor_p = e.m_bits;
        while (p_hi > floor_p) {
            unsigned len = static_cast<unsigned>(std::min<int64_t>(64, p_hi - floor_p));
            int64_t p_lo = p_hi - len;
            uint64_t cw = code_window(mem, view, spill, p_lo, len, pc);
            uint64_t bw = mant_window(e, p_lo - e.m_bits, len);
            touch_table(pc, 2u << 23, e.mant_off + static_cast<uint64_t>((p_lo - e.m_bits) >> 6));
            if (cw != bw) return cw > bw;
            p_hi = p_lo;
        }
        return true;
    }

    uint64_t mant_window(const entry& e, int64_t bit_lo, unsigned len) const {
        assert(bit_lo >= 0);
        uint64_t w = static_cast<uint64_t>(bit_lo) >> 6, off = static_cast<uint64_t>(bit_lo) & 63;
        uint64_t lo = w < e.mant_len ? pool_[e.mant_off + w] : 0;
        uint64_t hi = (w + 1) < e.mant_len ? pool_[e.mant_off + w + 1] : 0;
        uint64_t v = off ? ((lo >> off) | (hi << (64 - off))) : lo;
        return (len >= 64) ? v : (v & ((uint64_t(1) << len) - 1));
    }

    uint64_t uid_ = 0;
    std::vector<entry> entries_;
    std::vector<uint32_t> by_id_;
    std::vector<uint64_t> pool_;
    std::vector<uint32_t> bucket_;
    big_count total_ = 0;
    mk_size env_;
    uint64_t ew_ = 0;
    unsigned tb_ = 0;
};

// Write a blob out as (memory bits LSB-first, spill).
inline std::pair<bit_vec, uint64_t> materialize(const code_blob& blob) {
    bit_vec mem(static_cast<uint64_t>(blob.m_bits));
    for (int64_t t = 0; t < blob.m_bits; ++t)
        if (mpz_tstbit(blob.c.get_mpz_t(), static_cast<mp_bitcnt_t>(t))) mem.set(t, true);
    big_count sp = blob.c >> blob.m_bits;
    assert(bit_length(sp) <= 64);
    return {std::move(mem), mpz_get_ui(sp.get_mpz_t())};
}

}  // namespace srmq
