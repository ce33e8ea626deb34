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

#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "srmq/spill.hpp"

namespace srmq {

// Factorials as xfloats, extended on demand. Values are a pure function
// of the index (always built by sequential multiplication from 0!), so
// lookups are reproducible no matter the call order.
class factorial_table {
public:
    xfloat get(uint64_t n) {
        if (n >= tab_.size()) {
            if (tab_.empty()) tab_.push_back(xfloat::one());
            for (uint64_t i = tab_.size(); i <= n; ++i)
                tab_.push_back(tab_.back() * xfloat::from_u64(i));
        }
        return tab_[n];
    }
    xfloat binom(uint64_t n, uint64_t k) {
        if (k > n) return xfloat::zero();
        return get(n) / (get(k) * get(n - k));
    }

private:
    std::vector<xfloat> tab_;
};

inline factorial_table& global_factorials() {
    static factorial_table t;
    return t;
}

// ---------------------------------------------------------------------
// Pattern coder: a fixed-universe bit string with a known number of ones,
// spill-coded by balanced halving (one lemma application per split), with
// select1 answered by descending the splits. This is the select
// structure used for merge witnesses and for the public set-select.

class pattern_ctx {
public:
    explicit pattern_ctx(unsigned rho_w) : rho_w_(rho_w) {
        c_gamma_ = 2.0 * std::log2(1.0 + std::ldexp(1.0, -static_cast<int>(rho_w))) + 0x1p-26;
    }

    unsigned rho() const { return rho_w_; }

    // Advertised envelope of the pattern structure for (universe, ones).
    mk_size env(uint32_t u, uint32_t k) {
        if (u == 0 || k == 0 || k == u) return {0, 1};
        uint64_t key = (uint64_t(u) << 32) | k;
        auto it = env_.find(key);
        if (it != env_.end()) return it->second;
        xfloat v = global_factorials().binom(u, k) *
                   xfloat::exp2(c_gamma_ * static_cast<double>(u - 1));
        mk_size e = canon_mk(v.inflated(), rho_w_);
        env_.emplace(key, e);
        return e;
    }

    const spill_model& model(uint32_t u, uint32_t k) {
        uint64_t key = (uint64_t(u) << 32) | k;
        auto it = models_.find(key);
        if (it != models_.end()) return *it->second;
        uint32_t u1 = (u + 1) / 2, u2 = u - u1;
        uint32_t jmin = k > u2 ? k - u2 : 0;
        uint32_t jmax = std::min(k, u1);
        std::vector<spill_model::entry_in> in;
        for (uint32_t j = jmin; j <= jmax; ++j) {
            mk_size l = env(u1, j), r = env(u2, k - j);
            in.push_back({j - jmin, l.m_bits + r.m_bits, u128(l.k) * r.k});
        }
        mk_size e = env(u, k);
        auto m = std::make_unique<spill_model>(std::move(in), rho_w_, &e, key);
        if (models_.size() > 200000) models_.clear();  // bound the cache
        auto res = models_.emplace(key, std::move(m));
        return *res.first->second;
    }

    // sigma[begin .. begin+u) with k ones -> code blob.
    code_blob encode(const std::vector<bool>& sigma, uint32_t begin, uint32_t u, uint32_t k) {
        if (u == 0 || k == 0 || k == u) return {};
        uint32_t u1 = (u + 1) / 2, u2 = u - u1;
        uint32_t j = 0;
        for (uint32_t t = 0; t < u1; ++t) j += sigma[begin + t] ? 1 : 0;
        uint32_t jmin = k > u2 ? k - u2 : 0;
        code_blob lo = encode(sigma, begin, u1, j);
        code_blob hi = encode(sigma, begin + u1, u2, k - j);
        return model(u, k).wrap(j - jmin, combine(lo, hi));
    }

    // Position (1-based within the pattern) of the i-th one.
    uint64_t select1(const bit_vec& mem, const code_view& view, uint32_t u, uint32_t k,
                     uint32_t i, probe_counter* pc) {
        if (i == 0 || i > k) throw std::out_of_range("pattern select1: index out of range");
        uint64_t off = 0;
        code_view v = view;
        while (true) {
            if (k == u) return off + i;  // forced all-ones suffix of the descent
            if (u == 1) return off + 1;  // k == 1 here
            const spill_model& m = model(u, k);
            auto hit = m.decode(mem, v, pc);
            uint32_t u1 = (u + 1) / 2, u2 = u - u1;
            uint32_t jmin = k > u2 ? k - u2 : 0;
            uint32_t j = hit.id + jmin;
            mk_size le = env(u1, j);
            auto [vl, vr] = split(hit.inner, le.m_bits, le.k);
            if (i <= j) {
                v = vl; u = u1; k = j;
            } else {
                off += u1;
                i -= j;
                v = vr; u = u2; k = k - j;
            }
        }
    }

private:
    unsigned rho_w_;
    double c_gamma_;
    std::unordered_map<uint64_t, mk_size> env_;
    std::unordered_map<uint64_t, std::unique_ptr<spill_model>> models_;
};

// ---------------------------------------------------------------------
// Public single-application interface.

// Finite domain with exact rational probabilities p(x) = weight[x]/sum,
// a bit payload length M(x) and a spill universe K(x) per symbol, and a
// declared budget H with log2(1/p) + M + log2 K <= H for every x.
struct density_model {
    std::vector<big_count> weight;
    std::vector<uint64_t> m_bits;
    std::vector<uint64_t> k_uni;
    double declared_h = 0.0;

    size_t size() const { return weight.size(); }

    double tight_h() const {
        big_count sum = 0;
        for (const auto& w : weight) sum += w;
        long double h = 0;
        for (size_t x = 0; x < weight.size(); ++x) {
            long double t = log2_big(sum) - log2_big(weight[x]) +
                            static_cast<long double>(m_bits[x]) +
                            (k_uni[x] > 1 ? log2_big(big_count(k_uni[x])) : 0.0L);
            if (t > h) h = t;
        }
        return static_cast<double>(h);
    }

    void validate() const {
        if (weight.empty() || weight.size() != m_bits.size() || weight.size() != k_uni.size())
            throw std::invalid_argument("density_model: inconsistent arity");
        for (size_t x = 0; x < weight.size(); ++x) {
            if (weight[x] <= 0) throw std::invalid_argument("density_model: p(x) > 0 required");
            if (k_uni[x] == 0) throw std::invalid_argument("density_model: K(x) >= 1 required");
        }
        if (tight_h() > declared_h + 1e-9)
            throw std::invalid_argument("density_model: budget H violated");
    }
};

struct spill_rep {
    bit_vec memory;       // M* bits, LSB-first code order
    uint64_t spill = 0;   // in [0, k_star)
    uint64_t k_star = 1;

    double accounted_bits() const {
        return static_cast<double>(memory.size()) + std::log2(static_cast<double>(k_star));
    }
    uint64_t physical_bits() const {
        return memory.size() + (k_star > 1 ? std::bit_width(k_star - 1) : 0);
    }
};

// One lemma application over a validated model.
class spill_codec {
public:
    spill_codec(density_model model, uint64_t r) : dm_(std::move(model)), r_(r) {
        dm_.validate();
        if (r_ == 0) throw std::invalid_argument("spill_codec: r >= 1 required");
        unsigned rho = static_cast<unsigned>(std::bit_width(r_) - 1);
        std::vector<spill_model::entry_in> in;
        for (size_t x = 0; x < dm_.size(); ++x)
            in.push_back({static_cast<uint32_t>(x), static_cast<int64_t>(dm_.m_bits[x]),
                          u128(dm_.k_uni[x])});
        sm_ = std::make_unique<spill_model>(std::move(in), rho, nullptr);
    }

    const density_model& model() const { return dm_; }
    const mk_size& envelope() const { return sm_->envelope(); }

    spill_rep encode(uint32_t x, const bit_vec& y_m, uint64_t y_k) const {
        if (x >= dm_.size()) throw std::out_of_range("spill_encode: bad symbol");
        if (y_m.size() != dm_.m_bits[x]) throw std::invalid_argument("spill_encode: |y_M| != M(x)");
        if (y_k >= dm_.k_uni[x]) throw std::out_of_range("spill_encode: y_K out of range");
        code_blob inner;
        inner.m_bits = static_cast<int64_t>(dm_.m_bits[x]);
        inner.k = dm_.k_uni[x];
        big_count mem_val = 0;
        for (uint64_t t = y_m.size(); t-- > 0;) {
            mem_val <<= 1;
            if (y_m.get(t)) mem_val |= 1;
        }
        inner.c = (big_count(y_k) << inner.m_bits) + mem_val;
        code_blob out = sm_->wrap(x, inner);
        auto [mem, sp] = materialize(out);
        return {std::move(mem), sp, sm_->envelope().k};
    }

    struct decoded {
        uint32_t x;
        bit_vec y_m;
        uint64_t y_k;
    };

    decoded decode(const spill_rep& rep, probe_counter* pc = nullptr) const {
        if (rep.memory.size() != static_cast<uint64_t>(sm_->envelope().m_bits) ||
            rep.spill >= sm_->envelope().k)
            throw std::runtime_error("spill_decode: corrupt representation");
        code_view v{0, sm_->envelope().m_bits, rep.spill};
        auto hit = sm_->decode(rep.memory, v, pc);
        decoded out;
        out.x = hit.id;
        out.y_k = static_cast<uint64_t>(hit.inner.spill);
        uint64_t m = dm_.m_bits[hit.id];
        out.y_m = bit_vec(m);
        for (uint64_t t = 0; t < m; ++t) out.y_m.set(t, rep.memory.get(t));
        if (pc) pc->touch_bits(probe_counter::kMemRegion, 0, m);
        return out;
    }

private:
    density_model dm_;
    uint64_t r_;
    std::unique_ptr<spill_model> sm_;
};

// ---------------------------------------------------------------------
// Set-select: S as a subset of [u] stored at log2 binom(u,|S|) + 4/r
// accounted bits, select(i) = i-th smallest element by pattern descent.

struct set_select_rep {
    uint32_t universe = 0;
    uint32_t count = 0;
    uint64_t r = 1;
    mk_size env;
    bit_vec memory;
    uint64_t spill = 0;

    double accounted_bits() const { return env.bits(); }
};

inline unsigned set_select_rho(uint32_t u, uint64_t r) {
    unsigned base = static_cast<unsigned>(std::bit_width(r) - 1);
    unsigned uu = std::max<uint32_t>(u, 1);
    return base + static_cast<unsigned>(std::bit_width(uint64_t(2 * uu) - 1));
}

inline set_select_rep set_select_build(const std::vector<uint32_t>& sorted_elems, uint32_t u,
                                       uint64_t r) {
    set_select_rep rep;
    rep.universe = u;
    rep.count = static_cast<uint32_t>(sorted_elems.size());
    rep.r = r;
    std::vector<bool> bits(u, false);
    for (uint32_t e : sorted_elems) {
        if (e < 1 || e > u) throw std::out_of_range("set_select_build: element outside [u]");
        bits[e - 1] = true;
    }
    pattern_ctx ctx(set_select_rho(u, r));
    code_blob blob = ctx.encode(bits, 0, u, rep.count);
    rep.env = ctx.env(u, rep.count);
    // pad to the advertised envelope
    code_blob padded{blob.c, rep.env.m_bits, rep.env.k};
    auto [mem, sp] = materialize(padded);
    rep.memory = std::move(mem);
    rep.spill = sp;
    return rep;
}

inline uint32_t set_select(const set_select_rep& rep, uint32_t i, probe_counter* pc = nullptr) {
    if (i == 0 || i > rep.count) throw std::out_of_range("set_select: i out of range");
    pattern_ctx ctx(set_select_rho(rep.universe, rep.r));
    code_view v{0, rep.env.m_bits, rep.spill};
    return static_cast<uint32_t>(ctx.select1(rep.memory, v, rep.universe, rep.count, i, pc));
}

}  // namespace srmq
