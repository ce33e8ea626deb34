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
#include <cassert>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace srmq {

// Packed bit sequence. Storage is 0-based little-endian within 64-bit
// words; the public rank/select interface is 1-based to match the rest
// of the toolkit. Bits past size() are kept zero.
class bit_vec {
public:
    bit_vec() = default;
    explicit bit_vec(uint64_t n_bits) : n_(n_bits), words_((n_bits + 63) / 64, 0) {}

    uint64_t size() const { return n_; }
    bool empty() const { return n_ == 0; }

    void resize(uint64_t n_bits) {
        n_ = n_bits;
        words_.assign((n_bits + 63) / 64, 0);
    }

    // 0-based accessors.
    bool get(uint64_t i) const {
        assert(i < n_);
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }
    void set(uint64_t i, bool v) {
        assert(i < n_);
        uint64_t mask = uint64_t(1) << (i & 63);
        if (v) words_[i >> 6] |= mask; else words_[i >> 6] &= ~mask;
    }

    // Reads up to 64 bits starting at 0-based position i (LSB = bit i).
    uint64_t get_bits(uint64_t i, unsigned len) const {
        assert(len <= 64);
        if (len == 0) return 0;
        uint64_t w = i >> 6, off = i & 63;
        uint64_t lo = words_[w] >> off;
        if (off + len > 64 && w + 1 < words_.size())
            lo |= words_[w + 1] << (64 - off);
        if (len == 64) return lo;
        return lo & ((uint64_t(1) << len) - 1);
    }

    void set_bits(uint64_t i, unsigned len, uint64_t v) {
        for (unsigned k = 0; k < len; ++k) set(i + k, (v >> k) & 1);
    }

    const std::vector<uint64_t>& words() const { return words_; }
    uint64_t word(size_t k) const { return k < words_.size() ? words_[k] : 0; }

    bool operator==(const bit_vec& o) const { return n_ == o.n_ && words_ == o.words_; }

    // Serialization: 8-byte little-endian length, then packed words LE.
    void save(std::ostream& os) const {
        uint64_t n = n_;
        os.write(reinterpret_cast<const char*>(&n), 8);
        if (!words_.empty())
            os.write(reinterpret_cast<const char*>(words_.data()),
                     static_cast<std::streamsize>(words_.size() * 8));
    }
    static bit_vec load(std::istream& is) {
        uint64_t n = 0;
        is.read(reinterpret_cast<char*>(&n), 8);
        if (!is) throw std::runtime_error("bit_vec: truncated header");
        bit_vec v(n);
        if (!v.words_.empty()) {
            is.read(reinterpret_cast<char*>(v.words_.data()),
                    static_cast<std::streamsize>(v.words_.size() * 8));
            if (!is) throw std::runtime_error("bit_vec: truncated payload");
        }
        return v;
    }

private:
    uint64_t n_ = 0;
    std::vector<uint64_t> words_;
};

// Append-only bit writer.
class bit_writer {
public:
    void push(bool b) {
        if (n_ == cap_) { words_.push_back(0); cap_ += 64; }
        if (b) words_[n_ >> 6] |= uint64_t(1) << (n_ & 63);
        ++n_;
    }
    void push_bits(uint64_t v, unsigned len) {
        for (unsigned k = 0; k < len; ++k) push((v >> k) & 1);
    }
    uint64_t size() const { return n_; }
    bit_vec take() const {
        bit_vec out(n_);
        for (uint64_t i = 0; i < n_; ++i)
            if ((words_[i >> 6] >> (i & 63)) & 1) out.set(i, true);
        return out;
    }

private:
    uint64_t n_ = 0, cap_ = 0;
    std::vector<uint64_t> words_;
};

// Sequential bit reader; throws on reads past the end.
class bit_reader {
public:
    explicit bit_reader(const bit_vec& v, uint64_t start = 0) : v_(&v), pos_(start) {}
    bool next() {
        if (pos_ >= v_->size()) throw std::runtime_error("bit_reader: past end");
        return v_->get(pos_++);
    }
    uint64_t next_bits(unsigned len) {
        uint64_t r = 0;
        for (unsigned k = 0; k < len; ++k) r |= uint64_t(next()) << k;
        return r;
    }
    uint64_t pos() const { return pos_; }
    bool at_end() const { return pos_ >= v_->size(); }

private:
    const bit_vec* v_;
    uint64_t pos_;
};

// Elias gamma: x >= 1 encoded as floor(log2 x) zeros, then x's bits from
// the MSB down. Length 2*floor(log2 x) + 1.
inline void gamma_write(bit_writer& w, uint64_t x) {
    if (x == 0) throw std::invalid_argument("gamma_write: x >= 1 required");
    unsigned lg = 63 - static_cast<unsigned>(std::countl_zero(x));
    for (unsigned k = 0; k < lg; ++k) w.push(false);
    for (unsigned k = 0; k <= lg; ++k) w.push((x >> (lg - k)) & 1);
}

inline uint64_t gamma_read(bit_reader& r) {
    unsigned lg = 0;
    while (!r.next()) {
        if (++lg > 63) throw std::runtime_error("gamma_read: malformed stream");
    }
    uint64_t x = 1;
    for (unsigned k = 0; k < lg; ++k) x = (x << 1) | uint64_t(r.next());
    return x;
}

inline unsigned gamma_length(uint64_t x) {
    unsigned lg = 63 - static_cast<unsigned>(std::countl_zero(x));
    return 2 * lg + 1;
}

// Two-level rank directory: superblocks of 512 bits, blocks of 64, plus
// word popcount. select walks the directory then the block.
class rank_select {
public:
    rank_select() = default;
    explicit rank_select(const bit_vec& v) : v_(&v) {
        uint64_t nw = (v.size() + 63) / 64;
        block_.resize(nw + 1, 0);
        super_.resize(nw / 8 + 2, 0);
        uint64_t acc = 0;
        for (uint64_t w = 0; w < nw; ++w) {
            if (w % 8 == 0) super_[w / 8] = acc;
            block_[w] = static_cast<uint16_t>(acc - super_[w / 8]);
            acc += static_cast<uint64_t>(std::popcount(v.word(w)));
        }
        if (nw % 8 == 0) super_[nw / 8] = acc;
        block_[nw] = static_cast<uint16_t>(acc - super_[nw / 8]);
        for (uint64_t sb = nw / 8 + 1; sb < super_.size(); ++sb) super_[sb] = acc;
        ones_ = acc;
    }

    uint64_t ones() const { return ones_; }
    uint64_t zeros() const { return v_->size() - ones_; }

    // #1s among positions 1..i (1-based, i <= size; i = 0 allowed).
    uint64_t rank1(uint64_t i) const {
        assert(i <= v_->size());
        if (i == 0) return 0;
        uint64_t p = i;  // count of leading bits, i.e. 0-based prefix length
        uint64_t w = p >> 6, rem = p & 63;
        uint64_t r = super_[w / 8] + block_[w];
        if (rem) r += static_cast<uint64_t>(std::popcount(v_->word(w) & ((rem == 64) ? ~uint64_t(0) : ((uint64_t(1) << rem) - 1))));
        return r;
    }
    uint64_t rank0(uint64_t i) const { return i - rank1(i); }

    static constexpr uint64_t npos = ~uint64_t(0);

    // Position (1-based) of the k-th 1; npos if k > ones().
    uint64_t select1(uint64_t k) const {
        if (k == 0 || k > ones_) return npos;
        // superblock search
        uint64_t lo = 0, hi = super_.size() - 1;
        while (lo < hi) {
            uint64_t mid = (lo + hi + 1) / 2;
            if (super_[mid] < k) lo = mid; else hi = mid - 1;
        }
        uint64_t w = lo * 8;
        uint64_t nw = (v_->size() + 63) / 64;
        while (w < nw) {
            uint64_t in_word = static_cast<uint64_t>(std::popcount(v_->word(w)));
            uint64_t before = super_[w / 8] + block_[w];
            if (before + in_word >= k) {
                uint64_t need = k - before;
                uint64_t word = v_->word(w);
                for (unsigned b = 0; b < 64; ++b) {
                    if ((word >> b) & 1) {
                        if (--need == 0) return w * 64 + b + 1;
                    }
                }
            }
            ++w;
        }
        return npos;
    }

    // Position (1-based) of the k-th 0; npos if k > zeros().
    uint64_t select0(uint64_t k) const {
        if (k == 0 || k > zeros()) return npos;
        uint64_t lo = 1, hi = v_->size();
        while (lo < hi) {
            uint64_t mid = (lo + hi) / 2;
            if (rank0(mid) >= k) hi = mid; else lo = mid + 1;
        }
        return lo;
    }

private:
    const bit_vec* v_ = nullptr;
    std::vector<uint64_t> super_;
    std::vector<uint16_t> block_;
    uint64_t ones_ = 0;
};

// Excess array of a parenthesis string: E[i] = opens - closes in the
// 1-based prefix 1..i. Convention: bit 1 = '(' , bit 0 = ')'.
inline std::vector<int64_t> excess_array(const bit_vec& parens) {
    std::vector<int64_t> e(parens.size());
    int64_t acc = 0;
    for (uint64_t i = 0; i < parens.size(); ++i) {
        acc += parens.get(i) ? 1 : -1;
        e[i] = acc;
    }
    return e;
}

inline bool is_balanced(const bit_vec& parens) {
    int64_t acc = 0;
    for (uint64_t i = 0; i < parens.size(); ++i) {
        acc += parens.get(i) ? 1 : -1;
        if (acc < 0) return false;
    }
    return acc == 0;
}

// Ground-truth matching-open finder via explicit stack simulation.
// i is a 1-based close position; returns the 1-based open position.
inline uint64_t findopen_oracle(const bit_vec& parens, uint64_t i) {
    if (i == 0 || i > parens.size() || parens.get(i - 1))
        throw std::invalid_argument("findopen_oracle: not a close position");
    std::vector<uint64_t> stack;
    for (uint64_t p = 1; p <= i; ++p) {
        if (parens.get(p - 1)) {
            stack.push_back(p);
        } else {
            if (stack.empty()) throw std::invalid_argument("findopen_oracle: unbalanced");
            uint64_t open = stack.back();
            stack.pop_back();
            if (p == i) return open;
        }
    }
    throw std::logic_error("findopen_oracle: unreachable");
}

inline bit_vec parens_from_string(const char* s) {
    uint64_t n = std::strlen(s);
    bit_vec v(n);
    for (uint64_t i = 0; i < n; ++i) v.set(i, s[i] == '(');
    return v;
}

}  // namespace srmq
