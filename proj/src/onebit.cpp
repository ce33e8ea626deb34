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

#include "srmq/onebit.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <tuple>

#include "srmq/catalan.hpp"

namespace srmq {

namespace {

inline bool valid_label(uint32_t s, uint32_t x, uint32_t y) {
    if (x < 1 || y < 1 || x + y > s + 1) return false;
    if (s == 1) return x == 1 && y == 1;
    return x + y >= 3;  // both chains end at the unique minimum
}

}  // namespace

big_count count_n(uint32_t s, uint32_t phi_l, uint32_t phi_r) {
    if (s == 0) throw std::invalid_argument("count_n: s >= 1 required");
    if (!valid_label(s, phi_l, phi_r)) return 0;
    if (s == 1) return 1;
    // The two chains share exactly the minimum; cutting the word at the
    // minimum turns the pair of spines into l+r-2 forest roots.
    return mfold_or_zero(phi_l + phi_r - 2, s - 1);
}

bool mergeable(std::pair<uint32_t, uint32_t> phi, std::pair<uint32_t, uint32_t> phi_1,
               std::pair<uint32_t, uint32_t> phi_2) {
    // case A: minimum inside the left child
    if (phi.first == phi_1.first && phi.second > phi_2.second &&
        phi.second <= phi_1.second + phi_2.second)
        return true;
    // case B: minimum inside the right child
    if (phi.second == phi_2.second && phi.first > phi_1.first &&
        phi.first <= phi_1.first + phi_2.first)
        return true;
    return false;
}

big_count merge_count_or_zero(std::pair<uint32_t, uint32_t> phi,
                              std::pair<uint32_t, uint32_t> phi_1,
                              std::pair<uint32_t, uint32_t> phi_2) {
    if (phi.first == phi_1.first && phi.second > phi_2.second &&
        phi.second <= phi_1.second + phi_2.second) {
        uint32_t e = phi.second - phi_2.second;  // trailing left-chain run
        return binomial(phi_1.second - e + phi_2.first - 1, phi_2.first - 1);
    }
    if (phi.second == phi_2.second && phi.first > phi_1.first &&
        phi.first <= phi_1.first + phi_2.first) {
        uint32_t e = phi.first - phi_1.first;
        return binomial(phi_2.first - e + phi_1.second - 1, phi_1.second - 1);
    }
    return 0;
}

big_count merge_count(std::pair<uint32_t, uint32_t> phi, std::pair<uint32_t, uint32_t> phi_1,
                      std::pair<uint32_t, uint32_t> phi_2) {
    if (!mergeable(phi, phi_1, phi_2))
        throw std::invalid_argument("merge_count: labels not mergeable");
    return merge_count_or_zero(phi, phi_1, phi_2);
}

// ---------------------------------------------------------------------

namespace {

struct label {
    uint32_t l = 0, r = 0;
};

struct xinfo {
    bool case_b = false;
    uint32_t e = 0, n0 = 0;
    mk_size left_env, tiny_env;
    label lchild;
};

struct node_model {
    std::unique_ptr<spill_model> app;
    std::vector<xinfo> xs;
    std::unordered_map<uint64_t, uint32_t> id_of;  // packed (case,e,n0)
};

struct tinfo {
    mk_size right_env, pat_env;
    uint32_t pat_u = 0, pat_k = 0;
    label rchild;
};

struct tiny_model {
    std::unique_ptr<spill_model> app;
    uint32_t n1_min = 0;
    std::vector<tinfo> ts;
};

struct tiny_spec {
    bool case_b;
    uint32_t s;          // node size (fixes the pattern rho)
    uint32_t b;          // right child size
    uint32_t rho_label;  // phi''_r
    uint32_t j;          // free zeros in the witness prefix
    uint32_t e;          // trailing-run length (case B needs it for the range)

    bool operator<(const tiny_spec& o) const {
        return std::tie(case_b, s, b, rho_label, j, e) <
               std::tie(o.case_b, o.s, o.b, o.rho_label, o.j, o.e);
    }
};

inline uint64_t pack_x(bool case_b, uint32_t e, uint32_t n0) {
    return (uint64_t(case_b) << 62) | (uint64_t(e) << 31) | n0;
}

inline uint64_t pack_slr(uint32_t s, uint32_t l, uint32_t r) {
    return (uint64_t(s) << 42) | (uint64_t(l) << 21) | r;
}

inline uint32_t left_len(uint32_t s) { return (s + 1) / 2; }

}  // namespace

// Input-independent tables for one (n, r); shared between builds, loads
// and queries of the same n. Model construction is lazy and guarded by a
// mutex; entries are immutable once inserted.
struct onebit_ctx {
    uint32_t n;
    uint64_t r;
    unsigned rho;
    double beta;        // per-element envelope inflation exponent
    double delta_root;  // extra slack in the root label envelopes

    std::mutex mu;
    std::unordered_map<uint64_t, mk_size> env_cache;
    std::unordered_map<uint64_t, std::unique_ptr<node_model>> node_cache;
    std::map<tiny_spec, std::unique_ptr<tiny_model>> tiny_cache;
    std::map<unsigned, std::unique_ptr<pattern_ctx>> pat_ctxs;
    std::unique_ptr<spill_model> root_l;
    std::map<uint32_t, std::unique_ptr<spill_model>> root_r;

    explicit onebit_ctx(uint32_t n_) : n(n_) {
        uint64_t want = 8ull * std::max<uint32_t>(n, 1);
        rho = static_cast<unsigned>(std::bit_width(want - 1));
        r = uint64_t(1) << rho;  // 8n rounded up to a power of two
        double slack = std::log2(1.0 + std::ldexp(1.0, -static_cast<int>(rho)));
        beta = 6.0 / static_cast<double>(r);  // covers 4 canon slacks + margins per node
        delta_root = 2.0 * slack + 0x1p-25;
    }

    unsigned rho_w(uint32_t s) const {
        return rho + static_cast<unsigned>(std::bit_width(uint64_t(2 * std::max<uint32_t>(s, 1)) - 1));
    }

    pattern_ctx& pat(uint32_t s) {
        unsigned rw = rho_w(s);
        auto it = pat_ctxs.find(rw);
        if (it == pat_ctxs.end())
            it = pat_ctxs.emplace(rw, std::make_unique<pattern_ctx>(rw)).first;
        return *it->second;
    }

    xfloat mfxf(uint32_t m, uint32_t u) {
        if (m == 0) return u == 0 ? xfloat::one() : xfloat::zero();
        if (m > u) return xfloat::zero();
        factorial_table& f = global_factorials();
        return f.binom(2 * u - m, u) * xfloat::from_u64(m) / xfloat::from_u64(2 * u - m);
    }

    // Advertised envelope of the representation of an s-array with label
    // (x, y): canon(N * 2^(beta (s-1))).
    mk_size node_env(uint32_t s, uint32_t x, uint32_t y) {
        if (s == 1) return {0, 1};
        uint64_t key = pack_slr(s, x, y);
        auto it = env_cache.find(key);
        if (it != env_cache.end()) return it->second;
        xfloat nn = mfxf(x + y - 2, s - 1);
        if (nn.is_zero()) throw std::logic_error("node_env: empty label class");
        xfloat v = nn * xfloat::exp2(beta * static_cast<double>(s - 1));
        mk_size e = canon_mk(v.inflated(), rho);
        env_cache.emplace(key, e);
        return e;
    }

    xfloat env_val(const mk_size& e) const { return e.value_xf(); }

    // Weight table of the inner (n1, pattern) application for one
    // (case, e, n0) slot. `fill` also materializes the per-n1 metadata.
    xfloat tiny_sum(const tiny_spec& spec, std::vector<spill_model::entry_in>* fill,
                    std::vector<tinfo>* info, uint32_t* n1_min_out) {
        uint32_t b = spec.b, rho_l = spec.rho_label;
        uint32_t lo, hi;
        if (!spec.case_b) {
            lo = 1;
            hi = b + 1 >= rho_l ? b + 1 - rho_l : 0;
        } else {
            lo = std::max<uint32_t>(spec.e, 1);
            hi = b + 1 >= rho_l ? b + 1 - rho_l : 0;
        }
        pattern_ctx& pc = pat(spec.s);
        xfloat sum = xfloat::zero();
        uint32_t n1_min = 0;
        for (uint32_t n1 = lo; n1 <= hi; ++n1) {
            if (!valid_label(b, n1, rho_l)) continue;
            if (n1_min == 0) n1_min = n1;
            mk_size re = node_env(b, n1, rho_l);
            uint32_t ones = spec.case_b ? n1 - spec.e : n1 - 1;
            uint32_t u = spec.j + ones;
            mk_size pe = pc.env(u, ones);
            sum += env_val(re) * env_val(pe);
            if (fill) {
                fill->push_back({n1 - n1_min, re.m_bits + pe.m_bits, u128(re.k) * pe.k});
                info->push_back({re, pe, u, ones, label{n1, rho_l}});
            }
        }
        if (n1_min_out) *n1_min_out = n1_min;
        return sum;
    }

    const tiny_model& tiny(const tiny_spec& spec) {
        auto it = tiny_cache.find(spec);
        if (it != tiny_cache.end()) return *it->second;
        auto tm = std::make_unique<tiny_model>();
        std::vector<spill_model::entry_in> in;
        xfloat sum = tiny_sum(spec, &in, &tm->ts, &tm->n1_min);
        if (in.empty()) throw std::logic_error("tiny model: empty support");
        mk_size env = canon_mk(sum.inflated(), rho);
        uint64_t uid = 0x517e0000u ^ (uint64_t(spec.b) << 18) ^ (spec.rho_label << 4) ^ spec.j;
        tm->app = std::make_unique<spill_model>(std::move(in), rho, &env, uid);
        return *tiny_cache.emplace(spec, std::move(tm)).first->second;
    }

    const node_model& node(uint32_t s, uint32_t l, uint32_t rr) {
        uint64_t key = pack_slr(s, l, rr);
        auto it = node_cache.find(key);
        if (it != node_cache.end()) return *it->second;
        uint32_t a = left_len(s), b = s - a;
        auto nm = std::make_unique<node_model>();
        std::vector<spill_model::entry_in> in;
        uint32_t id = 0;
        auto add = [&](bool case_b, uint32_t e, uint32_t n0, uint32_t lc_l) {
            if (!valid_label(a, lc_l, n0)) return;
            tiny_spec spec{case_b, s, b, case_b ? rr : rr - e, case_b ? n0 - 1 : n0 - e, e};
            xfloat sum = tiny_sum(spec, nullptr, nullptr, nullptr);
            if (sum.is_zero()) return;  // no right label fits this slot
            mk_size te = canon_mk(sum.inflated(), rho);
            mk_size le = node_env(a, lc_l, n0);
            in.push_back({id, le.m_bits + te.m_bits, u128(le.k) * te.k});
            nm->xs.push_back({case_b, e, n0, le, te, label{lc_l, n0}});
            nm->id_of.emplace(pack_x(case_b, e, n0), id);
            ++id;
        };
        // case A: trailing zeros, phi' = (l, n0), phi'' = (n1, r-e)
        if (l <= a) {
            for (uint32_t e = 1; e + 1 <= rr; ++e) {
                if (rr - e > b) continue;  // right child cannot carry phi''_r
                for (uint32_t n0 = std::max<uint32_t>(e, 1); l + n0 <= a + 1; ++n0)
                    add(false, e, n0, l);
            }
        }
        // case B: trailing ones, phi' = (l-e, n0), phi'' = (n1, r)
        if (rr <= b) {
            for (uint32_t e = 1; e + 1 <= l; ++e) {
                for (uint32_t n0 = 1; (l - e) + n0 <= a + 1; ++n0)
                    add(true, e, n0, l - e);
            }
        }
        if (in.empty()) throw std::logic_error("node model: empty support");
        mk_size env = node_env(s, l, rr);
        nm->app = std::make_unique<spill_model>(std::move(in), rho, &env, key);
        return *node_cache.emplace(key, std::move(nm)).first->second;
    }

    // Root label envelopes: closed-form upper bound so the l-model does
    // not need every row.
    mk_size root_env_r(uint32_t l) {
        xfloat v = mfxf(l, n) * xfloat::exp2(beta * static_cast<double>(n - 1) + delta_root);
        return canon_mk(v.inflated(), rho);
    }

    const spill_model& root_l_model() {
        if (root_l) return *root_l;
        std::vector<spill_model::entry_in> in;
        for (uint32_t l = 1; l <= n; ++l) {
            mk_size e = root_env_r(l);
            in.push_back({l - 1, e.m_bits, e.k});
        }
        root_l = std::make_unique<spill_model>(std::move(in), rho, nullptr, 0x0007ul);
        return *root_l;
    }

    const spill_model& root_r_model(uint32_t l) {
        auto it = root_r.find(l);
        if (it != root_r.end()) return *it->second;
        std::vector<spill_model::entry_in> in;
        uint32_t rmin = root_rmin(l);
        for (uint32_t rr = rmin; l + rr <= n + 1; ++rr) {
            if (!valid_label(n, l, rr)) continue;
            mk_size e = node_env(n, l, rr);
            in.push_back({rr - rmin, e.m_bits, e.k});
        }
        mk_size env = root_env_r(l);
        auto m = std::make_unique<spill_model>(std::move(in), rho, &env, 0x0008ul ^ (uint64_t(l) << 8));
        return *root_r.emplace(l, std::move(m)).first->second;
    }

    uint32_t root_rmin(uint32_t l) const {
        if (n == 1) return 1;
        return l >= 2 ? 1 : 2;
    }
};

namespace {

// Registry of contexts by n; builds, loads and queries of equal n share
// their model tables.
std::shared_ptr<onebit_ctx> ctx_for(uint32_t n) {
    static std::mutex mu;
    static std::map<uint32_t, std::weak_ptr<onebit_ctx>> reg;
    std::lock_guard<std::mutex> lk(mu);
    auto& slot = reg[n];
    if (auto p = slot.lock()) return p;
    auto p = std::make_shared<onebit_ctx>(n);
    slot = p;
    return p;
}

struct enc_result {
    code_blob blob;
    std::vector<int32_t> lchain;  // prefix-minima values, decreasing
    std::vector<int32_t> rchain;  // suffix-minima values, decreasing
};

enc_result encode_node(onebit_ctx& ctx, const std::vector<int32_t>& ca, uint32_t lo, uint32_t hi) {
    if (lo == hi) {
        int32_t v = ca[lo - 1];
        return {code_blob{}, {v}, {v}};
    }
    uint32_t s = hi - lo + 1;
    uint32_t mid = lo + left_len(s) - 1;
    enc_result el = encode_node(ctx, ca, lo, mid);
    enc_result er = encode_node(ctx, ca, mid + 1, hi);

    // merge witness: left suffix chain (0) vs right prefix chain (1),
    // sorted by decreasing value
    const std::vector<int32_t>& zs = el.rchain;
    const std::vector<int32_t>& os = er.lchain;
    uint32_t n0 = static_cast<uint32_t>(zs.size());
    uint32_t n1 = static_cast<uint32_t>(os.size());
    std::vector<bool> sigma;
    sigma.reserve(n0 + n1);
    {
        uint32_t i = 0, j = 0;
        while (i < n0 || j < n1) {
            if (j >= n1 || (i < n0 && zs[i] > os[j])) {
                sigma.push_back(false);
                ++i;
            } else {
                sigma.push_back(true);
                ++j;
            }
        }
    }
    bool case_b = sigma.back();  // minimum on the right iff last is a one
    uint32_t e = 1;
    while (e < sigma.size() && sigma[sigma.size() - 1 - e] == case_b) ++e;

    // parent chains
    int32_t min_l = zs.back(), min_r = os.back();
    enc_result out;
    out.lchain = el.lchain;
    for (int32_t v : os)
        if (v < min_l) out.lchain.push_back(v);
    out.rchain = er.rchain;
    for (int32_t v : zs)
        if (v < min_r) out.rchain.push_back(v);

    uint32_t phi_l = static_cast<uint32_t>(out.lchain.size());
    uint32_t phi_r = static_cast<uint32_t>(out.rchain.size());
    uint32_t lc_l = static_cast<uint32_t>(el.lchain.size());
    uint32_t rc_r = static_cast<uint32_t>(er.rchain.size());

    const node_model& nm = ctx.node(s, phi_l, phi_r);
    auto idit = nm.id_of.find(pack_x(case_b, e, n0));
    if (idit == nm.id_of.end()) throw std::logic_error("onebit build: slot not in model");
    uint32_t id = idit->second;

    tiny_spec spec{case_b, s, s - left_len(s), case_b ? phi_r : phi_r - e,
                   case_b ? n0 - 1 : n0 - e, e};
    const tiny_model& tm = ctx.tiny(spec);
    uint32_t tid = n1 - tm.n1_min;

    uint32_t ones = case_b ? n1 - e : n1 - 1;
    uint32_t u = spec.j + ones;
    std::vector<bool> prefix(sigma.begin(), sigma.begin() + u);
    code_blob pat = ctx.pat(s).encode(prefix, 0, u, ones);

    // chain-length bookkeeping must agree with the label algebra
    assert(case_b ? (phi_r == rc_r && phi_l == lc_l + e) : (phi_l == lc_l && phi_r == rc_r + e));
    (void)lc_l;
    (void)rc_r;

    code_blob tblob = tm.app->wrap(tid, combine(er.blob, pat));
    out.blob = nm.app->wrap(id, combine(el.blob, tblob));
    return out;
}

}  // namespace

onebit_rmq onebit_rmq::build(const value_array& a) {
    onebit_rmq ds;
    ds.n_ = static_cast<uint32_t>(a.size());
    if (ds.n_ == 0) throw std::invalid_argument("onebit build: empty array");
    ds.ctx_ = ctx_for(ds.n_);
    onebit_ctx& ctx = *ds.ctx_;
    ds.r_ = ctx.r;
    std::lock_guard<std::mutex> lk(ctx.mu);

    if (ds.n_ == 1) {
        ds.env_ = {0, 1};
        ds.memory_ = bit_vec(0);
        ds.spill_ = 0;
        return ds;
    }

    tree_shape t = build_cartesian(a);
    value_array canon = canonical_array(t);
    std::vector<int32_t> ca(canon.size());
    for (size_t i = 0; i < canon.size(); ++i) ca[i] = static_cast<int32_t>(canon[i]);

    enc_result root = encode_node(ctx, ca, 1, ds.n_);
    uint32_t l = static_cast<uint32_t>(root.lchain.size());
    uint32_t rr = static_cast<uint32_t>(root.rchain.size());

    const spill_model& mr = ctx.root_r_model(l);
    code_blob b1 = mr.wrap(rr - ctx.root_rmin(l), root.blob);
    const spill_model& ml = ctx.root_l_model();
    code_blob b0 = ml.wrap(l - 1, b1);

    ds.env_ = ml.envelope();
    auto [mem, sp] = materialize(b0);
    ds.memory_ = std::move(mem);
    ds.spill_ = sp;
    return ds;
}

double onebit_rmq::accounted_bits() const {
    return static_cast<double>(env_.m_bits) + std::log2(static_cast<double>(env_.k));
}

uint64_t onebit_rmq::physical_payload_bits() const {
    return memory_.size() + (env_.k > 1 ? std::bit_width(env_.k - 1) : 0);
}

// ---------------------------------------------------------------------
// Query machinery.

namespace {

struct cursor {
    uint32_t lo, hi;
    label phi;
    code_view view;
};

struct parts1 {
    const xinfo* x;
    code_view left_view, tiny_view;
};

struct parts2 {
    const tinfo* t;
    uint32_t n1;
    code_view right_view, pat_view;
};

struct query_env {
    onebit_ctx* ctx;
    const bit_vec* mem;
    probe_counter* pc;

    parts1 step1(const cursor& c) const {
        const node_model& nm = ctx->node(c.hi - c.lo + 1, c.phi.l, c.phi.r);
        auto hit = nm.app->decode(*mem, c.view, pc);
        const xinfo& x = nm.xs[hit.id];
        auto [vl, vt] = split(hit.inner, x.left_env.m_bits, x.left_env.k);
        return {&x, vl, vt};
    }

    parts2 step2(const cursor& c, const parts1& p) const {
        uint32_t s = c.hi - c.lo + 1;
        tiny_spec spec{p.x->case_b, s, s - left_len(s),
                       p.x->case_b ? c.phi.r : c.phi.r - p.x->e,
                       p.x->case_b ? p.x->n0 - 1 : p.x->n0 - p.x->e, p.x->e};
        const tiny_model& tm = ctx->tiny(spec);
        auto hit = tm.app->decode(*mem, p.tiny_view, pc);
        const tinfo& t = tm.ts[hit.id];
        auto [vr, vp] = split(hit.inner, t.right_env.m_bits, t.right_env.k);
        return {&t, tm.n1_min + hit.id, vr, vp};
    }

    cursor left_child(const cursor& c, const parts1& p) const {
        uint32_t mid = c.lo + left_len(c.hi - c.lo + 1) - 1;
        return {c.lo, mid, p.x->lchild, p.left_view};
    }
    cursor right_child(const cursor& c, const parts2& p) const {
        uint32_t mid = c.lo + left_len(c.hi - c.lo + 1) - 1;
        return {mid + 1, c.hi, p.t->rchild, p.right_view};
    }

    // #{ i : suffix-chain position i >= qa } within the node.
    uint32_t find_a(const cursor& c, uint32_t qa) const {
        if (c.lo == c.hi) return 1;
        parts1 p = step1(c);
        uint32_t mid = c.lo + left_len(c.hi - c.lo + 1) - 1;
        uint32_t r_rson = p.x->case_b ? c.phi.r : c.phi.r - p.x->e;
        if (qa > mid) return find_a(right_child(c, step2(c, p)), qa);
        uint32_t o = find_a(left_child(c, p), qa);
        uint32_t corr = p.x->n0 + r_rson - c.phi.r;  // overlap of child chains
        uint32_t kept = o > corr ? o - corr : 0;
        return kept + r_rson;
    }

    // Position of the a1-th suffix-chain element.
    uint32_t find_a_pos(const cursor& c, uint32_t a1) const {
        if (c.lo == c.hi) return c.lo;
        parts1 p = step1(c);
        uint32_t r_rson = p.x->case_b ? c.phi.r : c.phi.r - p.x->e;
        if (a1 <= r_rson) return find_a_pos(right_child(c, step2(c, p)), a1);
        return find_a_pos(left_child(c, p), a1 + p.x->n0 - c.phi.r);
    }

    uint32_t find_b(const cursor& c, uint32_t qb) const {
        if (c.lo == c.hi) return 1;
        parts1 p = step1(c);
        uint32_t mid = c.lo + left_len(c.hi - c.lo + 1) - 1;
        uint32_t l_lson = p.x->lchild.l;
        if (qb <= mid) return find_b(left_child(c, p), qb);
        parts2 q = step2(c, p);
        uint32_t o = find_b(right_child(c, q), qb);
        uint32_t corr = l_lson + q.n1 - c.phi.l;
        uint32_t kept = o > corr ? o - corr : 0;
        return kept + l_lson;
    }

    uint32_t find_b_pos(const cursor& c, uint32_t b1) const {
        if (c.lo == c.hi) return c.lo;
        parts1 p = step1(c);
        uint32_t l_lson = p.x->lchild.l;
        if (b1 <= l_lson) return find_b_pos(left_child(c, p), b1);
        parts2 q = step2(c, p);
        return find_b_pos(right_child(c, q), b1 + q.n1 - c.phi.l);
    }

    // Position (1-based in the witness) of the b1-th one.
    uint64_t witness_select(const cursor& c, const parts1& p, const parts2& q, uint32_t b1) const {
        uint32_t s = c.hi - c.lo + 1;
        uint32_t n0 = p.x->n0, n1 = q.n1, e = p.x->e;
        if (!p.x->case_b) {
            if (b1 == n1) return uint64_t(n0) + n1 - e;
            return ctx->pat(s).select1(*mem, q.pat_view, q.t->pat_u, q.t->pat_k, b1, pc);
        }
        if (b1 > n1 - e) return uint64_t(n0) + (n1 - e) + (b1 - (n1 - e));
        return ctx->pat(s).select1(*mem, q.pat_view, q.t->pat_u, q.t->pat_k, b1, pc);
    }
};

}  // namespace

namespace {

struct straddle_state {
    cursor c;
    parts1 p;
    parts2 q;
    cursor cp, cq;
    uint32_t a1, b1;
};

straddle_state descend_to_straddle(query_env& qe, const onebit_rmq& ds, uint32_t mstar,
                                   uint64_t spill, uint32_t n, uint32_t a, uint32_t b) {
    onebit_ctx& ctx = *qe.ctx;
    code_view top{0, static_cast<int64_t>(mstar), spill};
    const spill_model& ml = ctx.root_l_model();
    auto hl = ml.decode(*qe.mem, top, qe.pc);
    uint32_t l = hl.id + 1;
    const spill_model& mr = ctx.root_r_model(l);
    auto hr = mr.decode(*qe.mem, hl.inner, qe.pc);
    uint32_t rr = hr.id + ctx.root_rmin(l);
    (void)ds;

    cursor c{1, n, label{l, rr}, hr.inner};
    while (true) {
        uint32_t s = c.hi - c.lo + 1;
        uint32_t mid = c.lo + left_len(s) - 1;
        if (b <= mid) {
            parts1 p = qe.step1(c);
            c = qe.left_child(c, p);
        } else if (a > mid) {
            parts1 p = qe.step1(c);
            c = qe.right_child(c, qe.step2(c, p));
        } else {
            straddle_state st;
            st.c = c;
            st.p = qe.step1(c);
            st.q = qe.step2(c, st.p);
            st.cp = qe.left_child(c, st.p);
            st.cq = qe.right_child(c, st.q);
            st.a1 = qe.find_a(st.cp, a);
            st.b1 = qe.find_b(st.cq, b);
            return st;
        }
    }
}

}  // namespace

uint32_t onebit_rmq::query(uint32_t a, uint32_t b, probe_counter* pc) const {
    if (a < 1 || a > b || b > n_) throw std::out_of_range("onebit query: bad range");
    if (a == b) return a;
    onebit_ctx& ctx = *ctx_;
    std::lock_guard<std::mutex> lk(ctx.mu);
    query_env qe{&ctx, &memory_, pc};
    straddle_state st = descend_to_straddle(qe, *this, memory_.size(), spill_, n_, a, b);
    uint64_t sel = qe.witness_select(st.c, st.p, st.q, st.b1);
    if (sel >= uint64_t(st.a1) + st.b1) return qe.find_b_pos(st.cq, st.b1);
    return qe.find_a_pos(st.cp, st.a1);
}

onebit_rmq::relocation onebit_rmq::relocate(uint32_t a, uint32_t b, probe_counter* pc) const {
    if (a < 1 || a >= b || b > n_) throw std::out_of_range("onebit relocate: need a < b");
    onebit_ctx& ctx = *ctx_;
    std::lock_guard<std::mutex> lk(ctx.mu);
    query_env qe{&ctx, &memory_, pc};
    straddle_state st = descend_to_straddle(qe, *this, memory_.size(), spill_, n_, a, b);
    return {st.c.lo, st.c.hi, st.a1, st.b1};
}

// ---------------------------------------------------------------------
// Serialization: "SRMQ", u32 version, u8 kind=1, u64 n, u64 r, root rep.

void onebit_rmq::save(std::ostream& os) const {
    os.write("SRMQ", 4);
    uint32_t version = 1;
    os.write(reinterpret_cast<const char*>(&version), 4);
    uint8_t kind = 1;
    os.write(reinterpret_cast<const char*>(&kind), 1);
    uint64_t n64 = n_;
    os.write(reinterpret_cast<const char*>(&n64), 8);
    os.write(reinterpret_cast<const char*>(&r_), 8);
    uint64_t mstar = memory_.size(), kstar = env_.k;
    os.write(reinterpret_cast<const char*>(&mstar), 8);
    os.write(reinterpret_cast<const char*>(&kstar), 8);
    os.write(reinterpret_cast<const char*>(&spill_), 8);
    memory_.save(os);
}

onebit_rmq onebit_rmq::load(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "SRMQ", 4) != 0) throw std::runtime_error("onebit load: bad magic");
    uint32_t version = 0;
    is.read(reinterpret_cast<char*>(&version), 4);
    uint8_t kind = 0;
    is.read(reinterpret_cast<char*>(&kind), 1);
    if (version != 1 || kind != 1) throw std::runtime_error("onebit load: wrong kind/version");
    uint64_t n64 = 0, r64 = 0, mstar = 0, kstar = 0, spill = 0;
    is.read(reinterpret_cast<char*>(&n64), 8);
    is.read(reinterpret_cast<char*>(&r64), 8);
    is.read(reinterpret_cast<char*>(&mstar), 8);
    is.read(reinterpret_cast<char*>(&kstar), 8);
    is.read(reinterpret_cast<char*>(&spill), 8);
    if (!is) throw std::runtime_error("onebit load: truncated header");

    onebit_rmq ds;
    ds.n_ = static_cast<uint32_t>(n64);
    ds.ctx_ = ctx_for(ds.n_);
    ds.r_ = r64;
    ds.memory_ = bit_vec::load(is);
    ds.spill_ = spill;
    {
        std::lock_guard<std::mutex> lk(ds.ctx_->mu);
        if (ds.n_ == 1) {
            ds.env_ = {0, 1};
        } else {
            ds.env_ = ds.ctx_->root_l_model().envelope();
        }
    }
    // integrity: the model tables are a function of n alone
    if (r64 != ds.ctx_->r || mstar != ds.memory_.size() ||
        static_cast<uint64_t>(ds.env_.m_bits) != mstar || kstar != ds.env_.k ||
        spill >= kstar)
        throw std::runtime_error("onebit load: inconsistent structure");
    return ds;
}

}  // namespace srmq
