#include "upslope/padic.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cassert>
#include <stdexcept>

namespace upslope {

using boost::multiprecision::cpp_int;

namespace {

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// phi of a prime power q = p^k (q = 1 allowed).
int phi_prime_power(std::uint64_t q, std::uint64_t p) {
    if (q == 1) return 1;
    return static_cast<int>(q - q / p);
}

}  // namespace

std::shared_ptr<const PadicContext> PadicContext::create(std::uint64_t p, int m, int prec,
                                                         std::uint64_t cyclo_order,
                                                         std::uint64_t extra_root_order) {
    if (p == 2) throw std::invalid_argument("PadicContext: p = 2 is not supported");
    if (!is_prime_u64(p)) throw std::invalid_argument("PadicContext: p must be an odd prime");
    if (m < 1) throw std::invalid_argument("PadicContext: m >= 1 required");
    if (prec < 1) throw std::invalid_argument("PadicContext: prec >= 1 required");

    if (cyclo_order == 0) {
        cyclo_order = 1;
        for (int i = 0; i < m - 1; ++i) cyclo_order *= p;
    }
    std::uint64_t q = cyclo_order;
    while (q > 1) {
        if (q % p != 0)
            throw std::invalid_argument("PadicContext: cyclo_order must be a power of p");
        q /= p;
    }
    if (extra_root_order != 1 && (p - 1) % extra_root_order != 0)
        throw std::invalid_argument(
            "PadicContext: extra_root_order must divide p-1 (larger tame roots unsupported)");

    auto ctx = std::shared_ptr<PadicContext>(new PadicContext());
    ctx->p = p;
    ctx->m = m;
    ctx->prec = prec;
    ctx->cyclo_order = cyclo_order;
    ctx->extra_root_order = extra_root_order;
    ctx->e = phi_prime_power(cyclo_order, p);

    ctx->ppow_.resize(prec + 1);
    ctx->ppow_[0] = 1;
    for (int k = 1; k <= prec; ++k) {
        unsigned __int128 next = static_cast<unsigned __int128>(ctx->ppow_[k - 1]) * p;
        if (next > UINT64_MAX)
            throw std::invalid_argument("PadicContext: p^prec exceeds 64 bits; lower prec (caps: "
                                        "40 for p=3, 27 for p=5, 22 for p=7)");
        ctx->ppow_[k] = static_cast<std::uint64_t>(next);
    }
    const std::uint64_t M = ctx->ppow_[prec];
    const int e = ctx->e;

    // Minimal polynomial of pi = zeta - 1: Phi_{cyclo}(1 + x), computed with
    // exact big integers then reduced mod p^prec. Phi_{p^k}(y) = sum_{i<p} y^{i p^{k-1}}.
    std::vector<cpp_int> minpoly_exact(e + 1, 0);
    {
        std::vector<cpp_int>& poly = minpoly_exact;
        if (cyclo_order == 1) {
            // pi = 0, e = 1, minimal polynomial x.
            poly[0] = 0;
            poly[1] = 1;
        } else {
            std::uint64_t step = cyclo_order / p;
            // (1+x)^j accumulated via Pascal updates at the needed exponents.
            std::vector<cpp_int> binom(1, 1);  // (1+x)^0
            std::uint64_t cur = 0;
            for (std::uint64_t i = 0; i < p; ++i) {
                std::uint64_t target = i * step;
                while (cur < target) {
                    binom.push_back(0);
                    for (std::size_t k = binom.size() - 1; k >= 1; --k) binom[k] += binom[k - 1];
                    ++cur;
                }
                for (std::size_t k = 0; k < binom.size() && k <= static_cast<std::size_t>(e); ++k)
                    poly[k] += binom[k];
            }
        }
        ctx->mp_.resize(e);
        for (int k = 0; k < e; ++k) {
            cpp_int r = poly[k] % M;
            if (r < 0) r += M;
            ctx->mp_[k] = static_cast<std::uint64_t>(r);
        }
        // Leading coefficient must be 1 and the tail Eisenstein.
        assert(poly[e] == 1);
    }

    // zeta^j in the zeta basis for j < cyclo_order, reducing by the minimal
    // polynomial of zeta (Phi_{cyclo}); derived from pi-basis powers instead
    // to keep a single reduction path: first build pi <-> zeta triangles.
    {
        ctx->pi2z_.assign(e, std::vector<std::uint64_t>(e, 0));
        ctx->z2pi_.assign(e, std::vector<std::uint64_t>(e, 0));
        // pi^i = (zeta - 1)^i: binomials with signs.
        for (int i = 0; i < e; ++i) {
            // coefficients of (z-1)^i
            std::vector<cpp_int> row(i + 1, 0);
            row[0] = 1;
            for (int t = 0; t < i; ++t) {
                std::vector<cpp_int> nxt(t + 2, 0);
                for (int k = 0; k <= t; ++k) {
                    nxt[k + 1] += row[k];
                    nxt[k] -= row[k];
                }
                row = nxt;
            }
            for (int k = 0; k <= i; ++k) {
                cpp_int r = row[k] % M;
                if (r < 0) r += M;
                ctx->pi2z_[i][k] = static_cast<std::uint64_t>(r);
            }
        }
        // zeta^j = (1 + pi)^j: plain binomials.
        for (int j = 0; j < e; ++j) {
            std::vector<cpp_int> row(j + 1, 0);
            row[0] = 1;
            for (int t = 0; t < j; ++t) {
                std::vector<cpp_int> nxt(t + 2, 0);
                for (int k = 0; k <= t; ++k) {
                    nxt[k + 1] += row[k];
                    nxt[k] += row[k];
                }
                row = nxt;
            }
            for (int k = 0; k <= j; ++k)
                ctx->z2pi_[j][k] = static_cast<std::uint64_t>(row[k] % M);
        }
    }

    // zeta^j (all j < cyclo_order) in zeta-basis, reduced by Phi_{cyclo}.
    {
        ctx->zpow_.assign(cyclo_order, std::vector<std::uint64_t>(e, 0));
        ctx->zpow_[0][0] = 1;
        // Phi reduction: zeta^e = -(sum over exponents i*step of zeta^{i*step}, i<p-1... )
        // Use Phi_{p^k}(z) = sum_{i<p} z^{i step} = 0 -> z^e = -sum_{i<p-1} z^{i step}.
        std::uint64_t step = (cyclo_order == 1) ? 0 : cyclo_order / p;
        for (std::uint64_t j = 1; j < cyclo_order; ++j) {
            // multiply previous row by zeta
            const auto& prev = ctx->zpow_[j - 1];
            std::vector<std::uint64_t> cur(e, 0);
            std::uint64_t carry = prev[e - 1];
            for (int k = e - 1; k >= 1; --k) cur[k] = prev[k - 1];
            cur[0] = 0;
            if (carry) {
                // zeta^e = -(z^0 + z^step + ... + z^{(p-2)step})
                for (std::uint64_t i = 0; i + 1 < p; ++i)
                    cur[i * step] = submod(cur[i * step], carry, M);
            }
            ctx->zpow_[j] = std::move(cur);
        }
    }

    // pi^e / p, a unit, and its inverse: pi^e = -(sum mp_k pi^k) with every
    // exact coefficient divisible by p (Eisenstein), so divide before reducing.
    // For the unramified case e = 1 the uniformizer is p itself and the unit is 1.
    if (e == 1) {
        auto one = CycloElt::one(ctx.get());
        ctx->pi_e_unit_ = std::make_unique<CycloElt>(one);
        ctx->pi_e_unit_inv_ = std::make_unique<CycloElt>(one);
    } else {
        std::vector<std::uint64_t> u(e, 0);
        for (int k = 0; k < e; ++k) {
            if (minpoly_exact[k] % static_cast<std::int64_t>(p) != 0)
                throw std::logic_error("PadicContext: minimal polynomial not Eisenstein");
            cpp_int r = (-(minpoly_exact[k] / static_cast<std::int64_t>(p))) % M;
            if (r < 0) r += M;
            u[k] = static_cast<std::uint64_t>(r);
        }
        auto ue = CycloElt::from_pi_coeffs(ctx.get(), u, prec);
        ctx->pi_e_unit_ = std::make_unique<CycloElt>(ue);
        ctx->pi_e_unit_inv_ = std::make_unique<CycloElt>(ue.inverse_unit());
    }

    return ctx;
}

PadicContext::~PadicContext() = default;

const CycloElt& PadicContext::pi_e_over_p() const { return *pi_e_unit_; }
const CycloElt& PadicContext::pi_e_over_p_inv() const { return *pi_e_unit_inv_; }

// ---------------------------------------------------------------------------
// CycloElt

CycloElt::CycloElt(const PadicContext* ctx, std::uint64_t scalar_residue)
    : ctx_(ctx), c_(ctx->e, 0), kp_(ctx->prec) {
    c_[0] = scalar_residue % ctx->modulus();
}

CycloElt CycloElt::zero(const PadicContext* ctx) { return CycloElt(ctx, 0); }
CycloElt CycloElt::one(const PadicContext* ctx) { return CycloElt(ctx, 1); }

CycloElt CycloElt::from_int(const PadicContext* ctx, std::int64_t n) {
    std::uint64_t M = ctx->modulus();
    std::uint64_t r;
    if (n >= 0) {
        r = static_cast<std::uint64_t>(n) % M;
    } else {
        r = M - (static_cast<std::uint64_t>(-(n + 1)) + 1) % M;
        if (r == M) r = 0;
    }
    return CycloElt(ctx, r);
}

CycloElt CycloElt::pi(const PadicContext* ctx) {
    if (ctx->e == 1) return CycloElt(ctx, ctx->p);  // unramified: uniformizer is p
    CycloElt x = zero(ctx);
    x.c_[1] = 1;
    return x;
}

CycloElt CycloElt::zeta(const PadicContext* ctx) {
    CycloElt x = one(ctx);
    if (ctx->e > 1) x.c_[1] = 1;
    return x;
}

CycloElt CycloElt::from_pi_coeffs(const PadicContext* ctx, std::vector<std::uint64_t> coeffs,
                                  int known_prec) {
    if (static_cast<int>(coeffs.size()) != ctx->e)
        throw std::invalid_argument("CycloElt: coefficient vector length must equal e");
    CycloElt x;
    x.ctx_ = ctx;
    x.c_ = std::move(coeffs);
    x.kp_ = std::min(known_prec, ctx->prec);
    x.reduce_();
    return x;
}

void CycloElt::reduce_() {
    std::uint64_t mk = ctx_->pk(kp_);
    for (auto& v : c_) v %= mk;
}

bool CycloElt::is_zero() const {
    for (auto v : c_)
        if (v != 0) return false;
    return true;
}

Valuation CycloElt::valuation() const {
    const int e = ctx_->e;
    bool found = false;
    Rat best(0);
    for (int i = 0; i < e; ++i) {
        if (c_[i] == 0) continue;
        int vp = val_p_u64(c_[i], ctx_->p);
        if (vp >= kp_) continue;
        Rat v(i + static_cast<std::int64_t>(e) * vp, e);
        if (!found || v < best) { best = v; found = true; }
    }
    if (!found) return Valuation::at_least(kp_);
    if (best >= Rat(kp_)) return Valuation::at_least(kp_);
    return Valuation::exact(best);
}

int CycloElt::val_floor() const {
    Valuation v = valuation();
    if (!v.is_exact()) return kp_;
    return static_cast<int>(v.value().floor());
}

static void check_same_ctx(const CycloElt& a, const CycloElt& b) {
    if (a.ctx() != b.ctx())
        throw std::invalid_argument("CycloElt: mixed contexts");
}

CycloElt operator+(const CycloElt& a, const CycloElt& b) {
    check_same_ctx(a, b);
    CycloElt r;
    r.ctx_ = a.ctx_;
    r.kp_ = std::min(a.kp_, b.kp_);
    std::uint64_t mk = a.ctx_->pk(r.kp_);
    r.c_.resize(a.c_.size());
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        r.c_[i] = addmod(a.c_[i] % mk, b.c_[i] % mk, mk);
    return r;
}

CycloElt operator-(const CycloElt& a, const CycloElt& b) {
    check_same_ctx(a, b);
    CycloElt r;
    r.ctx_ = a.ctx_;
    r.kp_ = std::min(a.kp_, b.kp_);
    std::uint64_t mk = a.ctx_->pk(r.kp_);
    r.c_.resize(a.c_.size());
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        r.c_[i] = submod(a.c_[i] % mk, b.c_[i] % mk, mk);
    return r;
}

CycloElt operator-(const CycloElt& a) {
    CycloElt r = a;
    std::uint64_t mk = a.ctx_->pk(r.kp_);
    for (auto& v : r.c_) v = submod(0, v, mk);
    return r;
}

CycloElt operator*(const CycloElt& a, const CycloElt& b) {
    check_same_ctx(a, b);
    const PadicContext* ctx = a.ctx_;
    const int e = ctx->e;
    const std::uint64_t M = ctx->modulus();

    // Knowledge of the product: error terms a_err*b and b_err*a.
    int kp = std::min({a.kp_ + b.val_floor(), b.kp_ + a.val_floor(), ctx->prec});
    kp = std::max(kp, 0);

    if (e == 1) {
        CycloElt r;
        r.ctx_ = ctx;
        r.kp_ = kp;
        r.c_ = {mulmod(a.c_[0], b.c_[0], M)};
        r.reduce_();
        return r;
    }

    // Schoolbook product then reduction by the minimal polynomial of pi.
    std::vector<std::uint64_t> prod(2 * e - 1, 0);
    for (int i = 0; i < e; ++i) {
        if (a.c_[i] == 0) continue;
        for (int j = 0; j < e; ++j) {
            if (b.c_[j] == 0) continue;
            prod[i + j] = addmod(prod[i + j], mulmod(a.c_[i], b.c_[j], M), M);
        }
    }
    const auto& mp = ctx->pi_minpoly_tail();
    for (int d = 2 * e - 2; d >= e; --d) {
        std::uint64_t c = prod[d];
        if (c == 0) continue;
        prod[d] = 0;
        // pi^d = pi^{d-e} * pi^e = -pi^{d-e} * sum mp[k] pi^k
        for (int k = 0; k < e; ++k) {
            if (mp[k] == 0) continue;
            prod[d - e + k] = submod(prod[d - e + k], mulmod(c, mp[k], M), M);
        }
    }
    CycloElt r;
    r.ctx_ = ctx;
    r.kp_ = kp;
    r.c_.assign(prod.begin(), prod.begin() + e);
    r.reduce_();
    return r;
}

CycloElt CycloElt::mul_int(std::int64_t n) const {
    CycloElt k = CycloElt::from_int(ctx_, n);
    k.kp_ = ctx_->prec;
    return *this * k;
}

CycloElt CycloElt::mul_p_pow(int k) const {
    if (k < 0) return div_p_pow_exact(-k);
    CycloElt r = *this;
    r.kp_ = std::min(kp_ + k, ctx_->prec);
    std::uint64_t mk = ctx_->pk(r.kp_);
    std::uint64_t f = ctx_->pk(std::min(k, ctx_->prec));
    for (auto& v : r.c_) v = mulmod(v % mk, f % mk, mk);
    return r;
}

CycloElt CycloElt::mul_pi_pow(int k) const {
    if (k < 0) return div_pi_pow_exact(-k);
    CycloElt r = *this;
    int full = k / ctx_->e, rem = k % ctx_->e;
    if (full > 0) r = r.mul_p_pow(full) * ctx_->pi_e_over_p().pow_u64(full);
    for (int i = 0; i < rem; ++i) r = r * CycloElt::pi(ctx_);
    return r;
}

CycloElt CycloElt::div_p_pow_exact(int k) const {
    if (k < 0) return mul_p_pow(-k);
    if (k == 0) return *this;
    if (k >= kp_)
        throw std::domain_error("CycloElt: division by p^k exhausts known precision");
    std::uint64_t f = ctx_->pk(k);
    CycloElt r = *this;
    for (auto& v : r.c_) {
        if (v % f != 0) throw std::domain_error("CycloElt: inexact division by p^k");
        v /= f;
    }
    r.kp_ = kp_ - k;
    r.reduce_();
    return r;
}

CycloElt CycloElt::div_pi_pow_exact(int k) const {
    if (k < 0) return mul_pi_pow(-k);
    if (k == 0) return *this;
    const int e = ctx_->e;
    int q = (k + e - 1) / e;          // divide by (pi^e)^q = (p u)^q
    int up = q * e - k;               // then multiply back pi^{up}
    CycloElt r = this->mul_pi_pow(up);
    r = r * ctx_->pi_e_over_p_inv().pow_u64(q);
    return r.div_p_pow_exact(q);
}

CycloElt CycloElt::div_int_exact(std::int64_t n) const {
    if (n == 0) throw std::invalid_argument("CycloElt: division by zero");
    bool neg = n < 0;
    std::uint64_t a = neg ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
    int vp = val_p_u64(a, ctx_->p);
    std::uint64_t unit = a / ctx_->pk(vp);
    CycloElt r = div_p_pow_exact(vp);
    std::uint64_t mk = ctx_->pk(r.kp_);
    std::uint64_t ui = invmod(unit % mk, mk);
    for (auto& v : r.c_) v = mulmod(v, ui, mk);
    if (neg) r = -r;
    return r;
}

CycloElt CycloElt::inverse_unit() const {
    Valuation v = valuation();
    if (!v.known_eq(Rat(0)))
        throw std::domain_error("CycloElt: inverse of a non-unit");
    // Initial inverse mod p: the residue of the element mod pi is c_[0] mod p.
    std::uint64_t c0 = c_[0] % ctx_->p;
    if (c0 == 0) throw std::domain_error("CycloElt: inverse of a non-unit");
    CycloElt x(ctx_, invmod(c0, ctx_->p));
    x.kp_ = kp_;
    // x -> x(2 - ax) doubles the precision of the inverse each step.
    for (int iter = 0; iter < 64; ++iter) {
        CycloElt t = x.mul_int(2) - (*this * x * x);
        if (t.equal_at_min_prec(x)) return t;
        x = t;
    }
    throw std::logic_error("CycloElt: unit inversion failed to converge");
}

CycloElt CycloElt::div_exact(const CycloElt& den) const {
    Valuation dv = den.valuation();
    if (!dv.is_exact()) throw std::domain_error("CycloElt: division by (numerical) zero");
    Rat v = dv.value();
    // den = pi^s * unit with s = v*e
    std::int64_t s = (v * Rat(ctx_->e)).num;
    if ((v * Rat(ctx_->e)).den != 1) throw std::logic_error("CycloElt: valuation denominator");
    CycloElt unit = den.div_pi_pow_exact(static_cast<int>(s));
    CycloElt r = this->div_pi_pow_exact(static_cast<int>(s));
    return r * unit.inverse_unit();
}

CycloElt CycloElt::pow_u64(std::uint64_t n) const {
    CycloElt r = CycloElt::one(ctx_);
    r.kp_ = kp_;
    CycloElt b = *this;
    while (n) {
        if (n & 1) r = r * b;
        b = b * b;
        n >>= 1;
    }
    return r;
}

CycloElt CycloElt::conj() const {
    const int e = ctx_->e;
    if (e == 1) return *this;
    // conj(pi) = zeta^{-1} - 1 = zeta^{cyclo-1} - 1, then Horner in powers.
    const auto& row = ctx_->zeta_pow_row(ctx_->cyclo_order - 1);
    CycloElt zinv = CycloElt::zero(ctx_);
    {
        // convert zeta-basis row to pi-basis
        std::vector<std::uint64_t> pc(e, 0);
        const auto& z2pi = ctx_->zeta_to_pi();
        std::uint64_t M = ctx_->modulus();
        for (int j = 0; j < e; ++j) {
            if (row[j] == 0) continue;
            for (int k = 0; k < e; ++k)
                pc[k] = addmod(pc[k], mulmod(row[j], z2pi[j][k], M), M);
        }
        zinv = CycloElt::from_pi_coeffs(ctx_, pc, ctx_->prec);
    }
    CycloElt cpi = zinv - CycloElt::one(ctx_);
    CycloElt acc = CycloElt::zero(ctx_);
    for (int i = e - 1; i >= 0; --i) {
        acc = acc * cpi;
        acc = acc + CycloElt(ctx_, c_[i]);
    }
    acc.kp_ = std::min(acc.kp_, kp_);
    acc.reduce_();
    return acc;
}

CycloElt CycloElt::truncated_to(int k) const {
    CycloElt r = *this;
    r.kp_ = std::min(k, kp_);
    r.reduce_();
    return r;
}

std::optional<std::uint64_t> CycloElt::rational_residue(int mod_exp) const {
    int k = std::min(mod_exp, kp_);
    std::uint64_t mk = ctx_->pk(k);
    for (std::size_t i = 1; i < c_.size(); ++i)
        if (c_[i] % mk != 0) return std::nullopt;
    return c_[0] % mk;
}

bool CycloElt::is_rational() const { return rational_residue(kp_).has_value(); }

bool CycloElt::equal_at_min_prec(const CycloElt& o) const {
    check_same_ctx(*this, o);
    int k = std::min(kp_, o.kp_);
    std::uint64_t mk = ctx_->pk(k);
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (c_[i] % mk != o.c_[i] % mk) return false;
    return true;
}

std::vector<std::uint64_t> CycloElt::zeta_coeffs() const {
    const int e = ctx_->e;
    std::vector<std::uint64_t> out(e, 0);
    const auto& pi2z = ctx_->pi_to_zeta();
    std::uint64_t mk = ctx_->pk(kp_);
    for (int i = 0; i < e; ++i) {
        if (c_[i] == 0) continue;
        for (int k = 0; k < e; ++k)
            out[k] = addmod(out[k], mulmod(c_[i] % mk, pi2z[i][k] % mk, mk), mk);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Module operations

Valuation valuation(const CycloElt& x) { return x.valuation(); }

CycloElt teichmuller(const PadicContext* ctx, std::int64_t a) {
    std::uint64_t M = ctx->modulus();
    std::uint64_t r = CycloElt::from_int(ctx, a).coeffs()[0];
    if (r % ctx->p == 0) throw std::domain_error("teichmuller: argument divisible by p");
    std::uint64_t x = r, prev;
    // x -> x^p converges to the (p-1)-st root of unity congruent to a.
    for (int i = 0; i <= ctx->prec + 1; ++i) {
        prev = x;
        x = powmod(x, ctx->p, M);
        if (x == prev) break;
    }
    return CycloElt(ctx, x);
}

CycloElt hensel_sqrt(const PadicContext* ctx, std::int64_t n, std::int64_t residue_hint) {
    std::uint64_t M = ctx->modulus();
    std::uint64_t nr = CycloElt::from_int(ctx, n).coeffs()[0];
    std::uint64_t h = CycloElt::from_int(ctx, residue_hint).coeffs()[0] % ctx->p;
    if (mulmod(h, h, ctx->p) != nr % ctx->p)
        throw std::domain_error("hensel_sqrt: hint^2 != n mod p (non-residue or bad hint)");
    if (h == 0) throw std::domain_error("hensel_sqrt: hint must be a unit");
    std::uint64_t x = h;
    for (int i = 0; i < 64; ++i) {
        // x -> x - (x^2 - n)/(2x)
        std::uint64_t num = submod(mulmod(x, x, M), nr, M);
        std::uint64_t den = invmod(mulmod(2 % M, x, M), M);
        std::uint64_t nx = submod(x, mulmod(num, den, M), M);
        if (nx == x) break;
        x = nx;
    }
    if (mulmod(x, x, M) != nr) throw std::logic_error("hensel_sqrt: did not converge");
    return CycloElt(ctx, x);
}

CycloElt exp_scalar(const PadicContext* ctx, std::int64_t x) {
    if (x % static_cast<std::int64_t>(ctx->p) != 0)
        throw std::domain_error("exp_scalar: argument must have valuation >= 1");
    // Exact partial sum sum_{n<=N} x^n / n! as a rational, then reduced mod p^prec.
    // Truncation: v(x^n/n!) >= n - (n-1)/(p-1) >= prec once n >= ceil(prec * (p-1)/(p-2)) + 1.
    const int N = ctx->prec * 2 + 8;
    cpp_int num = 1, den = 1;  // running sum num/den with den = n!
    cpp_int term_num = 1;
    for (int n = 1; n <= N; ++n) {
        term_num *= x;
        num = num * n + term_num;
        den *= n;
    }
    // Clear the p-part of den (exact: the sum is p-integral), invert the unit part.
    int vp = 0;
    while (den % static_cast<std::int64_t>(ctx->p) == 0) { den /= static_cast<std::int64_t>(ctx->p); ++vp; }
    cpp_int pv = 1;
    for (int i = 0; i < vp; ++i) pv *= static_cast<std::int64_t>(ctx->p);
    if (num % pv != 0) throw std::logic_error("exp_scalar: non-integral partial sum");
    num /= pv;
    cpp_int M = ctx->modulus();
    cpp_int r = num % M;
    if (r < 0) r += M;
    std::uint64_t den_mod = static_cast<std::uint64_t>(den % M);
    std::uint64_t res = mulmod(static_cast<std::uint64_t>(r), invmod(den_mod, ctx->modulus()), ctx->modulus());
    return CycloElt(ctx, res);
}

CycloElt log_scalar_residue(const PadicContext* ctx, std::uint64_t u) {
    u %= ctx->modulus();
    if (u % ctx->p != 1)
        throw std::domain_error("log_scalar_residue: argument must be 1 mod p");
    // log(1+t) with t = u - 1 (as an exact integer): sum (-1)^{n+1} t^n / n.
    cpp_int t = u - 1;
    const int N = ctx->prec * 2 + 8;
    // Common denominator lcm-free approach: accumulate as exact rational with
    // denominator N! (coarse but exact).
    cpp_int den = 1;
    for (int n = 1; n <= N; ++n) den *= n;
    cpp_int num = 0, tp = 1;
    for (int n = 1; n <= N; ++n) {
        tp *= t;
        cpp_int c = (den / n) * tp;
        if (n % 2 == 1)
            num += c;
        else
            num -= c;
    }
    int vp = 0;
    cpp_int d2 = den;
    while (d2 % static_cast<std::int64_t>(ctx->p) == 0) { d2 /= static_cast<std::int64_t>(ctx->p); ++vp; }
    cpp_int pv = 1;
    for (int i = 0; i < vp; ++i) pv *= static_cast<std::int64_t>(ctx->p);
    if (num % pv != 0) throw std::logic_error("log_scalar_residue: non-integral partial sum");
    num /= pv;
    cpp_int M = ctx->modulus();
    cpp_int r = num % M;
    if (r < 0) r += M;
    std::uint64_t dmod = static_cast<std::uint64_t>(d2 % M);
    std::uint64_t res = mulmod(static_cast<std::uint64_t>(r), invmod(dmod, ctx->modulus()), ctx->modulus());
    return CycloElt(ctx, res);
}

CycloElt one_unit_part(const PadicContext* ctx, std::uint64_t d_residue) {
    d_residue %= ctx->modulus();
    if (d_residue % ctx->p == 0) throw std::domain_error("one_unit_part: not a unit");
    CycloElt om = teichmuller(ctx, static_cast<std::int64_t>(d_residue % ctx->p));
    std::uint64_t om_inv = invmod(om.coeffs()[0], ctx->modulus());
    return CycloElt(ctx, mulmod(d_residue, om_inv, ctx->modulus()));
}

CycloElt one_unit_pow(const PadicContext* ctx, std::uint64_t x_residue, const CycloElt& w) {
    x_residue %= ctx->modulus();
    if (x_residue % ctx->p != 1)
        throw std::domain_error("one_unit_pow: base must be a 1-unit");
    if (auto wr = w.rational_residue(w.known_prec())) {
        // Exact path: x^(w mod p^prec) determines x^w mod p^prec for 1-units.
        return CycloElt(ctx, powmod(x_residue, *wr, ctx->modulus())).truncated_to(w.known_prec());
    }
    // Binomial series sum binom(w, n) t^n, t = x - 1, v(t) >= 1. Terms are
    // assembled as [prod_{i<n} (w - i)] * t^n / n! with exact division by n!;
    // knowledge degrades by v_p(n!) and the tail is cut by the certified bound.
    CycloElt acc = CycloElt::one(ctx);
    CycloElt prod = CycloElt::one(ctx);
    std::uint64_t M = ctx->modulus();
    std::uint64_t t = submod(x_residue, 1, M);
    int vt = t == 0 ? ctx->prec : val_p_u64(t, ctx->p);
    std::uint64_t tp = 1;
    std::int64_t fact_vp = 0;
    for (int n = 1; n <= 4 * ctx->prec + 8; ++n) {
        // tail cutoff via the monotone bound n*vt - (n-1)/(p-1) <= n*vt - v_p(n!)
        if (static_cast<std::int64_t>(n) * vt * static_cast<std::int64_t>(ctx->p - 1) -
                (n - 1) >=
            static_cast<std::int64_t>(ctx->prec) * static_cast<std::int64_t>(ctx->p - 1))
            break;
        prod = prod * (w - CycloElt::from_int(ctx, n - 1));
        tp = mulmod(tp, t, M);
        fact_vp += val_p_u64(n, ctx->p);
        CycloElt term = prod * CycloElt(ctx, tp);
        // exact division by n!: unit part and p-part
        term = term.div_p_pow_exact(static_cast<int>(fact_vp));
        std::uint64_t unit_fact = 1;
        std::uint64_t mk = ctx->pk(term.known_prec());
        for (int i = 2; i <= n; ++i) {
            std::uint64_t f = static_cast<std::uint64_t>(i);
            while (f % ctx->p == 0) f /= ctx->p;
            unit_fact = mulmod(unit_fact, f % mk, mk);
        }
        CycloElt t2 = term;
        {
            std::uint64_t ui = invmod(unit_fact, mk);
            std::vector<std::uint64_t> cc = t2.coeffs();
            for (auto& v : cc) v = mulmod(v % mk, ui, mk);
            t2 = CycloElt::from_pi_coeffs(ctx, cc, t2.known_prec());
        }
        acc = acc + t2;
    }
    return acc;
}

}  // namespace upslope
