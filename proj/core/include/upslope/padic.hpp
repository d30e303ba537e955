#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "upslope/rat.hpp"
#include "upslope/zmod.hpp"

namespace upslope {

class CycloElt;

// Arithmetic context for Z_p and its totally ramified cyclotomic extension
// O_E = Z_p[zeta_{cyclo_order}], with uniformizer pi = zeta - 1 and
// ramification degree e = phi(cyclo_order). Elements are known modulo p^prec.
//
// Normalization throughout: v(p) = 1, so valuations are rationals with
// denominator dividing e.
class PadicContext {
  public:
    std::uint64_t p = 3;
    int m = 1;                    // level exponent (p^m divides the lower-left entries)
    int prec = 40;                // absolute precision exponent
    std::uint64_t cyclo_order = 1;  // p-power order of the root of unity z
    std::uint64_t extra_root_order = 1;
    int e = 1;                    // ramification degree = phi(cyclo_order)

    static std::shared_ptr<const PadicContext> create(std::uint64_t p, int m, int prec,
                                                      std::uint64_t cyclo_order = 0,
                                                      std::uint64_t extra_root_order = 1);

    std::uint64_t pk(int k) const { return ppow_[k]; }  // p^k, 0 <= k <= prec
    std::uint64_t modulus() const { return ppow_[prec]; }

    // Coefficients of the minimal polynomial of pi over Z_p:
    // pi^e = -(mp_[0] + mp_[1] pi + ... + mp_[e-1] pi^{e-1}), all mp_[i] in pZ_p.
    const std::vector<std::uint64_t>& pi_minpoly_tail() const { return mp_; }
    // pi^e = p * pi_e_unit, a unit of O_E.
    const CycloElt& pi_e_over_p() const;
    const CycloElt& pi_e_over_p_inv() const;
    // zeta^j in the zeta-power basis for 0 <= j < cyclo_order (row-major e entries).
    const std::vector<std::uint64_t>& zeta_pow_row(std::uint64_t j) const { return zpow_[j]; }
    // Basis changes: pi^i in zeta-basis and zeta^j (j < e) in pi-basis.
    const std::vector<std::vector<std::uint64_t>>& pi_to_zeta() const { return pi2z_; }
    const std::vector<std::vector<std::uint64_t>>& zeta_to_pi() const { return z2pi_; }

    ~PadicContext();

  private:
    PadicContext() = default;
    std::vector<std::uint64_t> ppow_;
    std::vector<std::uint64_t> mp_;
    std::vector<std::vector<std::uint64_t>> zpow_, pi2z_, z2pi_;
    std::unique_ptr<CycloElt> pi_e_unit_, pi_e_unit_inv_;
};

using CtxPtr = std::shared_ptr<const PadicContext>;

// Valuation of a ring element: either an exact rational (denominator | e) or
// the statement "at least k" when the element is indistinguishable from 0 at
// the precision it is known to.
class Valuation {
  public:
    static Valuation exact(Rat v) { return Valuation(true, v); }
    static Valuation at_least(int k) { return Valuation(false, Rat(k)); }

    bool is_exact() const { return exact_; }
    const Rat& value() const { return v_; }  // exact value, or the lower bound
    Rat lower_bound() const { return v_; }

    // Comparisons treat AtLeast(k) as "somewhere in [k, infinity]".
    bool known_ge(const Rat& r) const { return v_ >= r; }
    bool known_eq(const Rat& r) const { return exact_ && v_ == r; }

    std::string str() const { return exact_ ? v_.str() : (">=" + v_.str()); }

  private:
    Valuation(bool e, Rat v) : exact_(e), v_(v) {}
    bool exact_;
    Rat v_;
};

// Element of O_E in the pi-power basis 1, pi, ..., pi^{e-1} with Z_p
// coefficients, known modulo p^kp (kp <= ctx->prec). All operations are pure;
// values are immutable in spirit (mutating helpers are private to the
// implementation pattern used here).
class CycloElt {
  public:
    CycloElt() = default;
    CycloElt(const PadicContext* ctx, std::uint64_t scalar_residue);
    static CycloElt zero(const PadicContext* ctx);
    static CycloElt one(const PadicContext* ctx);
    static CycloElt from_int(const PadicContext* ctx, std::int64_t n);
    static CycloElt pi(const PadicContext* ctx);
    static CycloElt zeta(const PadicContext* ctx);  // zeta of order cyclo_order
    static CycloElt from_pi_coeffs(const PadicContext* ctx, std::vector<std::uint64_t> coeffs,
                                   int known_prec);

    const PadicContext* ctx() const { return ctx_; }
    int known_prec() const { return kp_; }
    const std::vector<std::uint64_t>& coeffs() const { return c_; }

    bool is_zero() const;  // zero at its own known precision
    Valuation valuation() const;
    // floor of a certified lower bound for v(x); equals floor(v) when exact,
    // kp_ when the element vanishes at precision.
    int val_floor() const;

    friend CycloElt operator+(const CycloElt& a, const CycloElt& b);
    friend CycloElt operator-(const CycloElt& a, const CycloElt& b);
    friend CycloElt operator-(const CycloElt& a);
    friend CycloElt operator*(const CycloElt& a, const CycloElt& b);
    CycloElt& operator+=(const CycloElt& o) { *this = *this + o; return *this; }
    CycloElt& operator-=(const CycloElt& o) { *this = *this - o; return *this; }
    CycloElt& operator*=(const CycloElt& o) { *this = *this * o; return *this; }

    CycloElt mul_int(std::int64_t n) const;
    CycloElt mul_p_pow(int k) const;   // * p^k, k >= 0
    CycloElt mul_pi_pow(int k) const;  // * pi^k, k >= 0

    // Exact divisions; throw std::domain_error when the division is inexact
    // at the element's known precision. Known precision drops accordingly.
    CycloElt div_p_pow_exact(int k) const;
    CycloElt div_pi_pow_exact(int k) const;
    CycloElt div_int_exact(std::int64_t n) const;

    // Inverse of a unit (v = 0), by lifting x -> x(2 - ax). Rejects non-units.
    CycloElt inverse_unit() const;

    // Division by a nonzero element of valuation s/e: exact when v(*this) >= s/e.
    CycloElt div_exact(const CycloElt& den) const;

    CycloElt pow_u64(std::uint64_t n) const;

    // Galois conjugation zeta -> zeta^{-1} (fixes Z_p).
    CycloElt conj() const;

    // Reduce the known precision to k (drops information).
    CycloElt truncated_to(int k) const;

    // The residue in Z/p^{m'} when the element is rational (all pi-coefficients
    // beyond the constant vanish at precision min(kp, needed)); nullopt otherwise.
    std::optional<std::uint64_t> rational_residue(int mod_exp) const;

    // True if the element is congruent to a rational integer at its known precision.
    bool is_rational() const;

    bool equal_at_min_prec(const CycloElt& o) const;

    // Coefficients in the zeta-power basis (length e), modulo p^kp.
    std::vector<std::uint64_t> zeta_coeffs() const;

  private:
    const PadicContext* ctx_ = nullptr;
    std::vector<std::uint64_t> c_;
    int kp_ = 0;

    void reduce_();  // canonicalize coefficients mod p^kp
    friend class PadicContext;
};

// --- module operations -------------------------------------------------

Valuation valuation(const CycloElt& x);

// Teichmueller lift: the (p-1)-st root of unity congruent to a mod p.
CycloElt teichmuller(const PadicContext* ctx, std::int64_t a);

// Square root of n in Z_p congruent to residue_hint mod p (Newton lifting).
CycloElt hensel_sqrt(const PadicContext* ctx, std::int64_t n, std::int64_t residue_hint);

// exp and log on Z_p scalars, computed from exact big-rational partial sums
// (arguments are rational integers; results are full-precision residues).
CycloElt exp_scalar(const PadicContext* ctx, std::int64_t x);          // v(x) >= 1
CycloElt log_scalar_residue(const PadicContext* ctx, std::uint64_t u); // u == 1 mod p

// <d> = d * omega(d)^{-1}, the 1-unit part of a unit d.
CycloElt one_unit_part(const PadicContext* ctx, std::uint64_t d_residue);

// x^w for x a 1-unit given by its residue and w an integral exponent given as
// a CycloElt. Rational w uses exact modular exponentiation; general w falls
// back to the binomial series with tracked precision.
CycloElt one_unit_pow(const PadicContext* ctx, std::uint64_t x_residue, const CycloElt& w);

}  // namespace upslope
