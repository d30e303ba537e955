#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "upslope/padic.hpp"

namespace upslope {

// Dirichlet character of conductor p^{m'} given by its exponents on a fixed
// generator g of (Z/p^{m'})^x: chi(g) = omega(g)^tame * zeta_{p^{m'-1}}^wild.
// The trivial character has conductor exponent 1 (conductor p), matching the
// convention used for level structures here.
struct DirichletCharacter {
    int conductor_exp = 1;  // m'
    std::uint64_t tame_exp = 0;  // into mu_{p-1}
    std::uint64_t wild_exp = 0;  // into mu_{p^{m'-1}}

    bool is_trivial() const { return tame_exp == 0 && wild_exp == 0; }

    // chi(-1) as +1/-1.
    int sign(std::uint64_t p) const;

    std::string str() const {
        return "{m'=" + std::to_string(conductor_exp) + ",tame=" + std::to_string(tame_exp) +
               ",wild=" + std::to_string(wild_exp) + "}";
    }
};

// Smallest generator of (Z/p^k)^x (a primitive root mod p^2 generates for all k).
std::uint64_t primitive_root(std::uint64_t p, int k);

// Discrete log of a unit a modulo p^k with respect to primitive_root(p, k).
std::uint64_t discrete_log(std::uint64_t p, int k, std::uint64_t a);

// chi(a) as a root of unity in O_E. Requires p^{m'-1} | ctx->cyclo_order and
// gcd(a, p) = 1.
CycloElt char_eval(const PadicContext* ctx, const DirichletCharacter& chi, std::int64_t a);

// Weight character kappa. Classical(k, psi) acts through psi(d) d^{k-1} and
// the polynomial (1 + (c/d)z)^{k-1}; DiskPoint(psi, w0) through
// psi(d) <d>^{w0} and the binomial series (1 + (c/d)z)^{w0}.
struct WeightChar {
    enum class Kind { Classical, DiskPoint } kind = Kind::Classical;
    DirichletCharacter psi;
    int k = 1;       // Classical: k >= 1
    CycloElt w0;     // DiskPoint: v(w0) >= 0

    static WeightChar classical(int k, DirichletCharacter psi);
    static WeightChar disk(DirichletCharacter psi, CycloElt w0);
};

// The scalar part of the weight action for the lower-right entry d (a unit,
// given as any element congruent to a rational residue mod p^{m'}... rational
// d suffices for every operator here): Classical -> psi(d) d^{k-1},
// DiskPoint -> psi(d) <d>^{w0}.
CycloElt kappa_eval(const PadicContext* ctx, const WeightChar& kappa, const CycloElt& d);

struct KappaSeries {
    std::vector<CycloElt> coeffs;  // coefficients of (1 + u z)^{expnt}, z^0..z^{N-1}
    int truncation_index = 0;      // first index certified to vanish mod p^prec (audit)
};

// Coefficients of (1 + u z)^{expnt} where u = c/d has v(u) >= 1 for DiskPoint
// weights (convergence margin; rejected otherwise). Classical weights take the
// exact finite binomial expansion.
KappaSeries kappa_series(const PadicContext* ctx, const WeightChar& kappa, const CycloElt& u,
                         int N);

// T-coordinate of kappa: kappa(exp(2p)) - 1.
CycloElt t_coordinate(const PadicContext* ctx, const WeightChar& kappa);

}  // namespace upslope
