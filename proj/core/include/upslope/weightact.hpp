#pragma once

#include <optional>
#include <string>
#include <vector>

#include "upslope/chars.hpp"
#include "upslope/matrix.hpp"
#include "upslope/padic.hpp"

namespace upslope {

// Element of the monoid Sigma_0(p^m): integral (a b; c d) with p^m | c,
// p not dividing d, det != 0. The shape tag records v(a): 1 for the U_p-type
// operators, 0 for the T_l-type ones.
struct MonoidElt {
    enum class Shape { Up, Tl };
    CycloElt a, b, c, d;
    Shape shape = Shape::Tl;

    static MonoidElt make(CycloElt a, CycloElt b, CycloElt c, CycloElt d, Shape shape, int m);
    static MonoidElt from_ints(const PadicContext* ctx, std::int64_t a, std::int64_t b,
                               std::int64_t c, std::int64_t d, Shape shape);

    CycloElt det() const { return a * d - b * c; }
    int va() const { return shape == Shape::Up ? 1 : 0; }
};

// u * pi^k with u a unit (or 1); the exact scale factors used for basis
// rescalings. Value = unit * pi^k, k in Z.
struct PiScaled {
    CycloElt unit;
    int k = 0;

    static PiScaled one(const PadicContext* ctx) { return {CycloElt::one(ctx), 0}; }
    static PiScaled p_pow(const PadicContext* ctx, int j);       // p^j
    static PiScaled pi_pow(const PadicContext* ctx, int j) { return {CycloElt::one(ctx), j}; }

    CycloElt apply(const CycloElt& x) const { return (x * unit).mul_pi_pow(k); }
    PiScaled times(const PiScaled& o) const { return {unit * o.unit, k + o.k}; }
};

struct Rescale {
    PiScaled u, v;  // entry (i,j) scaled by u^i v^j

    static Rescale none(const PadicContext* ctx) {
        return {PiScaled::one(ctx), PiScaled::one(ctx)};
    }
    // The 1, pz, p^2 z^2, ... basis: (u, v) = (p^{-1}, p).
    static Rescale b_basis(const PadicContext* ctx) {
        return {PiScaled::p_pow(ctx, -1), PiScaled::p_pow(ctx, 1)};
    }
    bool is_trivial() const;
};

// N x N matrix of the weight-kappa right action of a monoid element on power
// series, entry (i,j) = coefficient of x^i y^j in kappa(cx+d)/(cx+d-axy-by),
// with an optional exact rescale folded into the series data.
struct ActionMatrix {
    Mat entries;
    MonoidElt gamma;        // the element before rescaling
    WeightChar kappa;
    bool rescaled = false;  // true when built in a (u, v)-rescaled basis
    Rescale scale;
    int N = 0;

    const PadicContext* ctx() const { return entries.ctx(); }
};

// Build the action matrix. The rescale substitutes (a uv, b v, c u, d) into
// the generating series, so entries are exact ring elements; inexact
// substitutions (a non-integral rescaled matrix) throw.
ActionMatrix generating_matrix(const MonoidElt& gamma, const WeightChar& kappa, int N,
                               std::optional<Rescale> rescale = std::nullopt);

// Valuation-pattern check for a matrix built in the (p^{-1}, p)-rescaled
// basis: diagonal entries congruent to (a/d)^i kappa_scalar(d) modulo
// p^{2 + i v(a)}, below-diagonal entries with v >= (i-j+2) + j v(a),
// above-diagonal with v >= (j-i) + i v(a). Strict only for m >= 4.
struct CongruenceReport {
    bool ok = true;
    bool strict = false;  // m >= 4: a failure is a hard failure
    std::vector<std::string> violations;
};

CongruenceReport verify_congruence_shape(const ActionMatrix& am);

}  // namespace upslope
