#include "upslope/weightact.hpp"

#include <stdexcept>

namespace upslope {

MonoidElt MonoidElt::make(CycloElt a, CycloElt b, CycloElt c, CycloElt d, Shape shape, int m) {
    const PadicContext* ctx = a.ctx();
    if (!c.valuation().known_ge(Rat(m)))
        throw std::invalid_argument("MonoidElt: lower-left entry must be divisible by p^m");
    if (!d.valuation().known_eq(Rat(0)))
        throw std::invalid_argument("MonoidElt: lower-right entry must be a unit");
    MonoidElt g{std::move(a), std::move(b), std::move(c), std::move(d), shape};
    Valuation av = g.a.valuation();
    if (shape == Shape::Up) {
        if (!av.known_eq(Rat(1)))
            throw std::invalid_argument("MonoidElt: Up shape needs v(a) = 1");
    } else {
        if (!av.known_eq(Rat(0)))
            throw std::invalid_argument("MonoidElt: Tl shape needs v(a) = 0");
    }
    Valuation dv = g.det().valuation();
    if (!dv.is_exact())
        throw std::invalid_argument("MonoidElt: determinant vanishes at working precision");
    (void)ctx;
    return g;
}

MonoidElt MonoidElt::from_ints(const PadicContext* ctx, std::int64_t a, std::int64_t b,
                               std::int64_t c, std::int64_t d, Shape shape) {
    return make(CycloElt::from_int(ctx, a), CycloElt::from_int(ctx, b),
                CycloElt::from_int(ctx, c), CycloElt::from_int(ctx, d), shape, ctx->m);
}

PiScaled PiScaled::p_pow(const PadicContext* ctx, int j) {
    // p = pi^e * (pi^e/p)^{-1}
    if (j == 0) return one(ctx);
    CycloElt u = j > 0 ? ctx->pi_e_over_p_inv().pow_u64(static_cast<std::uint64_t>(j))
                       : ctx->pi_e_over_p().pow_u64(static_cast<std::uint64_t>(-j));
    return {u, j * ctx->e};
}

bool Rescale::is_trivial() const {
    return u.k == 0 && v.k == 0 && u.unit.equal_at_min_prec(CycloElt::one(u.unit.ctx())) &&
           v.unit.equal_at_min_prec(CycloElt::one(v.unit.ctx()));
}

ActionMatrix generating_matrix(const MonoidElt& gamma, const WeightChar& kappa, int N,
                               std::optional<Rescale> rescale) {
    if (N < 1) throw std::invalid_argument("generating_matrix: N >= 1 required");
    const PadicContext* ctx = gamma.a.ctx();

    ActionMatrix out;
    out.gamma = gamma;
    out.kappa = kappa;
    out.N = N;

    // Substitute the rescale into the series data: H(ux, vy) is the plain
    // generating series of (a uv, b v, c u, d).
    CycloElt a = gamma.a, b = gamma.b, c = gamma.c, d = gamma.d;
    if (rescale && !rescale->is_trivial()) {
        out.rescaled = true;
        out.scale = *rescale;
        PiScaled uv = rescale->u.times(rescale->v);
        a = uv.apply(a);
        b = rescale->v.apply(b);
        c = rescale->u.apply(c);
    }

    // F(x) = kappa(cx+d)/(cx+d) = s * (1 + (c/d) x)^{expnt}
    CycloElt dinv = d.inverse_unit();
    CycloElt s = kappa_eval(ctx, kappa, d);
    CycloElt u_ser = c * dinv;
    KappaSeries ks = kappa_series(ctx, kappa, u_ser, N);

    std::vector<CycloElt> F(N, CycloElt::zero(ctx));
    for (int n = 0; n < N; ++n) F[n] = ks.coeffs[n] * s;

    // G(x) = (a x + b) / (c x + d) = (a x + b) d^{-1} sum (-(c/d) x)^n
    std::vector<CycloElt> G(N, CycloElt::zero(ctx));
    {
        std::vector<CycloElt> inv(N, CycloElt::zero(ctx));
        CycloElt t = CycloElt::one(ctx);
        CycloElt neg_u = -u_ser;
        for (int n = 0; n < N; ++n) {
            inv[n] = t * dinv;
            t = t * neg_u;
        }
        for (int n = 0; n < N; ++n) {
            G[n] = b * inv[n];
            if (n >= 1) G[n] += a * inv[n - 1];
        }
    }

    out.entries = Mat(ctx, N, N);
    std::vector<CycloElt> col = F;
    for (int j = 0; j < N; ++j) {
        for (int i = 0; i < N; ++i) out.entries.at(i, j) = col[i];
        if (j + 1 < N) {
            std::vector<CycloElt> next(N, CycloElt::zero(ctx));
            for (int i = 0; i < N; ++i) {
                if (col[i].is_zero()) continue;
                for (int k = 0; i + k < N; ++k) {
                    if (G[k].is_zero()) continue;
                    next[i + k] += col[i] * G[k];
                }
            }
            col = std::move(next);
        }
    }
    return out;
}

CongruenceReport verify_congruence_shape(const ActionMatrix& am) {
    const PadicContext* ctx = am.ctx();
    CongruenceReport rep;
    rep.strict = ctx->m >= 4;
    if (!am.rescaled)
        throw std::invalid_argument("verify_congruence_shape: matrix must be in the rescaled basis");

    const int va = am.gamma.va();
    const CycloElt& a = am.gamma.a;
    const CycloElt& d = am.gamma.d;
    CycloElt ad = a * d.inverse_unit();
    CycloElt scalar = kappa_eval(ctx, am.kappa, d);

    CycloElt diag_base = scalar;  // (a/d)^i * scalar, updated along the diagonal
    for (int i = 0; i < am.N; ++i) {
        for (int j = 0; j < am.N; ++j) {
            const CycloElt& x = am.entries.at(i, j);
            if (i == j) {
                CycloElt diff = x - diag_base;
                Rat bound(2 + i * va);
                if (!diff.valuation().known_ge(bound))
                    rep.violations.push_back("diagonal (" + std::to_string(i) + "," +
                                             std::to_string(i) + "): v = " +
                                             diff.valuation().str() + " < " + bound.str());
            } else {
                Rat bound = i > j ? Rat(i - j + 2 + j * va) : Rat(j - i + i * va);
                if (!x.valuation().known_ge(bound))
                    rep.violations.push_back("entry (" + std::to_string(i) + "," +
                                             std::to_string(j) + "): v = " +
                                             x.valuation().str() + " < " + bound.str());
            }
        }
        diag_base = diag_base * ad;
    }
    rep.ok = rep.violations.empty();
    return rep;
}

}  // namespace upslope
