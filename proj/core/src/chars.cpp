#include "upslope/chars.hpp"

#include <stdexcept>

namespace upslope {

namespace {

std::uint64_t upow(std::uint64_t b, int k) {
    std::uint64_t r = 1;
    for (int i = 0; i < k; ++i) r *= b;
    return r;
}

}  // namespace

int DirichletCharacter::sign(std::uint64_t p) const {
    // -1 = g^{phi/2}; chi(-1) = (-1)^{tame} * zeta^{wild * phi_wild/2}. The wild
    // component has odd order p^{m'-1}, so only the tame part contributes.
    return (tame_exp * ((p - 1) / 2)) % (p - 1) == 0 ? 1 : -1;
}

std::uint64_t primitive_root(std::uint64_t p, int k) {
    // Smallest primitive root mod p that stays primitive mod p^2.
    auto is_pr_mod_p = [&](std::uint64_t g) {
        // order of g mod p is p-1 iff g^{(p-1)/q} != 1 for prime q | p-1
        std::uint64_t n = p - 1;
        for (std::uint64_t q = 2; q * q <= n; ++q) {
            if (n % q) continue;
            if (powmod(g, (p - 1) / q, p) == 1) return false;
            while (n % q == 0) n /= q;
        }
        if (n > 1 && powmod(g, (p - 1) / n, p) == 1) return false;
        return true;
    };
    for (std::uint64_t g = 2; g < p; ++g) {
        if (!is_pr_mod_p(g)) continue;
        if (k == 1) return g;
        if (powmod(g, p - 1, p * p) != 1) return g;
        return g + p;  // g + p is then primitive mod p^2 (and all p^k)
    }
    throw std::logic_error("primitive_root: none found");
}

std::uint64_t discrete_log(std::uint64_t p, int k, std::uint64_t a) {
    std::uint64_t q = upow(p, k);
    a %= q;
    if (a % p == 0) throw std::domain_error("discrete_log: not a unit");
    std::uint64_t g = primitive_root(p, k);
    std::uint64_t phi = q - q / p;
    std::uint64_t x = 1;
    for (std::uint64_t i = 0; i < phi; ++i) {
        if (x == a) return i;
        x = mulmod(x, g, q);
    }
    throw std::logic_error("discrete_log: generator failed");
}

CycloElt char_eval(const PadicContext* ctx, const DirichletCharacter& chi, std::int64_t a) {
    const std::uint64_t p = ctx->p;
    std::int64_t am = a % static_cast<std::int64_t>(upow(p, chi.conductor_exp));
    if (am < 0) am += upow(p, chi.conductor_exp);
    if (am % static_cast<std::int64_t>(p) == 0)
        throw std::domain_error("char_eval: argument divisible by p");
    std::uint64_t wild_order = upow(p, chi.conductor_exp - 1);
    if (wild_order > 1 && ctx->cyclo_order % wild_order != 0)
        throw std::invalid_argument("char_eval: context cyclo_order too small for conductor");
    std::uint64_t dl = discrete_log(p, chi.conductor_exp, static_cast<std::uint64_t>(am));
    std::uint64_t g = primitive_root(p, chi.conductor_exp);

    CycloElt val = CycloElt::one(ctx);
    if (chi.tame_exp != 0) {
        CycloElt omg = teichmuller(ctx, static_cast<std::int64_t>(g));
        val = val * omg.pow_u64((chi.tame_exp * (dl % (p - 1))) % (p - 1));
    }
    if (chi.wild_exp != 0 && wild_order > 1) {
        // zeta_{p^{m'-1}} = zeta^{cyclo_order / p^{m'-1}}
        std::uint64_t zexp = ((chi.wild_exp % wild_order) * (dl % wild_order)) % wild_order;
        std::uint64_t full_exp = (ctx->cyclo_order / wild_order) * zexp;
        CycloElt z = CycloElt::zeta(ctx);
        val = val * z.pow_u64(full_exp);
    }
    return val;
}

WeightChar WeightChar::classical(int k, DirichletCharacter psi) {
    if (k < 1) throw std::invalid_argument("WeightChar: classical k >= 1 required");
    WeightChar w;
    w.kind = Kind::Classical;
    w.k = k;
    w.psi = psi;
    return w;
}

WeightChar WeightChar::disk(DirichletCharacter psi, CycloElt w0) {
    if (!w0.valuation().known_ge(Rat(0)))
        throw std::invalid_argument("WeightChar: disk point needs v(w0) >= 0");
    WeightChar w;
    w.kind = Kind::DiskPoint;
    w.psi = psi;
    w.w0 = std::move(w0);
    return w;
}

CycloElt kappa_eval(const PadicContext* ctx, const WeightChar& kappa, const CycloElt& d) {
    auto dres = d.rational_residue(d.known_prec());
    if (!dres)
        throw std::invalid_argument("kappa_eval: d must be a rational unit (Sigma_0 entries lie in Z_p)");
    if (*dres % ctx->p == 0) throw std::domain_error("kappa_eval: d must be a unit");
    std::uint64_t cond = 1;
    for (int i = 0; i < kappa.psi.conductor_exp; ++i) cond *= ctx->p;
    CycloElt psi_d = char_eval(ctx, kappa.psi, static_cast<std::int64_t>(*dres % cond));
    if (kappa.kind == WeightChar::Kind::Classical) {
        return psi_d * d.pow_u64(static_cast<std::uint64_t>(kappa.k - 1));
    }
    CycloElt bracket = one_unit_part(ctx, *dres);
    return psi_d * one_unit_pow(ctx, bracket.coeffs()[0], kappa.w0);
}

KappaSeries kappa_series(const PadicContext* ctx, const WeightChar& kappa, const CycloElt& u,
                         int N) {
    if (N < 1) throw std::invalid_argument("kappa_series: N >= 1 required");
    KappaSeries out;
    out.coeffs.assign(N, CycloElt::zero(ctx));
    out.coeffs[0] = CycloElt::one(ctx);
    out.truncation_index = N;

    if (kappa.kind == WeightChar::Kind::Classical) {
        // (1 + u z)^{k-1}: exact finite binomial expansion, Pascal row mod p^prec.
        const int kk = kappa.k - 1;
        const std::uint64_t M = ctx->modulus();
        std::vector<std::uint64_t> row(kk + 1, 0);
        row[0] = 1;
        for (int t = 1; t <= kk; ++t)
            for (int j = t; j >= 1; --j) row[j] = addmod(row[j], row[j - 1], M);
        CycloElt up = CycloElt::one(ctx);
        for (int n = 1; n <= kk && n < N; ++n) {
            up = up * u;
            out.coeffs[n] = up * CycloElt(ctx, row[n]);
        }
        out.truncation_index = std::min(N, kk + 1);
        return out;
    }

    Valuation uv = u.valuation();
    if (u.is_zero()) return out;
    if (!(uv.known_ge(Rat(1, static_cast<std::int64_t>(ctx->p - 1)))))
        throw std::domain_error("kappa_series: convergence margin violated (v(u) too small)");

    const CycloElt& w = kappa.w0;
    if (auto wr = w.rational_residue(w.known_prec())) {
        // Exact path: (1 + u z)^{E} by repeated squaring of truncated polynomials.
        std::vector<CycloElt> base(N, CycloElt::zero(ctx));
        base[0] = CycloElt::one(ctx);
        if (N > 1) base[1] = u;
        std::vector<CycloElt> acc(N, CycloElt::zero(ctx));
        acc[0] = CycloElt::one(ctx);
        std::uint64_t E = *wr;
        auto mul_trunc = [&](const std::vector<CycloElt>& A, const std::vector<CycloElt>& B) {
            std::vector<CycloElt> C(N, CycloElt::zero(ctx));
            for (int i = 0; i < N; ++i) {
                if (A[i].is_zero()) continue;
                for (int j = 0; i + j < N; ++j) {
                    if (B[j].is_zero()) continue;
                    C[i + j] += A[i] * B[j];
                }
            }
            return C;
        };
        while (E) {
            if (E & 1) acc = mul_trunc(acc, base);
            E >>= 1;
            if (E) base = mul_trunc(base, base);
        }
        out.coeffs = std::move(acc);
        return out;
    }

    // General exponent: binomial series with tracked precision; requires v(u) >= 1.
    if (!uv.known_ge(Rat(1)))
        throw std::domain_error("kappa_series: non-rational exponent requires v(u) >= 1");
    CycloElt prod = CycloElt::one(ctx);   // prod (w - i)
    CycloElt upow = CycloElt::one(ctx);   // u^n
    std::int64_t fact_vp = 0;
    int vu = static_cast<int>(uv.value().floor());
    vu = std::max(vu, 1);
    for (int n = 1; n < N; ++n) {
        prod = prod * (w - CycloElt::from_int(ctx, n - 1));
        upow = upow * u;
        fact_vp += val_p_u64(static_cast<std::uint64_t>(n), ctx->p);
        if (static_cast<std::int64_t>(n) * vu - fact_vp >= ctx->prec) {
            out.truncation_index = n;
            break;
        }
        CycloElt term = prod * upow;
        term = term.div_p_pow_exact(static_cast<int>(fact_vp));
        // divide by the unit part of n!
        std::uint64_t mk = ctx->pk(term.known_prec());
        std::uint64_t unit_fact = 1;
        for (int i = 2; i <= n; ++i) {
            std::uint64_t f = static_cast<std::uint64_t>(i);
            while (f % ctx->p == 0) f /= ctx->p;
            unit_fact = mulmod(unit_fact, f % mk, mk);
        }
        std::vector<std::uint64_t> cc = term.coeffs();
        std::uint64_t ui = invmod(unit_fact, mk);
        for (auto& v : cc) v = mulmod(v % mk, ui, mk);
        out.coeffs[n] = CycloElt::from_pi_coeffs(ctx, cc, term.known_prec());
    }
    return out;
}

CycloElt t_coordinate(const PadicContext* ctx, const WeightChar& kappa) {
    CycloElt g0 = exp_scalar(ctx, 2 * static_cast<std::int64_t>(ctx->p));
    CycloElt val = kappa_eval(ctx, kappa, g0);
    // kappa_eval gives kappa(g0)/g0 in both conventions; multiply the g0 back.
    val = val * g0;
    return val - CycloElt::one(ctx);
}

}  // namespace upslope
