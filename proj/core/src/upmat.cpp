#include "upslope/upmat.hpp"

#include <algorithm>
#include <stdexcept>

#include "upslope/rng.hpp"

namespace upslope {

void UpRecipe::validate(const PadicContext* ctx) const {
    if (t < 1) throw std::invalid_argument("UpRecipe: t >= 1 required");
    if (shape == Shape::Tl && ell < 2)
        throw std::invalid_argument("UpRecipe: Tl recipe needs the prime l");
    std::int64_t per = operators_per_slot(ctx);
    std::vector<std::int64_t> row(t, 0), col(t, 0);
    for (const auto& en : entries) {
        if (en.target < 0 || en.target >= t || en.source < 0 || en.source >= t)
            throw std::invalid_argument("UpRecipe: block index out of range");
        MonoidElt::Shape want =
            shape == Shape::Up ? MonoidElt::Shape::Up : MonoidElt::Shape::Tl;
        if (en.delta.shape != want)
            throw std::invalid_argument("UpRecipe: delta shape does not match the recipe shape");
        ++row[en.target];
        ++col[en.source];
    }
    for (int i = 0; i < t; ++i)
        if (row[i] != per || col[i] != per)
            throw std::invalid_argument(
                "UpRecipe: each block row and column must receive exactly " + std::to_string(per) +
                " operators");
}

TruncatedOpMatrix assemble(CtxPtr ctx, const UpRecipe& recipe, const WeightChar& kappa, int N) {
    recipe.validate(ctx.get());
    TruncatedOpMatrix out;
    out.ctx = ctx;
    out.t = recipe.t;
    out.N = N;
    out.kappa = kappa;
    out.shape = recipe.shape;
    out.ell = recipe.ell;
    out.provenance = recipe.name;
    out.m = Mat(ctx.get(), recipe.t * N, recipe.t * N);
    Rescale b = Rescale::b_basis(ctx.get());
    for (const auto& en : recipe.entries) {
        ActionMatrix am = generating_matrix(en.delta, kappa, N, b);
        for (int n = 0; n < N; ++n)
            for (int n2 = 0; n2 < N; ++n2) {
                if (am.entries.at(n, n2).is_zero()) continue;
                out.m.at(n * recipe.t + en.target, n2 * recipe.t + en.source) +=
                    am.entries.at(n, n2);
            }
    }
    return out;
}

namespace {

DirichletCharacter twist_by_omega_pow(const PadicContext* ctx, const DirichletCharacter& psi,
                                      std::int64_t r2) {
    // psi * omega^{r2}: shift the tame exponent mod p-1
    DirichletCharacter chi = psi;
    std::int64_t pm1 = static_cast<std::int64_t>(ctx->p) - 1;
    std::int64_t tame = (static_cast<std::int64_t>(psi.tame_exp) + (r2 % pm1) + pm1) % pm1;
    chi.tame_exp = static_cast<std::uint64_t>(tame);
    return chi;
}

}  // namespace

Mat classical_block(CtxPtr ctx, const UpRecipe& recipe, const DirichletCharacter& psi, int r) {
    DirichletCharacter chi = twist_by_omega_pow(ctx.get(), psi, -2 * r);
    Mat out(ctx.get(), recipe.t, recipe.t);
    for (const auto& en : recipe.entries) {
        auto dres = en.delta.d.rational_residue(en.delta.d.known_prec());
        if (!dres) throw std::logic_error("classical_block: non-rational d entry");
        std::uint64_t cond = 1;
        for (int i = 0; i < chi.conductor_exp; ++i) cond *= ctx->p;
        out.at(en.target, en.source) +=
            char_eval(ctx.get(), chi, static_cast<std::int64_t>(*dres % cond));
    }
    return out;
}

Mat classical_block_deformed(CtxPtr ctx, const UpRecipe& recipe, const DirichletCharacter& psi,
                             int r, const CycloElt& w_exp) {
    DirichletCharacter chi = twist_by_omega_pow(ctx.get(), psi, -2 * r);
    Mat out(ctx.get(), recipe.t, recipe.t);
    for (const auto& en : recipe.entries) {
        auto dres = en.delta.d.rational_residue(en.delta.d.known_prec());
        if (!dres) throw std::logic_error("classical_block_deformed: non-rational d entry");
        std::uint64_t cond = 1;
        for (int i = 0; i < chi.conductor_exp; ++i) cond *= ctx->p;
        CycloElt val = char_eval(ctx.get(), chi, static_cast<std::int64_t>(*dres % cond));
        CycloElt bracket = one_unit_part(ctx.get(), *dres);
        val = val * one_unit_pow(ctx.get(), bracket.coeffs()[0], w_exp);
        out.at(en.target, en.source) += val;
    }
    return out;
}

Example53 example53_scenario(int prec) {
    Example53 ex;
    ex.ctx = PadicContext::create(3, 2, prec, 3);
    // conductor 9, psi(-1) = 1, psi(4) = zeta_3 (wild exponent 2 on the
    // generator 2 of (Z/9)^x)
    ex.psi.conductor_exp = 2;
    ex.psi.tame_exp = 0;
    ex.psi.wild_exp = 2;
    SplittingMap sm = SplittingMap::hamilton_at_3(ex.ctx);
    auto deltas = delta_decomposition(sm);
    ex.recipe.t = 1;
    ex.recipe.shape = UpRecipe::Shape::Up;
    ex.recipe.name = "example-5";
    for (const auto& q : deltas) {
        Mat img = split_at_p(q, sm);
        ex.recipe.entries.push_back(
            {0, 0,
             MonoidElt::make(img.at(0, 0), img.at(0, 1), img.at(1, 0), img.at(1, 1),
                             MonoidElt::Shape::Up, ex.ctx->m)});
    }
    return ex;
}

TruncatedOpMatrix example53_up(const CycloElt& w0, int N) {
    Example53 ex = example53_scenario(w0.ctx()->prec);
    if (w0.ctx()->p != 3 || w0.ctx()->m != 2)
        throw std::invalid_argument("example53_up: w0 must live in the p=3, m=2 context");
    WeightChar kappa = WeightChar::disk(ex.psi, CycloElt::from_pi_coeffs(ex.ctx.get(), w0.coeffs(),
                                                                         w0.known_prec()));
    return assemble(ex.ctx, ex.recipe, kappa, N);
}

StabilityReport truncation_stability(CtxPtr ctx, const UpRecipe& recipe, const WeightChar& kappa,
                                     int n_slopes) {
    StabilityReport rep;
    for (int N = n_slopes; N <= n_slopes + ctx->prec; N += 6) {
        TruncatedOpMatrix a = assemble(ctx, recipe, kappa, N);
        TruncatedOpMatrix b = assemble(ctx, recipe, kappa, N + 5);
        PolygonData pa = newton_polygon(char_series(a.m));
        PolygonData pb = newton_polygon(char_series(b.m));
        auto sa = pa.slopes();
        auto sb = pb.slopes();
        if (static_cast<int>(sa.size()) < n_slopes || static_cast<int>(sb.size()) < n_slopes)
            continue;
        bool agree = true;
        for (int i = 0; i < n_slopes && agree; ++i)
            agree = sa[i].second && sb[i].second && sa[i].first == sb[i].first;
        if (agree) {
            rep.stable = true;
            rep.certified_N = N;
            for (int i = 0; i < n_slopes; ++i) rep.slopes.push_back(sa[i].first);
            return rep;
        }
    }
    throw std::domain_error(
        "truncation_stability: slopes failed to stabilize (precision or truncation bug)");
}

ErrorDecompositionReport verify_error_decomposition(const TruncatedOpMatrix& M,
                                                    const std::vector<Mat>& classical_blocks) {
    const PadicContext* ctx = M.ctx.get();
    ErrorDecompositionReport rep;
    rep.strict = ctx->m >= 4;
    if (classical_blocks.empty())
        throw std::invalid_argument("verify_error_decomposition: need at least one block");
    for (const auto& cb : classical_blocks)
        if (cb.rows() != M.t || cb.cols() != M.t)
            throw std::invalid_argument("verify_error_decomposition: block dimension mismatch");
    const int q = static_cast<int>(classical_blocks.size());
    const bool up = M.shape == UpRecipe::Shape::Up;
    CycloElt ell_elt = CycloElt::from_int(ctx, up ? 1 : M.ell);

    for (int bi = 0; bi < M.N; ++bi) {
        for (int bj = 0; bj < M.N; ++bj) {
            // required valuation for the (bi, bj) block of the difference
            int need;
            if (up)
                need = bi == bj ? bi + 1 : (bi > bj ? bi + 2 : bj);
            else
                need = bi == bj ? 1 : (bi > bj ? bi - bj + 2 : bj - bi);
            for (int i = 0; i < M.t; ++i)
                for (int j = 0; j < M.t; ++j) {
                    CycloElt x = M.m.at(bi * M.t + i, bj * M.t + j);
                    if (bi == bj) {
                        CycloElt c = classical_blocks[bi % q].at(i, j);
                        c = up ? c.mul_p_pow(bi)
                               : c * ell_elt.pow_u64(static_cast<std::uint64_t>(bi));
                        x = x - c;
                    }
                    if (!x.valuation().known_ge(Rat(need))) {
                        rep.ok = false;
                        rep.violations.push_back(
                            "block (" + std::to_string(bi) + "," + std::to_string(bj) +
                            ") entry (" + std::to_string(i) + "," + std::to_string(j) +
                            "): v = " + x.valuation().str() + " < " + std::to_string(need));
                    }
                }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Synthetic recipes

namespace {

std::vector<int> random_permutation(SplitMix64& rng, int t) {
    std::vector<int> perm(t);
    for (int i = 0; i < t; ++i) perm[i] = i;
    for (int i = t - 1; i > 0; --i)
        std::swap(perm[i], perm[static_cast<int>(rng.below(static_cast<std::uint64_t>(i + 1)))]);
    return perm;
}

MonoidElt random_delta(const PadicContext* ctx, SplitMix64& rng, bool up_shape,
                       std::int64_t det_target) {
    const std::uint64_t p = ctx->p;
    const std::uint64_t M = ctx->modulus();
    for (;;) {
        std::uint64_t a;
        if (up_shape) {
            a = rng.below(M / p) * p;  // v(a) = 1 after the unit check below
            if (a == 0 || (a / p) % p == 0) continue;
        } else {
            a = rng.below(M);
            if (a % p == 0) continue;
        }
        std::uint64_t pm = 1;
        for (int i = 0; i < ctx->m; ++i) pm *= p;
        std::uint64_t c = mulmod(rng.below(M / pm + 1), pm, M);
        std::int64_t b = rng.range(-40, 40);

        CycloElt A(ctx, a), B = CycloElt::from_int(ctx, b), C(ctx, c);
        CycloElt num = CycloElt::from_int(ctx, det_target) + B * C;
        CycloElt D;
        try {
            D = num.div_exact(A);  // then a d - b c = det_target at known precision
        } catch (const std::domain_error&) {
            continue;
        }
        if (!D.valuation().known_eq(Rat(0))) continue;
        try {
            return MonoidElt::make(A, B, C, D,
                                   up_shape ? MonoidElt::Shape::Up : MonoidElt::Shape::Tl, ctx->m);
        } catch (const std::invalid_argument&) {
            continue;
        }
    }
}

// Hodge slopes of a t x t integral matrix, all in [0, 1) and the deformed
// determinant stable: the screening used for sharp-bound synthetic data.
bool screen_recipe(CtxPtr ctx, const UpRecipe& rec, const DirichletCharacter& psi) {
    const int q = static_cast<int>((ctx->p - 1) / 2);
    Rat sum_alpha_total(0);
    for (int r = 0; r < q; ++r) {
        Mat cb = classical_block(ctx, rec, psi, r);
        HodgePolygon hp = hodge_polygon(cb);
        if (!hp.complete) return false;
        Rat sum_alpha(0);
        for (const auto& a : hp.slopes) {
            if (a < Rat(0) || a >= Rat(1)) return false;
            sum_alpha = sum_alpha + a;
        }
        sum_alpha_total = sum_alpha_total + sum_alpha;
        // deformed blocks at the sampled exponents keep the determinant
        // valuation (n = 0..3 covers the acceptance window)
        for (int n = 0; n <= 3; ++n) {
            Mat db = classical_block_deformed(ctx, rec, psi, r,
                                              CycloElt::from_int(ctx.get(), -2 * n));
            Valuation dv = det(db).valuation();
            if (!dv.known_eq(sum_alpha)) return false;
        }
    }
    return true;
}

}  // namespace

UpRecipe synth_up_recipe(CtxPtr ctx, const DirichletCharacter& psi, int t, std::uint64_t seed) {
    SplitMix64 rng(seed);
    for (int attempt = 0; attempt < 512; ++attempt) {
        UpRecipe rec;
        rec.t = t;
        rec.shape = UpRecipe::Shape::Up;
        rec.name = "synth-up-t" + std::to_string(t) + "-seed" + std::to_string(seed);
        for (std::uint64_t k = 0; k < ctx->p; ++k) {
            auto perm = random_permutation(rng, t);
            for (int j = 0; j < t; ++j)
                rec.entries.push_back(
                    {perm[j], j,
                     random_delta(ctx.get(), rng, true, static_cast<std::int64_t>(ctx->p))});
        }
        rec.validate(ctx.get());
        if (screen_recipe(ctx, rec, psi)) return rec;
    }
    throw std::logic_error("synth_up_recipe: rejection sampling failed (seed exhausted)");
}

UpRecipe synth_tl_recipe(CtxPtr ctx, const DirichletCharacter& psi, int t, std::int64_t ell,
                         std::uint64_t seed) {
    (void)psi;
    SplitMix64 rng(seed);
    UpRecipe rec;
    rec.t = t;
    rec.shape = UpRecipe::Shape::Tl;
    rec.ell = ell;
    rec.name = "synth-tl-t" + std::to_string(t) + "-seed" + std::to_string(seed);
    for (std::int64_t k = 0; k < ell + 1; ++k) {
        auto perm = random_permutation(rng, t);
        for (int j = 0; j < t; ++j)
            rec.entries.push_back({perm[j], j, random_delta(ctx.get(), rng, false, ell)});
    }
    rec.validate(ctx.get());
    return rec;
}

std::vector<std::vector<Rat>> twist_alpha_lists(CtxPtr ctx, const UpRecipe& recipe,
                                                const DirichletCharacter& psi) {
    const int q = static_cast<int>((ctx->p - 1) / 2);
    std::vector<std::vector<Rat>> out;
    for (int r = 0; r < q; ++r) {
        HodgePolygon hp = hodge_polygon(classical_block(ctx, recipe, psi, r));
        if (!hp.complete)
            throw std::domain_error("twist_alpha_lists: Hodge polygon uncertified");
        out.push_back(hp.slopes);
    }
    return out;
}

}  // namespace upslope
