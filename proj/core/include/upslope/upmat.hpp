#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "upslope/chars.hpp"
#include "upslope/matrix.hpp"
#include "upslope/quat.hpp"
#include "upslope/spectral.hpp"
#include "upslope/weightact.hpp"

namespace upslope {

// Block recipe for a truncated U_p (or T_l) operator: t block rows/columns,
// each receiving exactly p (resp. l+1) monoid elements.
struct UpRecipe {
    enum class Shape { Up, Tl };
    struct Entry {
        int target = 0;  // block row
        int source = 0;  // block column
        MonoidElt delta;
    };

    int t = 1;
    Shape shape = Shape::Up;
    std::int64_t ell = 0;  // for Tl
    std::vector<Entry> entries;
    std::string name;

    void validate(const PadicContext* ctx) const;
    std::int64_t operators_per_slot(const PadicContext* ctx) const {
        return shape == Shape::Up ? static_cast<std::int64_t>(ctx->p) : ell + 1;
    }
};

// tN x tN truncation of the operator in the interleaved basis
// 1_0..1_{t-1}, p z_0..p z_{t-1}, p^2 z_0^2, ...; block (n, n') is the sum of
// the rescaled action matrices routed source -> target by the recipe.
struct TruncatedOpMatrix {
    Mat m;
    int t = 1;
    int N = 0;
    CtxPtr ctx;
    WeightChar kappa;
    UpRecipe::Shape shape = UpRecipe::Shape::Up;
    std::int64_t ell = 0;
    std::string provenance;
};

TruncatedOpMatrix assemble(CtxPtr ctx, const UpRecipe& recipe, const WeightChar& kappa, int N);

// The weight-2 classical t x t block for the twist psi omega^{-2r}:
// block(i, j) = sum over routed deltas of (psi omega^{-2r})(d).
Mat classical_block(CtxPtr ctx, const UpRecipe& recipe, const DirichletCharacter& psi, int r);

// Deformed variant: entries sum (psi omega^{-2r})(d) <d>^{w_exp}. Used by the
// synthetic-recipe sanity screen.
Mat classical_block_deformed(CtxPtr ctx, const UpRecipe& recipe, const DirichletCharacter& psi,
                             int r, const CycloElt& w_exp);

// The scenario with the Hamilton order at p = 3, conductor-9 psi with
// psi(-1) = 1: t = 1 and the three norm-3 elements routed 0 -> 0.
struct Example53 {
    CtxPtr ctx;
    DirichletCharacter psi;
    UpRecipe recipe;
};
Example53 example53_scenario(int prec = 40);
TruncatedOpMatrix example53_up(const CycloElt& w0, int N);

// Slopes at block sizes N and N+5 must agree on the first n_slopes entries;
// returns the certified N (ladder n_slopes, n_slopes+6, ...).
struct StabilityReport {
    bool stable = false;
    int certified_N = 0;
    std::vector<Rat> slopes;
};
StabilityReport truncation_stability(CtxPtr ctx, const UpRecipe& recipe, const WeightChar& kappa,
                                     int n_slopes);

// Block-valuation audit of M - Diag(p^n C_{n mod q}) (resp. l^n C) against
// the error patterns: Up diagonal p^{n+1}, below p^{i+2}, above p^j;
// Tl diagonal p, below p^{i-j+2}, above p^{j-i}. Strict for m >= 4.
struct ErrorDecompositionReport {
    bool ok = true;
    bool strict = false;
    std::vector<std::string> violations;
};
ErrorDecompositionReport verify_error_decomposition(const TruncatedOpMatrix& M,
                                                    const std::vector<Mat>& classical_blocks);

// Seeded synthetic recipes (m = 4 contexts). Deltas have det = p mod p^25
// (resp. det = l mod p^25) and the generator rejection-samples until the
// weight-2 block has Hodge slopes in [0, 1) and a stable deformed
// determinant, the hypotheses the sharp-bound machinery needs.
UpRecipe synth_up_recipe(CtxPtr ctx, const DirichletCharacter& psi, int t, std::uint64_t seed);
UpRecipe synth_tl_recipe(CtxPtr ctx, const DirichletCharacter& psi, int t, std::int64_t ell,
                         std::uint64_t seed);

// Hodge slopes of the q twisted weight-2 blocks (alpha lists for the
// improved bound).
std::vector<std::vector<Rat>> twist_alpha_lists(CtxPtr ctx, const UpRecipe& recipe,
                                                const DirichletCharacter& psi);

}  // namespace upslope
