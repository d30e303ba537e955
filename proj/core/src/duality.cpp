#include "upslope/duality.hpp"

#include <stdexcept>

namespace upslope {

ClassicalBlock ClassicalBlock::with_conj_partner(Mat m, std::string label) {
    ClassicalBlock b;
    b.partner = m.conj_entrywise();
    b.central = Mat::identity(m.ctx(), m.rows());
    b.u = std::move(m);
    b.label = std::move(label);
    return b;
}

CycloElt pairing(const std::vector<CycloElt>& phi, const std::vector<CycloElt>& phi2) {
    if (phi.size() != phi2.size() || phi.empty())
        throw std::invalid_argument("pairing: length mismatch");
    CycloElt acc = CycloElt::zero(phi[0].ctx());
    for (std::size_t i = 0; i < phi.size(); ++i) acc += phi[i] * phi2[i];
    return acc;
}

bool verify_adjunction(const ClassicalBlock& B) {
    if (!B.partner) throw std::invalid_argument("verify_adjunction: missing partner matrix");
    const PadicContext* ctx = B.u.ctx();
    Mat lhs = B.u.transpose() * (*B.partner);
    Mat rhs = B.central.transpose().scaled(CycloElt::from_int(ctx, static_cast<std::int64_t>(ctx->p)));
    return lhs.equal_at_min_prec(rhs);
}

bool hodge_duality_check(const ClassicalBlock& B) {
    if (!B.partner) throw std::invalid_argument("hodge_duality_check: missing partner matrix");
    HodgePolygon a = hodge_polygon(B.u);
    HodgePolygon b = hodge_polygon(*B.partner);
    if (!a.complete || !b.complete) return false;
    const std::size_t t = a.slopes.size();
    if (b.slopes.size() != t) return false;
    for (std::size_t i = 0; i < t; ++i) {
        if (a.slopes[i] < Rat(0) || a.slopes[i] > Rat(1)) return false;
        if (!(a.slopes[i] + b.slopes[t - 1 - i] == Rat(1))) return false;
    }
    return true;
}

ResidualProjector build_projector(const std::string& label, const std::vector<EigenDatum>& data) {
    if (data.empty()) throw std::invalid_argument("build_projector: no eigen data");
    const PadicContext* ctx = data[0].hecke.ctx();
    const int n = data[0].hecke.rows();
    Mat P = Mat::identity(ctx, n);
    ResidualProjector out;
    for (const auto& datum : data) {
        out.hecke.push_back(datum.hecke);
        for (const auto& rej : datum.rejected) {
            CycloElt diff = datum.accepted - rej;
            if (!diff.valuation().known_eq(Rat(0)))
                throw std::invalid_argument(
                    "build_projector: lifted eigenvalues are not distinguishable mod pi");
            Mat term = datum.hecke - Mat::identity(ctx, n).scaled(rej);
            P = P * term.scaled(diff.inverse_unit());
        }
    }
    // P^2 = P mod pi
    Mat d = P * P - P;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!d.at(i, j).valuation().known_ge(Rat(1, ctx->e)))
                throw std::domain_error("build_projector: P^2 != P mod pi");
    // commutation with the supplied operators at working precision
    for (const auto& h : out.hecke)
        if (!(P * h).equal_at_min_prec(h * P))
            throw std::domain_error("build_projector: projector does not commute with its data");
    out.label = label;
    out.p = P;
    return out;
}

Mat idempotent_limit(const Mat& P) {
    const PadicContext* ctx = P.ctx();
    Mat q = P;
    const int bound = ctx->prec * ctx->e + 4;
    for (int iter = 0; iter < bound; ++iter) {
        Mat next = q.pow_u64(ctx->p);
        if (next.equal_at_min_prec(q)) {
            Mat d = next * next - next;
            if (!d.is_zero())
                throw std::logic_error("idempotent_limit: fixed point is not idempotent");
            return next;
        }
        q = next;
    }
    throw std::domain_error(
        "idempotent_limit: no convergence within prec*e iterations (P^2 != P mod pi?)");
}

void idempotent_image_basis(const Mat& Q, Mat& C, Mat& D) {
    const PadicContext* ctx = Q.ctx();
    const int n = Q.rows();
    Mat W = Q;
    std::vector<int> pivot_rows;
    std::vector<int> basis_cols;
    std::vector<bool> col_used(n, false);
    for (;;) {
        // unit pivot in an unused column, smallest (row, col)
        int pr = -1, pc = -1;
        for (int i = 0; i < n && pr < 0; ++i)
            for (int j = 0; j < n; ++j) {
                if (col_used[j]) continue;
                bool row_taken = false;
                for (int r : pivot_rows) row_taken |= (r == i);
                if (row_taken) continue;
                if (W.at(i, j).valuation().known_eq(Rat(0))) {
                    pr = i;
                    pc = j;
                    break;
                }
            }
        if (pr < 0) break;
        col_used[pc] = true;
        pivot_rows.push_back(pr);
        basis_cols.push_back(pc);
        CycloElt inv = W.at(pr, pc).inverse_unit();
        for (int j = 0; j < n; ++j) {
            if (col_used[j] || W.at(pr, j).is_zero()) continue;
            CycloElt f = W.at(pr, j) * inv;
            for (int i = 0; i < n; ++i) W.at(i, j) -= f * W.at(i, pc);
        }
    }
    // remaining unused columns must vanish (exact idempotents have unit pivots
    // exactly rank-many times)
    for (int j = 0; j < n; ++j) {
        if (col_used[j]) continue;
        for (int i = 0; i < n; ++i)
            if (!W.at(i, j).is_zero())
                throw std::domain_error(
                    "idempotent_image_basis: non-unit pivot (input is not an exact idempotent)");
    }
    const int r = static_cast<int>(basis_cols.size());
    C = Mat(ctx, n, r);
    for (int k = 0; k < r; ++k)
        for (int i = 0; i < n; ++i) C.at(i, k) = W.at(i, basis_cols[k]);
    // D = S^{-1} E with S = C[pivot_rows] (unit determinant by construction)
    Mat S(ctx, r, r);
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) S.at(a, b) = C.at(pivot_rows[a], b);
    // invert S by elimination with unit pivots
    Mat Sinv = Mat::identity(ctx, r);
    Mat T = S;
    for (int k = 0; k < r; ++k) {
        int pr = -1;
        for (int i = k; i < r; ++i)
            if (T.at(i, k).valuation().known_eq(Rat(0))) {
                pr = i;
                break;
            }
        if (pr < 0) throw std::logic_error("idempotent_image_basis: pivot-row matrix not invertible");
        if (pr != k)
            for (int j = 0; j < r; ++j) {
                std::swap(T.at(pr, j), T.at(k, j));
                std::swap(Sinv.at(pr, j), Sinv.at(k, j));
            }
        CycloElt inv = T.at(k, k).inverse_unit();
        for (int j = 0; j < r; ++j) {
            T.at(k, j) = T.at(k, j) * inv;
            Sinv.at(k, j) = Sinv.at(k, j) * inv;
        }
        for (int i = 0; i < r; ++i) {
            if (i == k || T.at(i, k).is_zero()) continue;
            CycloElt f = T.at(i, k);
            for (int j = 0; j < r; ++j) {
                T.at(i, j) -= f * T.at(k, j);
                Sinv.at(i, j) -= f * Sinv.at(k, j);
            }
        }
    }
    D = Mat(ctx, r, n);
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) D.at(a, pivot_rows[b]) = Sinv.at(a, b);
}

Splitting split_and_factor(const Mat& M, const std::vector<Mat>& projs,
                           const std::vector<std::string>& labels) {
    const PadicContext* ctx = M.ctx();
    const int n = M.rows();
    if (projs.empty()) throw std::invalid_argument("split_and_factor: no projectors");
    // validate the family
    Mat sum(ctx, n, n);
    for (std::size_t i = 0; i < projs.size(); ++i) {
        const Mat& q = projs[i];
        if (!(q * q).equal_at_min_prec(q))
            throw std::invalid_argument("split_and_factor: projector is not idempotent");
        if (!(q * M).equal_at_min_prec(M * q))
            throw std::invalid_argument("split_and_factor: projector does not commute with M");
        for (std::size_t j = 0; j < i; ++j)
            if (!(projs[i] * projs[j]).is_zero() || !(projs[j] * projs[i]).is_zero())
                throw std::invalid_argument("split_and_factor: projectors do not annihilate");
        sum += q;
    }
    if (!sum.equal_at_min_prec(Mat::identity(ctx, n)))
        throw std::invalid_argument("split_and_factor: projectors do not sum to the identity");

    Splitting out;
    int total = 0;
    CharSeries whole = char_series(M);
    std::vector<CycloElt> prod{CycloElt::one(ctx)};
    for (std::size_t k = 0; k < projs.size(); ++k) {
        Mat C, D;
        idempotent_image_basis(projs[k], C, D);
        Splitting::Block blk;
        blk.label = k < labels.size() ? labels[k] : "block-" + std::to_string(k);
        blk.restricted = D * (M * C);
        blk.dim = blk.restricted.rows();
        blk.cs = char_series(blk.restricted);
        total += blk.dim;
        // multiply the factor into the running product
        std::vector<CycloElt> np(prod.size() + blk.cs.c.size() - 1, CycloElt::zero(ctx));
        for (std::size_t i = 0; i < prod.size(); ++i)
            for (std::size_t j = 0; j < blk.cs.c.size(); ++j) np[i + j] += prod[i] * blk.cs.c[j];
        prod = std::move(np);
        out.blocks.push_back(std::move(blk));
    }
    if (total != n) throw std::logic_error("split_and_factor: block dimensions do not sum");
    if (prod.size() != whole.c.size())
        throw std::logic_error("split_and_factor: factor degrees do not sum");
    for (std::size_t i = 0; i < prod.size(); ++i)
        if (!prod[i].equal_at_min_prec(whole.c[i]))
            throw std::logic_error("split_and_factor: product formula failed at X^" +
                                   std::to_string(i));
    return out;
}

}  // namespace upslope
