#include "upslope/spectral.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace upslope {

CharSeries char_series(const Mat& M) {
    if (M.rows() != M.cols()) throw std::invalid_argument("char_series: square matrix required");
    const PadicContext* ctx = M.ctx();
    const int n = M.rows();
    CharSeries out;
    if (n == 0) {
        out.c = {CycloElt::one(ctx)};
        return out;
    }

    // Berkowitz: iterate over leading principal submatrices; C_r (length r+1)
    // holds the coefficients of det(XI - A_r), highest power first. The
    // transition to r+1 multiplies by the Toeplitz column
    // (1, -a, -RS, -R A S, ..., -R A^{r-1} S).
    std::vector<CycloElt> C{CycloElt::one(ctx), -M.at(0, 0)};
    for (int r = 1; r < n; ++r) {
        // first column of the Toeplitz matrix, length r+2
        std::vector<CycloElt> col;
        col.reserve(r + 2);
        col.push_back(CycloElt::one(ctx));
        col.push_back(-M.at(r, r));
        // w = R A^k, dotted against S
        std::vector<CycloElt> w(r);
        for (int j = 0; j < r; ++j) w[j] = M.at(r, j);
        for (int k = 0; k < r; ++k) {
            CycloElt dot = CycloElt::zero(ctx);
            for (int j = 0; j < r; ++j) {
                if (w[j].is_zero()) continue;
                dot += w[j] * M.at(j, r);
            }
            col.push_back(-dot);
            if (k + 1 < r) {
                std::vector<CycloElt> nw(r, CycloElt::zero(ctx));
                for (int j = 0; j < r; ++j) {
                    if (w[j].is_zero()) continue;
                    for (int l = 0; l < r; ++l) {
                        if (M.at(j, l).is_zero()) continue;
                        nw[l] += w[j] * M.at(j, l);
                    }
                }
                w = std::move(nw);
            }
        }
        std::vector<CycloElt> next(r + 2, CycloElt::zero(ctx));
        for (int i = 0; i < r + 2; ++i)
            for (int j = 0; j <= std::min<int>(i, r); ++j) {
                if (col[i - j].is_zero()) continue;
                next[i] += col[i - j] * C[j];
            }
        C = std::move(next);
    }
    out.c = std::move(C);
    return out;
}

CycloElt det(const Mat& M) {
    CharSeries cs = char_series(M);
    CycloElt d = cs.c.back();
    if (M.rows() % 2 != 0) d = -d;
    return d;
}

// ---------------------------------------------------------------------------
// Polygons

Rat PolygonData::y_at(std::int64_t x) const {
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
        if (x >= vertices[i].x && x <= vertices[i + 1].x) {
            const auto& a = vertices[i];
            const auto& b = vertices[i + 1];
            Rat slope = (b.y - a.y) / Rat(b.x - a.x);
            return a.y + slope * Rat(x - a.x);
        }
    }
    if (!vertices.empty() && x == vertices.front().x) return vertices.front().y;
    throw std::out_of_range("PolygonData::y_at: x outside the polygon");
}

bool PolygonData::has_vertex_at(std::int64_t x) const {
    for (const auto& v : vertices)
        if (v.x == x) return true;
    return false;
}

bool PolygonData::slope_certified(std::int64_t idx) const {
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i)
        if (idx >= vertices[i].x && idx < vertices[i + 1].x)
            return vertices[i].exact && vertices[i + 1].exact;
    return false;
}

std::vector<std::pair<Rat, bool>> PolygonData::slopes() const {
    std::vector<std::pair<Rat, bool>> out;
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
        const auto& a = vertices[i];
        const auto& b = vertices[i + 1];
        Rat slope = (b.y - a.y) / Rat(b.x - a.x);
        bool cert = a.exact && b.exact;
        for (std::int64_t k = a.x; k < b.x; ++k) out.emplace_back(slope, cert);
    }
    return out;
}

std::vector<Rat> PolygonData::certified_slopes(int count) const {
    auto all = slopes();
    if (static_cast<int>(all.size()) < count)
        throw std::out_of_range("certified_slopes: polygon too short");
    std::vector<Rat> out;
    for (int i = 0; i < count; ++i) {
        if (!all[i].second)
            throw std::domain_error("certified_slopes: slope " + std::to_string(i) +
                                    " is not certified at working precision");
        out.push_back(all[i].first);
    }
    return out;
}

Rat SlopeMultiset::lambda(std::size_t n) const {
    if (n > s.size()) throw std::out_of_range("SlopeMultiset::lambda: not enough slopes");
    Rat acc(0);
    for (std::size_t i = 0; i < n; ++i) acc = acc + s[i];
    return acc;
}

namespace {

struct HullPoint {
    std::int64_t x;
    Rat y;
    bool exact;
};

// Lower convex hull by monotone scan (points already sorted by x).
std::vector<HullPoint> lower_hull(const std::vector<HullPoint>& pts) {
    std::vector<HullPoint> h;
    for (const auto& p : pts) {
        while (h.size() >= 2) {
            const auto& a = h[h.size() - 2];
            const auto& b = h[h.size() - 1];
            // drop b if it lies on or above segment a-p
            Rat lhs = (b.y - a.y) * Rat(p.x - a.x);
            Rat rhs = (p.y - a.y) * Rat(b.x - a.x);
            if (lhs >= rhs)
                h.pop_back();
            else
                break;
        }
        h.push_back(p);
    }
    return h;
}

}  // namespace

PolygonData newton_polygon(const CharSeries& cs) {
    if (cs.c.empty() || !cs.c[0].valuation().known_eq(Rat(0)))
        throw std::invalid_argument("newton_polygon: c_0 must be 1");
    std::vector<HullPoint> pts;
    for (std::size_t n = 0; n < cs.c.size(); ++n) {
        Valuation v = cs.c[n].valuation();
        pts.push_back({static_cast<std::int64_t>(n), v.lower_bound(), v.is_exact()});
    }
    auto h = lower_hull(pts);
    PolygonData out;
    for (const auto& p : h) out.vertices.push_back({p.x, p.y, p.exact});
    return out;
}

HodgePolygon hodge_polygon(const Mat& M) {
    if (M.rows() != M.cols()) throw std::invalid_argument("hodge_polygon: square matrix required");
    const PadicContext* ctx = M.ctx();
    const int n = M.rows();
    Mat W = M;
    HodgePolygon out;

    std::vector<int> rows(n), cols(n);
    for (int i = 0; i < n; ++i) rows[i] = cols[i] = i;

    std::vector<Rat> slopes;
    int done = 0;
    for (; done < n; ++done) {
        // minimal-valuation pivot in the remaining block; ties to lowest index
        bool found = false;
        Rat best(0);
        int pr = -1, pc = -1;
        for (int i = done; i < n; ++i)
            for (int j = done; j < n; ++j) {
                Valuation v = W.at(i, j).valuation();
                if (!v.is_exact()) continue;
                if (!found || v.value() < best) {
                    found = true;
                    best = v.value();
                    pr = i;
                    pc = j;
                }
            }
        if (!found) break;  // all-vanishing block at working precision
        // swap pivot into place
        if (pr != done)
            for (int j = 0; j < n; ++j) std::swap(W.at(pr, j), W.at(done, j));
        if (pc != done)
            for (int i = 0; i < n; ++i) std::swap(W.at(i, pc), W.at(i, done));
        const CycloElt pivot = W.at(done, done);
        for (int i = done + 1; i < n; ++i) {
            if (W.at(i, done).is_zero()) continue;
            CycloElt f = W.at(i, done).div_exact(pivot);
            for (int j = done; j < n; ++j) W.at(i, j) -= f * W.at(done, j);
        }
        for (int j = done + 1; j < n; ++j) {
            if (W.at(done, j).is_zero()) continue;
            CycloElt f = W.at(done, j).div_exact(pivot);
            for (int i = done; i < n; ++i) W.at(i, j) -= f * W.at(i, done);
        }
        slopes.push_back(best);
    }
    std::sort(slopes.begin(), slopes.end());
    out.slopes = slopes;
    out.computed = done;
    out.complete = done == n;
    if (!out.complete) {
        // the remaining block vanished at working precision: its elementary
        // divisors are only bounded below, reported via inexact vertices
    }
    out.polygon.vertices.push_back({0, Rat(0), true});
    Rat acc(0);
    for (std::size_t i = 0; i < slopes.size(); ++i) {
        acc = acc + slopes[i];
        // merge collinear steps later; vertices per step keep it simple
        out.polygon.vertices.push_back({static_cast<std::int64_t>(i + 1), acc, true});
    }
    if (!out.complete) {
        int kp_min = ctx->prec;
        for (int i = done; i < n; ++i)
            for (int j = done; j < n; ++j) kp_min = std::min(kp_min, W.at(i, j).known_prec());
        for (int i = done; i < n; ++i) {
            acc = acc + Rat(kp_min);
            out.polygon.vertices.push_back({static_cast<std::int64_t>(i + 1), acc, false});
        }
    }
    return out;
}

namespace {

CycloElt minor_det(const Mat& M, const std::vector<int>& rows, const std::vector<int>& cols,
                   std::size_t depth, std::vector<bool>& used) {
    const PadicContext* ctx = M.ctx();
    if (depth == rows.size()) return CycloElt::one(ctx);
    CycloElt acc = CycloElt::zero(ctx);
    int sign = 1;
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (used[j]) continue;
        used[j] = true;
        CycloElt sub = minor_det(M, rows, cols, depth + 1, used);
        used[j] = false;
        CycloElt term = M.at(rows[depth], cols[j]) * sub;
        acc = sign > 0 ? acc + term : acc - term;
        sign = -sign;
    }
    return acc;
}

void subsets_of_size(int n, int k, std::vector<std::vector<int>>& out) {
    std::vector<int> cur(k);
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == k) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i <= n - (k - depth); ++i) {
            cur[depth] = i;
            rec(i + 1, depth + 1);
        }
    };
    if (k >= 0) rec(0, 0);
}

}  // namespace

std::vector<Rat> hodge_slopes_by_minors(const Mat& M) {
    const int n = M.rows();
    if (n > 5) throw std::invalid_argument("hodge_slopes_by_minors: oracle limited to n <= 5");
    // vertex i = minimal valuation over all i x i minors
    std::vector<Rat> heights(n + 1, Rat(0));
    for (int k = 1; k <= n; ++k) {
        std::vector<std::vector<int>> subs;
        subsets_of_size(n, k, subs);
        bool found = false;
        Rat best(0);
        for (const auto& rs : subs)
            for (const auto& cs : subs) {
                std::vector<bool> used(cs.size(), false);
                CycloElt d = minor_det(M, rs, cs, 0, used);
                Valuation v = d.valuation();
                if (!v.is_exact()) continue;
                if (!found || v.value() < best) {
                    found = true;
                    best = v.value();
                }
            }
        if (!found) best = Rat(M.ctx()->prec);
        heights[k] = best;
    }
    // slopes = successive differences of the lower hull of (k, heights[k])
    std::vector<HullPoint> pts;
    for (int k = 0; k <= n; ++k) pts.push_back({k, heights[k], true});
    auto h = lower_hull(pts);
    std::vector<Rat> slopes;
    for (std::size_t i = 0; i + 1 < h.size(); ++i) {
        Rat s = (h[i + 1].y - h[i].y) / Rat(h[i + 1].x - h[i].x);
        for (std::int64_t t = h[i].x; t < h[i + 1].x; ++t) slopes.push_back(s);
    }
    return slopes;
}

bool check_np_above_hp(const Mat& M) {
    CharSeries cs = char_series(M);
    PolygonData np = newton_polygon(cs);
    HodgePolygon hp = hodge_polygon(M);
    if (!hp.complete) throw std::domain_error("check_np_above_hp: Hodge polygon not certified");
    for (std::int64_t x = 0; x <= static_cast<std::int64_t>(M.rows()); ++x) {
        Rat hy = hp.polygon.y_at(x);
        Rat ny = np.y_at(x);  // lower bound when vertices are inexact; still >= test input
        if (ny < hy) return false;
    }
    return true;
}

namespace {

// largest x such that every hull vertex with coordinate <= x is exact
std::int64_t certified_range(const PolygonData& poly) {
    std::int64_t x = poly.length();
    for (const auto& v : poly.vertices)
        if (!v.exact) {
            x = std::min(x, v.x - 1);
        }
    return x;
}

}  // namespace

TheoremAReport check_theorem_A(const CharSeries& cs, int t) {
    TheoremAReport rep;
    PolygonData np = newton_polygon(cs);
    auto bound = [&](std::int64_t x) {
        // piecewise-linear through (nt, n(n-1)/2 t): on [nt, (n+1)t] slope n
        std::int64_t n = x / t;
        Rat base(n * (n - 1) / 2 * static_cast<std::int64_t>(t));
        return base + Rat(n) * Rat(x - n * static_cast<std::int64_t>(t));
    };
    std::int64_t deg = cs.degree();
    std::int64_t cert = certified_range(np);
    rep.certified_up_to = cert;
    for (std::int64_t x = 0; x <= deg; ++x) {
        Rat b = bound(x);
        Rat ny = np.y_at(x);  // an exact height for x <= cert, a lower bound beyond
        if (ny >= b) continue;
        if (x <= cert) {
            rep.ok = false;
            rep.violations.push_back("x = " + std::to_string(x) + ": NP " + ny.str() + " < " +
                                     b.str());
        } else {
            // beyond the certified range the hull height is only a lower
            // bound; the comparison is uncertifiable, not a failure
            rep.certified_up_to = std::min(rep.certified_up_to, x - 1);
        }
    }
    return rep;
}

SlopeMultiset improved_bound_slopes(const std::vector<std::vector<Rat>>& alpha_lists, int t,
                                    int count) {
    const int q = static_cast<int>(alpha_lists.size());
    if (q < 1) throw std::invalid_argument("improved_bound_slopes: need at least one twist list");
    for (const auto& al : alpha_lists) {
        if (static_cast<int>(al.size()) != t)
            throw std::invalid_argument("improved_bound_slopes: each alpha list needs t entries");
        for (const auto& a : al)
            if (a < Rat(0) || a > Rat(1))
                throw std::invalid_argument("improved_bound_slopes: alpha outside [0, 1]");
    }
    SlopeMultiset out;
    for (int n = 0; static_cast<int>(out.s.size()) < count + q * t; ++n)
        for (int r = 0; r < q; ++r)
            for (int i = 0; i < t; ++i) out.s.push_back(alpha_lists[r][i] + Rat(q * n + r));
    std::sort(out.s.begin(), out.s.end(),
              [](const Rat& a, const Rat& b) { return a < b; });
    out.s.resize(count);
    return out;
}

SharpBoundReport check_sharp_bound(const CharSeries& cs, const SlopeMultiset& improved, int t,
                                   int k_max, bool strict) {
    SharpBoundReport rep;
    rep.strict = strict;
    PolygonData np = newton_polygon(cs);
    std::int64_t cert = certified_range(np);
    for (int k = 1; k <= k_max; ++k) {
        std::int64_t x = static_cast<std::int64_t>(k) * t;
        if (x > cs.degree()) break;
        Rat lam = improved.lambda(static_cast<std::size_t>(x));
        if (x > cert) {
            rep.notes.push_back("NP(" + std::to_string(x) + ") uncertified at working precision");
            continue;
        }
        if (!(np.y_at(x) == lam)) {
            rep.ok = false;
            rep.violations.push_back("NP(" + std::to_string(x) + ") = " + np.y_at(x).str() +
                                     " != lambda = " + lam.str());
        }
    }
    auto sl = np.slopes();
    for (std::size_t n = 0; n < sl.size() && n < static_cast<std::size_t>(k_max) * t; ++n) {
        if (!sl[n].second) break;
        Rat lo(static_cast<std::int64_t>(n) / t);
        Rat hi = lo + Rat(1);
        if (sl[n].first < lo || sl[n].first > hi) {
            rep.ok = false;
            rep.violations.push_back("slope " + std::to_string(n) + " = " + sl[n].first.str() +
                                     " outside [" + lo.str() + ", " + hi.str() + "]");
        }
    }
    return rep;
}

ProgressionReport progression_check(const PolygonData& np, const PolygonData& hp, int q, int r) {
    ProgressionReport rep;
    std::int64_t len = std::min(np.length(), hp.length());
    std::int64_t max_s = 0;
    for (std::int64_t s = 1; s <= len; ++s) {
        Rat lhs = np.y_at(s);
        Rat rhs = hp.y_at(s - 1) + Rat(1);
        if (lhs == rhs) rep.boundary_equalities.push_back(s);
        if (lhs < rhs)
            max_s = s;
        else
            break;
    }
    rep.s0 = 0;
    for (std::int64_t s = max_s; s >= 1; --s)
        if (np.has_vertex_at(s)) {
            rep.s0 = s;
            break;
        }
    auto sl = np.slopes();
    for (std::int64_t s = 0; s <= rep.s0 && s < static_cast<std::int64_t>(sl.size()); ++s)
        rep.progressions.push_back({sl[static_cast<std::size_t>(s)].first + Rat(r), Rat(q)});
    return rep;
}

ComponentDegreesReport connected_component_degrees(const CharSeries& cs, int t,
                                                   const std::vector<std::int64_t>& ord_list) {
    ComponentDegreesReport rep;
    const int q = ord_list.empty() ? 1 : static_cast<int>(ord_list.size());
    auto ord = [&](std::int64_t n) {
        if (ord_list.empty()) return static_cast<std::int64_t>(0);
        return ord_list[static_cast<std::size_t>(n % q)];
    };
    PolygonData np = newton_polygon(cs);
    auto sl = np.slopes();
    std::int64_t max_n = -1;
    std::vector<std::int64_t> counts;
    std::int64_t zero_count = 0;
    for (const auto& [s, cert] : sl) {
        if (!cert) break;
        if (s == Rat(0)) {
            ++zero_count;
            continue;
        }
        std::int64_t n = (s - Rat(1)).ceil();  // the n with s in (n, n+1]
        if (n < 0) n = 0;
        while (static_cast<std::int64_t>(counts.size()) <= n) counts.push_back(0);
        ++counts[static_cast<std::size_t>(n)];
        max_n = std::max(max_n, n);
    }
    rep.ord0 = zero_count;
    // the last interval may be cut off by the truncation; compare all but it
    for (std::int64_t n = 0; n + 1 <= max_n; ++n) {
        rep.degrees.push_back(counts[static_cast<std::size_t>(n)]);
        rep.expected.push_back(t + ord(n + 1) - ord(n));
        if (rep.degrees.back() != rep.expected.back()) rep.ok = false;
    }
    return rep;
}

}  // namespace upslope
