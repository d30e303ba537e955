#pragma once

#include <optional>
#include <string>
#include <vector>

#include "upslope/matrix.hpp"
#include "upslope/padic.hpp"
#include "upslope/rat.hpp"

namespace upslope {

// Truncated characteristic power series det(I - XM) = 1 + c_1 X + ... + c_n X^n.
struct CharSeries {
    std::vector<CycloElt> c;  // c[0] = 1
    std::string provenance;

    int degree() const { return static_cast<int>(c.size()) - 1; }
};

// Division-free characteristic series (Berkowitz). The same coefficient
// vector read as c[k] = coefficient of X^{n-k} gives det(XI - M).
CharSeries char_series(const Mat& M);

// Convex polygon with integer x-coordinates and exact rational heights,
// starting at (0, 0). Edges carry a certification flag: an edge is certified
// when both of its supporting vertices came from exactly-known valuations.
struct PolygonData {
    struct Vertex {
        std::int64_t x;
        Rat y;
        bool exact;  // height known exactly (vs lower bound at working precision)
    };
    std::vector<Vertex> vertices;

    std::int64_t length() const { return vertices.empty() ? 0 : vertices.back().x; }
    Rat y_at(std::int64_t x) const;       // piecewise-linear interpolation
    bool has_vertex_at(std::int64_t x) const;
    bool slope_certified(std::int64_t idx) const;  // x in [idx, idx+1] edge certified

    // Slope multiset (one entry per unit horizontal step), with flags.
    std::vector<std::pair<Rat, bool>> slopes() const;
    std::vector<Rat> certified_slopes(int count) const;  // throws if not certified
};

struct SlopeMultiset {
    std::vector<Rat> s;  // non-decreasing

    Rat lambda(std::size_t n) const;  // sum of the n smallest
};

// Lower convex hull of (n, v(c_n)); coefficients that vanish at their known
// precision participate as height-kp points flagged uncertified.
PolygonData newton_polygon(const CharSeries& cs);

// Hodge polygon via elementary divisors (Smith-style reduction over the DVR,
// minimal-valuation pivots). complete = false when the reduction hit an
// all-vanishing block at working precision (remaining slopes unreported).
struct HodgePolygon {
    PolygonData polygon;
    std::vector<Rat> slopes;
    bool complete = true;
    int computed = 0;
};

HodgePolygon hodge_polygon(const Mat& M);

// Oracle-grade Hodge polygon from exhaustive minors (test-sized matrices).
std::vector<Rat> hodge_slopes_by_minors(const Mat& M);

bool check_np_above_hp(const Mat& M);

// Newton polygon above the quadratic polygon with vertices (nt, n(n-1)/2 t).
struct TheoremAReport {
    bool ok = true;
    std::int64_t certified_up_to = 0;  // x-range where the comparison was exact
    std::vector<std::string> violations;
};
TheoremAReport check_theorem_A(const CharSeries& cs, int t);

// Sorted union of {alpha_i(r) + q n + r : n >= 0, r < q}, truncated to count.
SlopeMultiset improved_bound_slopes(const std::vector<std::vector<Rat>>& alpha_lists, int t,
                                    int count);

struct SharpBoundReport {
    bool ok = true;
    bool strict = false;
    std::vector<std::string> violations;
    std::vector<std::string> notes;
};
// NP passes through (kt, lambda_{kt}) for k = 1..k_max and every certified
// slope a_n lies in [floor(n/t), floor(n/t) + 1]. Strict for m >= 4.
SharpBoundReport check_sharp_bound(const CharSeries& cs, const SlopeMultiset& improved, int t,
                                   int k_max, bool strict);

struct ProgressionReport {
    std::int64_t s0 = 0;
    std::vector<std::int64_t> boundary_equalities;  // s with NP(s) == HP(s-1) + 1
    struct Progression {
        Rat first_term;
        Rat common_difference;
    };
    std::vector<Progression> progressions;
};
// Largest Newton-polygon vertex s0 with NP(s) < HP(s-1) + 1 for all s <= s0
// (strict inequality), plus the predicted arithmetic progressions
// slope_s + r + q n with common difference q.
ProgressionReport progression_check(const PolygonData& np, const PolygonData& hp, int q, int r);

struct ComponentDegreesReport {
    bool ok = true;
    std::vector<std::int64_t> degrees;          // slopes in (n, n+1]
    std::vector<std::int64_t> expected;         // t + ord_{n+1} - ord_n
    std::int64_t ord0 = 0;                      // multiplicity of slope 0
};
// Counts certified slopes per interval (n, n+1] and compares with the degree
// formula; ord_list holds the slope-0 multiplicities per twist (length q).
ComponentDegreesReport connected_component_degrees(const CharSeries& cs, int t,
                                                   const std::vector<std::int64_t>& ord_list);

// det via the characteristic series (division-free).
CycloElt det(const Mat& M);

}  // namespace upslope
