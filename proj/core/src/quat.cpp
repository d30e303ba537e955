#include "upslope/quat.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace upslope {

Quaternion::Quaternion(std::int64_t a2, std::int64_t b2, std::int64_t c2, std::int64_t d2)
    : x2{a2, b2, c2, d2} {
    int par = static_cast<int>(((a2 % 2) + 2) % 2);
    for (auto v : x2)
        if ((((v % 2) + 2) % 2) != par)
            throw std::invalid_argument("Quaternion: coordinates violate the order parity");
}

Quaternion operator+(const Quaternion& p, const Quaternion& q) {
    return Quaternion(p.x2[0] + q.x2[0], p.x2[1] + q.x2[1], p.x2[2] + q.x2[2], p.x2[3] + q.x2[3]);
}

Quaternion operator-(const Quaternion& p, const Quaternion& q) {
    return Quaternion(p.x2[0] - q.x2[0], p.x2[1] - q.x2[1], p.x2[2] - q.x2[2], p.x2[3] - q.x2[3]);
}

Quaternion operator*(const Quaternion& p, const Quaternion& q) {
    const std::int64_t a = p.x2[0], b = p.x2[1], c = p.x2[2], d = p.x2[3];
    const std::int64_t e = q.x2[0], f = q.x2[1], g = q.x2[2], h = q.x2[3];
    // doubled products are 4x the true coordinates; halving keeps them doubled
    std::int64_t r0 = a * e - b * f - c * g - d * h;
    std::int64_t r1 = a * f + b * e + c * h - d * g;
    std::int64_t r2 = a * g - b * h + c * e + d * f;
    std::int64_t r3 = a * h + b * g - c * f + d * e;
    if ((r0 | r1 | r2 | r3) % 2 != 0) throw std::logic_error("Quaternion: product parity");
    return Quaternion(r0 / 2, r1 / 2, r2 / 2, r3 / 2);
}

std::int64_t Quaternion::norm() const {
    std::int64_t s = x2[0] * x2[0] + x2[1] * x2[1] + x2[2] * x2[2] + x2[3] * x2[3];
    if (s % 4 != 0) throw std::logic_error("Quaternion: norm not integral");
    return s / 4;
}

std::vector<Quaternion> unit_group() {
    std::vector<Quaternion> us;
    for (int c = 0; c < 4; ++c)
        for (int s = -1; s <= 1; s += 2) {
            std::array<std::int64_t, 4> v{};
            v[c] = 2 * s;
            us.emplace_back(v[0], v[1], v[2], v[3]);
        }
    for (int s0 = -1; s0 <= 1; s0 += 2)
        for (int s1 = -1; s1 <= 1; s1 += 2)
            for (int s2 = -1; s2 <= 1; s2 += 2)
                for (int s3 = -1; s3 <= 1; s3 += 2) us.emplace_back(s0, s1, s2, s3);
    std::sort(us.begin(), us.end());
    return us;
}

std::vector<Quaternion> elements_of_norm(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("elements_of_norm: n >= 1 required");
    std::vector<Quaternion> out;
    const std::int64_t L = static_cast<std::int64_t>(std::sqrt(static_cast<double>(4 * n))) + 1;
    const std::int64_t target = 4 * n;
    for (std::int64_t a = -L; a <= L; ++a) {
        std::int64_t ra = target - a * a;
        if (ra < 0) continue;
        for (std::int64_t b = -L; b <= L; ++b) {
            std::int64_t rb = ra - b * b;
            if (rb < 0) continue;
            if ((((a - b) % 2) + 2) % 2 != 0) continue;
            for (std::int64_t c = -L; c <= L; ++c) {
                std::int64_t rc = rb - c * c;
                if (rc < 0) continue;
                if ((((a - c) % 2) + 2) % 2 != 0) continue;
                std::int64_t d2 = rc;
                std::int64_t d = static_cast<std::int64_t>(std::sqrt(static_cast<double>(d2)));
                while (d * d < d2) ++d;
                if (d * d != d2) continue;
                if ((((a - d) % 2) + 2) % 2 != 0) continue;
                out.emplace_back(a, b, c, d);
                if (d != 0) out.emplace_back(a, b, c, -d);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

SplittingMap SplittingMap::hamilton_at_3(CtxPtr ctx) {
    if (ctx->p != 3)
        throw std::invalid_argument("SplittingMap: the built-in splitting needs p = 3");
    SplittingMap sm;
    sm.ctx = ctx;
    const PadicContext* c = ctx.get();
    CycloElt nu3 = hensel_sqrt(c, -2, 1);
    sm.img_one = Mat::identity(c, 2);
    sm.img_i = Mat(c, 2, 2);
    sm.img_i.at(0, 0) = nu3;
    sm.img_i.at(0, 1) = CycloElt::one(c);
    sm.img_i.at(1, 0) = CycloElt::one(c);
    sm.img_i.at(1, 1) = -nu3;
    sm.img_j = Mat(c, 2, 2);
    sm.img_j.at(0, 1) = -CycloElt::one(c);
    sm.img_j.at(1, 0) = CycloElt::one(c);
    sm.img_k = Mat(c, 2, 2);
    sm.img_k.at(0, 0) = CycloElt::one(c);
    sm.img_k.at(0, 1) = -nu3;
    sm.img_k.at(1, 0) = -nu3;
    sm.img_k.at(1, 1) = -CycloElt::one(c);
    return sm;
}

Mat split_at_p(const Quaternion& q, const SplittingMap& sm) {
    const PadicContext* c = sm.ctx.get();
    Mat acc(c, 2, 2);
    const Mat* imgs[4] = {&sm.img_one, &sm.img_i, &sm.img_j, &sm.img_k};
    for (int t = 0; t < 4; ++t) {
        if (q.x2[t] == 0) continue;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                acc.at(i, j) += imgs[t]->at(i, j).mul_int(q.x2[t]);
    }
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) acc.at(i, j) = acc.at(i, j).div_int_exact(2);
    return acc;
}

namespace {

// Is M (2x2 over Z_3) in the p-factor of the level: a unit, c = 0 mod 9,
// d = 1 mod 3? Entries must be integral (they are by construction here).
bool in_level_U(const Mat& M) {
    auto a = M.at(0, 0).rational_residue(1);
    auto cc = M.at(1, 0).rational_residue(2);
    auto d = M.at(1, 1).rational_residue(1);
    if (!a || !cc || !d) return false;
    return (*a % 3 != 0) && (*cc % 9 == 0) && (*d % 3 == 1);
}

}  // namespace

std::vector<Quaternion> delta_decomposition(const SplittingMap& sm) {
    const PadicContext* c = sm.ctx.get();
    auto norm3 = elements_of_norm(3);
    std::vector<Quaternion> found;
    for (int vj = 0; vj < 3; ++vj) {
        // v = (3 0; 9 vj 1); v^{-1} = (1 0; -9 vj 3) / 3
        Mat vinv_num(c, 2, 2);
        vinv_num.at(0, 0) = CycloElt::one(c);
        vinv_num.at(1, 0) = CycloElt::from_int(c, -9 * vj);
        vinv_num.at(1, 1) = CycloElt::from_int(c, 3);
        std::vector<Quaternion> hits;
        for (const auto& q : norm3) {
            Mat M = split_at_p(q, sm) * vinv_num;
            bool integral = true;
            for (int i = 0; i < 2 && integral; ++i)
                for (int j = 0; j < 2 && integral; ++j) {
                    try {
                        M.at(i, j) = M.at(i, j).div_int_exact(3);
                    } catch (const std::domain_error&) {
                        integral = false;
                    }
                }
            if (!integral) continue;
            if (in_level_U(M)) hits.push_back(q);
        }
        if (hits.size() != 1)
            throw std::logic_error("delta_decomposition: coset search did not isolate one element");
        found.push_back(hits[0]);
    }
    // Check the re-derivation against the known images mod 9.
    const int expected[3][4] = {{3, 2, 0, 4}, {3, 6, 0, 7}, {3, 1, 0, 7}};
    std::vector<Quaternion> ordered;
    std::vector<bool> used(3, false);
    for (const auto& exp : expected) {
        bool matched = false;
        for (std::size_t t = 0; t < found.size(); ++t) {
            if (used[t]) continue;
            Mat M = split_at_p(found[t], sm);
            auto r00 = M.at(0, 0).rational_residue(2), r01 = M.at(0, 1).rational_residue(2);
            auto r10 = M.at(1, 0).rational_residue(2), r11 = M.at(1, 1).rational_residue(2);
            if (r00 && r01 && r10 && r11 && static_cast<std::int64_t>(*r00 % 9) == exp[0] &&
                static_cast<std::int64_t>(*r01 % 9) == exp[1] &&
                static_cast<std::int64_t>(*r10 % 9) == exp[2] &&
                static_cast<std::int64_t>(*r11 % 9) == exp[3]) {
                ordered.push_back(found[t]);
                used[t] = true;
                matched = true;
                break;
            }
        }
        if (!matched)
            throw std::logic_error("delta_decomposition: derived set disagrees with the known images");
    }
    return ordered;
}

bool cosets_complete(const std::vector<Quaternion>& units, const SplittingMap& sm) {
    // Pairwise distinct cosets of U_max / U; with 24 units that quotient has
    // exactly 24 elements, so distinctness means completeness.
    for (std::size_t i = 0; i < units.size(); ++i) {
        for (std::size_t j = 0; j < units.size(); ++j) {
            if (i == j) continue;
            Quaternion w = units[i].conj() * units[j];  // u_i^{-1} u_j for norm-1 units
            Mat M = split_at_p(w, sm);
            if (in_level_U(M)) return false;
        }
    }
    return units.size() == 24;
}

bool verify_honest_cosets(const SplittingMap& sm) { return cosets_complete(unit_group(), sm); }

}  // namespace upslope
