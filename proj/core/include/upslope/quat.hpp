#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "upslope/matrix.hpp"
#include "upslope/padic.hpp"
#include "upslope/rat.hpp"

namespace upslope {

// Element of the Hamilton quaternion maximal order
// O_D = Z< i, j, (1+i+j+k)/2 >, stored as doubled integer coordinates
// (2a, 2b, 2c, 2d) for a + b i + c j + d k. Membership in the order is the
// parity condition: all four doubled coordinates even, or all odd.
struct Quaternion {
    std::array<std::int64_t, 4> x2{};  // doubled coordinates

    Quaternion() = default;
    Quaternion(std::int64_t a2, std::int64_t b2, std::int64_t c2, std::int64_t d2);

    static Quaternion from_units(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
        return Quaternion(2 * a, 2 * b, 2 * c, 2 * d);
    }
    static Quaternion one() { return from_units(1, 0, 0, 0); }

    friend Quaternion operator+(const Quaternion& p, const Quaternion& q);
    friend Quaternion operator-(const Quaternion& p, const Quaternion& q);
    friend Quaternion operator*(const Quaternion& p, const Quaternion& q);
    friend bool operator==(const Quaternion& p, const Quaternion& q) { return p.x2 == q.x2; }
    friend bool operator<(const Quaternion& p, const Quaternion& q) { return p.x2 < q.x2; }

    Quaternion conj() const { return Quaternion(x2[0], -x2[1], -x2[2], -x2[3]); }
    // Reduced norm a^2 + b^2 + c^2 + d^2, integral on the order.
    std::int64_t norm() const;
};

// The 24 units of O_D, in lexicographic order of doubled coordinates.
std::vector<Quaternion> unit_group();

// All elements of given reduced norm (exhaustive lattice search; the count is
// 24 * sigma_odd(n) for this maximal order). Sorted.
std::vector<Quaternion> elements_of_norm(std::int64_t n);

// Splitting of D at p = 3 determined by nu3 = sqrt(-2), nu3 = 1 mod 3:
// i -> (nu3 1; 1 -nu3), j -> (0 -1; 1 0), k -> (1 -nu3; -nu3 -1).
struct SplittingMap {
    CtxPtr ctx;
    Mat img_one, img_i, img_j, img_k;

    static SplittingMap hamilton_at_3(CtxPtr ctx);
};

Mat split_at_p(const Quaternion& q, const SplittingMap& sm);

// The three norm-3 elements whose weight actions assemble U_3 for the level
// with 9 Z_3 lower-left entries and 1 + 3 Z_3 lower-right entries: re-derived
// by coset search over elements_of_norm(3), then checked against the known
// images (3 2: 0 4), (3 6; 0 7), (3 1; 0 7) mod 9.
std::vector<Quaternion> delta_decomposition(const SplittingMap& sm);

// Do the given order units represent pairwise distinct cosets of U_max / U
// (U as above)? With 24 units that means a complete set of representatives.
bool cosets_complete(const std::vector<Quaternion>& units, const SplittingMap& sm);
bool verify_honest_cosets(const SplittingMap& sm);

}  // namespace upslope
