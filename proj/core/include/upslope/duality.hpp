#pragma once

#include <optional>
#include <string>
#include <vector>

#include "upslope/matrix.hpp"
#include "upslope/padic.hpp"
#include "upslope/spectral.hpp"

namespace upslope {

// Weight-2 data on the class set: the U_p matrix in a declared basis, the
// matrix for the inverse-character partner space when available, and the
// central S_p matrix (identity unless the scenario supplies one).
struct ClassicalBlock {
    Mat u;
    std::optional<Mat> partner;
    Mat central;
    std::string label;

    static ClassicalBlock with_conj_partner(Mat m, std::string label = {});
};

// The integration pairing: sum of coordinatewise products.
CycloElt pairing(const std::vector<CycloElt>& phi, const std::vector<CycloElt>& phi2);

// u^T * partner == p * central^T exactly at working precision.
bool verify_adjunction(const ClassicalBlock& B);

// Hodge slopes of the pair satisfy alpha_i + alpha'_{t-1-i} = 1 and lie in [0,1].
bool hodge_duality_check(const ClassicalBlock& B);

// Mod-pi idempotent built from tame Hecke data: P = prod (T - a') / (a - a').
struct ResidualProjector {
    std::string label;
    Mat p;
    std::vector<Mat> hecke;  // the operators used (commutation is validated)
};

struct EigenDatum {
    Mat hecke;
    CycloElt accepted;                // lifted eigenvalue for this residual class
    std::vector<CycloElt> rejected;   // lifted eigenvalues of the others
};

ResidualProjector build_projector(const std::string& label, const std::vector<EigenDatum>& data);

// Q -> Q^p iteration to the exact idempotent; converges within prec * e steps
// for any P with P^2 = P mod pi, errors beyond that bound.
Mat idempotent_limit(const Mat& P);

struct Splitting {
    struct Block {
        std::string label;
        int dim = 0;
        Mat restricted;
        CharSeries cs;
    };
    std::vector<Block> blocks;
};

// Split M by a family of exact idempotents (commuting with M, pairwise
// annihilating, summing to the identity) and factor the characteristic
// series; the product of the block series is checked against char(M).
Splitting split_and_factor(const Mat& M, const std::vector<Mat>& projs,
                           const std::vector<std::string>& labels = {});

// Image basis of an exact idempotent: C (n x r) and D (r x n) with
// D C = I_r and C D = Q. Unit pivots exist because im(Q) is a direct summand.
void idempotent_image_basis(const Mat& Q, Mat& C, Mat& D);

}  // namespace upslope
