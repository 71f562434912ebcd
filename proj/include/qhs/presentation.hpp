#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qhs/fusion.hpp"

namespace qhs {

struct Generator {
    std::string edge;
    int col;  // 1 or 2
};

// kind is one of "Eq1", "Eq2", "Eq2p", "Eq3".
//   Eq1  indices (v, i, w):  delta_v z_i. delta_w = coeffs[0] * z_i.
//   Eq2  indices (w, j, k):  sum over terms i of coeffs * z_ij^* z_ik = rhs * delta_w
//   Eq2p indices (i, k):     z_i1 z_k1^* + z_i2 z_k2^* = rhs * delta_{s(i)}
//   Eq3  indices (i, j):     z_ij^* = sum over terms "k:l" of coeffs * z_kl
struct Relation {
    std::string kind;
    std::vector<std::string> indices;
    std::vector<std::string> terms;
    std::vector<Complex> coeffs;
    Complex rhs = 0.0;
};

struct Presentation {
    std::vector<std::string> projections;
    std::vector<Generator> generators;
    std::vector<Relation> relations;
    Eigen::Matrix2d F;
    std::map<BlockKey, CMatrix> E;
    std::vector<std::string> index;
    int q_sign = -1;

    std::size_t count(const std::string& kind) const;
};

// [[0, |q|^{1/2}], [-sgn(q) |q|^{-1/2}, 0]]
Eigen::Matrix2d f_matrix(const DeformationParameter& dp);

// E^(vw)_{ij} = -sgn(q) <J_vw f_j, f_i> with the inner product linear in the
// second slot, i.e. E^(vw) = -sgn(q) conj(M_vw). Rows index H_wv, columns H_vw.
std::map<BlockKey, CMatrix> e_matrices(const FundamentalSolution& s,
                                       const DeformationParameter& dp);

Presentation emit_presentation(const FundamentalSolution& s, const DeformationParameter& dp);

struct PresentationCheck {
    bool pass = false;
    double e_identity_residual = 0.0;  // conj(E^(vw)) E^(wv) + sgn(q) I
    double f_spectrum_residual = 0.0;  // eigenvalues of F^* F against {|q|, 1/|q|}
    bool references_ok = true;
};
PresentationCheck check_presentation(const Presentation& p, const DeformationParameter& dp,
                                     double tol = 1e-10);

// For 1x1 blocks between v and w, substituting Eq3 for the generators of the
// reverse edge into its Eq2p instance gives
//   sum_{a,b} G_ab z_a^* z_b = rhs,  z_a = z^(vw)_a,
// alongside z_1 z_1^* + z_2 z_2^* = 1 from Eq2p on the edge v -> w itself.
struct QuadraticRelation {
    Eigen::Matrix2cd G;
    double rhs;
};
QuadraticRelation simplified_relation(const Presentation& p, const std::string& v,
                                      const std::string& w);

struct PodlesParameters {
    double c;
    double a;
    std::vector<std::pair<int, double>> weights;  // (m, W(m -> m+1)) for -M <= m < M
};
// x = +infinity is allowed. Throws std::invalid_argument when |q| = 1.
PodlesParameters podles_parameters(const DeformationParameter& dp, double x, int window);

// Scalar model z_ij = c_ij e_{s(i), t(i)}, delta_v = e_vv. Searches c by
// least squares over Eq2 (non-boundary), Eq2p and Eq3 of the presentation.
struct MatrixModel {
    bool found = false;
    double residual = 0.0;
    std::map<std::string, Eigen::Vector2cd> z;  // edge id -> (c_i1, c_i2)
};
MatrixModel matrix_model(const Presentation& p, const FundamentalSolution& s, int starts = 8,
                         std::uint64_t seed = 7);
// Worst violation of the emitted relations by a scalar model.
double model_residual(const Presentation& p, const FundamentalSolution& s,
                      const std::map<std::string, Eigen::Vector2cd>& z);

} // namespace qhs
