#pragma once

#include <complex>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "qhs/fusion.hpp"

namespace qhs {

// Functor data G: D_X -> D_Y given by spaces F_tr (t indexes y, r indexes x)
// and unitaries
//   psi_{t,r}: sum_s F_ts (x) H^X_sr  ->  sum_u H^Y_tu (x) F_ur.
// Domain basis entries are (s, a, k): s in x, a < dim F_ts, k a basis slot of
// H^X_sr. Codomain entries are (u, g, b): u in y, g a slot of H^Y_tu,
// b < dim F_ur.
struct PsiIndex {
    std::size_t vertex;
    std::size_t first;
    std::size_t second;
    auto operator<=>(const PsiIndex&) const = default;
};

struct PsiBlock {
    CMatrix matrix;
    std::vector<PsiIndex> domain;
    std::vector<PsiIndex> codomain;
};

struct MorphismData {
    FundamentalSolution x;  // the embedded space
    FundamentalSolution y;  // the target space
    std::map<BlockKey, std::size_t> fdim;  // (t, r) -> dim F_tr
    std::map<BlockKey, PsiBlock> psi;      // (t, r) -> psi_{t,r}
    std::vector<BlockKey> window;          // (t, r) pairs where the square is checked

    std::size_t dim(std::size_t t, std::size_t r) const;
};

// Domain and codomain of psi_{t,r} in the standard order: by vertex, then the
// F index, then the H slot (domain); by vertex, then H slot, then F index
// (codomain).
std::pair<std::vector<PsiIndex>, std::vector<PsiIndex>> standard_layout(const MorphismData& m,
                                                                        std::size_t t,
                                                                        std::size_t r);

// (t, r) with F_tr != 0, t and r interior, and every referenced block present.
std::vector<BlockKey> default_window(const MorphismData& m);

struct PsiReport {
    bool pass = false;
    double worst_residual = 0.0;
    std::optional<BlockKey> worst_pair;
    double unitarity_residual = 0.0;
    std::map<BlockKey, double> residual;  // operator norm of LHS - RHS on F_tr
    std::vector<std::string> reasons;
};

// Throws std::invalid_argument on blocks whose index lists disagree with the
// matrix shape.
PsiReport verify_psi(const MorphismData& m, const DeformationParameter& dp, double tol = 1e-9);

// Fixes every 1x1 block listed in `unknown` by propagating the square
// equations: an equation linear in a single unknown entry determines it; when
// none is left, the first remaining unknown is set to 1. Returns verify_psi
// on the result.
PsiReport propagate_phases(MorphismData& m, const std::set<BlockKey>& unknown,
                           const DeformationParameter& dp, double tol = 1e-9);

struct PruneOptions {
    // (t0 in y, r0 in x): G(X_r0) is the single object Y_t0.
    std::optional<std::pair<std::string, std::string>> base;
    // With both costs present, a grading is also rejected when a diagram
    // entry reached by a single path through 1x1 blocks has mismatched moduli.
    const Cost* x_cost = nullptr;
    const Cost* y_cost = nullptr;
    double tol = 1e-9;
    std::size_t max_solutions = 64;
};

using Grading = std::map<BlockKey, std::size_t>;  // nonzero entries only

struct PruneReport {
    bool feasible = false;
    bool truncated = false;
    std::vector<Grading> gradings;
    std::size_t rejected_by_modulus = 0;
};

// x is the embedded graph, y the target. Square condition on interior pairs:
//   sum_s d_ts n^X_sr = sum_u n^Y_tu d_ur.
PruneReport dimension_prune(const OrientedGraph& x, const OrientedGraph& y, std::size_t max_dim,
                            const PruneOptions& opt = {});

struct EmbeddingParams {
    std::optional<double> q;
    std::optional<double> x;  // +infinity allowed
    Complex lambda = 1.0;
    Complex beta = 1.0;
    std::vector<Complex> alpha;  // alpha_m for m = -window-1 .. window+1; empty means 1
    std::optional<int> window;
};

const std::vector<std::string>& example_names();
MorphismData example_embedding(const std::string& name, const EmbeddingParams& p);
DeformationParameter example_parameter(const std::string& name, const EmbeddingParams& p);

// X = Y = s, F_tr = delta_tr, psi = identity.
MorphismData identity_morphism(const FundamentalSolution& s);

// Solution of the single point with loops of weights 1/|q| and |q|; its
// matrix is f_matrix(dp).
FundamentalSolution point_solution(const DeformationParameter& dp);

} // namespace qhs
