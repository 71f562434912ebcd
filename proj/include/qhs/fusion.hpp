#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qhs/cost.hpp"
#include "qhs/graph.hpp"

namespace qhs {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using BlockKey = std::pair<std::size_t, std::size_t>;

// Anti-linear maps J_vw: H_vw -> H_wv stored as x -> M_vw * conj(x).
// M_vw has shape dim H_wv x dim H_vw; only nonzero blocks are stored.
struct FundamentalSolution {
    std::vector<std::string> index;
    std::vector<bool> boundary;
    int q_sign = -1;
    std::map<BlockKey, CMatrix> jmaps;
    // Basis labels of H_vw (edge ids when built from a graph).
    std::map<BlockKey, std::vector<std::string>> basis;

    std::size_t size() const { return index.size(); }
    std::size_t dim(std::size_t v, std::size_t w) const;
    // Empty matrix when the block is zero.
    const CMatrix& block(std::size_t v, std::size_t w) const;
    std::size_t index_of(const std::string& v) const;
};

// rho[e] in {-1, +1} with rho(e) rho(ebar) = -sgn(q). Default: rho = 1 for
// q < 0; for q > 0 the smaller edge of each pair gets +1, its partner -1.
std::vector<int> default_rho(const Involution& inv, int q_sign);

// Throws std::invalid_argument when (g, w) fails verification or rho is
// incompatible with the witness involution.
FundamentalSolution build_solution(const OrientedGraph& g, const Cost& w,
                                   const DeformationParameter& dp,
                                   const std::vector<int>* rho = nullptr,
                                   const Involution* inv = nullptr);

struct SolutionReport {
    bool pass = false;
    double composition_residual = 0.0;
    std::vector<double> trace_residual;  // per index, 0 on boundary
    std::vector<std::string> reasons;
};

SolutionReport verify_solution(const FundamentalSolution& s, const DeformationParameter& dp,
                               double tol = kVerifyTol);

struct SolutionGraph {
    OrientedGraph graph;
    Cost cost;
};
// Edge costs are the eigenvalues of M_vw^* M_vw, descending within each block.
SolutionGraph solution_to_graph(const FundamentalSolution& s, const DeformationParameter& dp,
                                double tol = kVerifyTol);

// Basis V and real canonical matrix C with M = V C V^T for the anti-linear map
// x -> M conj(x) satisfying J^2 = -s. C depends only on the spectrum of M^* M.
struct CanonicalForm {
    CMatrix V;
    CMatrix C;
};
std::optional<CanonicalForm> canonical_antiunitary(const CMatrix& M, int q_sign,
                                                   double tol = 1e-8);

enum class EquivalenceStatus { equivalent, inequivalent, undecided };

struct EquivalenceWitness {
    EquivalenceStatus status = EquivalenceStatus::inequivalent;
    std::vector<std::size_t> phi;      // index of s1 -> index of s2
    std::map<BlockKey, CMatrix> unitary;  // U_vw: H'_{phi v, phi w} -> H_vw
    double residual = 0.0;
};

inline constexpr std::size_t kEquivalenceMaxVertices = 12;
inline constexpr std::size_t kEquivalenceMaxBlock = 4;

// Witness satisfies M1_vw = U_wv M2_{phi v, phi w} U_vw^T for every block.
EquivalenceWitness solutions_equivalent(const FundamentalSolution& s1,
                                        const FundamentalSolution& s2, double tol = 1e-8);

} // namespace qhs
