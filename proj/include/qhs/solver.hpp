#pragma once

#include <cstdint>
#include <vector>

#include "qhs/cost.hpp"
#include "qhs/graph.hpp"

namespace qhs {

struct CostSolution {
    Cost cost;
    Involution involution;
};

struct SolveOptions {
    std::size_t max_solutions = 8;
    double tol = kSolverTol;
    int starts = 12;
    int max_iterations = 300;
    std::uint64_t seed = 0x51ed5eedULL;
};

struct SolveResult {
    bool feasible = false;
    bool family = false;
    std::vector<CostSolution> solutions;
    std::size_t branches = 0;
};

// Involutions up to permutation of parallel edges: the i-th edge of E_vw is
// paired with the i-th edge of E_wv, and at each vertex the first f loops are
// fixed (f > 0 only when T < 0). Ordered by the per-vertex choice of f.
std::vector<Involution> admissible_involutions(const OrientedGraph& g, double T);

SolveResult solve_cost(const OrientedGraph& g, const DeformationParameter& dp,
                       const SolveOptions& opt = {});
// Same search with one thread; the result is identical to solve_cost.
SolveResult solve_cost_serial(const OrientedGraph& g, const DeformationParameter& dp,
                              const SolveOptions& opt = {});

// Sorts weights inside every parallel-edge set E_vw; solutions equal up to
// relabelling parallel edges have equal canonical forms.
Cost canonical_cost(const OrientedGraph& g, const Cost& w);

} // namespace qhs
