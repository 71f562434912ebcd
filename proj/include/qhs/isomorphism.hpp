#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qhs/graph.hpp"

namespace qhs {

// Vertex bijections phi: g1 -> g2 (phi[v] indexes g2) preserving boundary flags
// and, for every ordered pair (v, w), the multiset of weights on E_vw within
// tol (relative to max(1, weight)).
// The callback returns true to stop the enumeration.
void for_each_weighted_isomorphism(const OrientedGraph& g1, const Cost& w1,
                                   const OrientedGraph& g2, const Cost& w2, double tol,
                                   const std::function<bool(const std::vector<std::size_t>&)>& visit);

std::optional<std::vector<std::size_t>> weighted_isomorphism(const OrientedGraph& g1,
                                                             const Cost& w1,
                                                             const OrientedGraph& g2,
                                                             const Cost& w2, double tol = 1e-8);

} // namespace qhs
