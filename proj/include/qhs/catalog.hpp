#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qhs/graph.hpp"

namespace qhs {

struct CatalogParams {
    std::optional<double> q;
    std::optional<double> x;  // +infinity selects the degenerate Podleś cost
    std::optional<int> n;     // size for A_cycle, D_affine, A_prime, D_prime
    std::optional<int> window;
    std::optional<int> loops;
};

struct CatalogEntry {
    OrientedGraph graph;
    Cost cost;
    DeformationParameter dp;
};

class CatalogError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

const std::vector<std::string>& catalog_names();
CatalogEntry catalog(const std::string& name, const CatalogParams& params);

// W_{q,x}(m -> m+1); x = +inf gives 1/|q|, |q| = 1 gives 1. Uses |q| for q < 0.
double podles_weight(double q, double x, int m);

// The defaults used by tests and the CLI when a parameter is omitted.
inline constexpr int kDefaultWindow = 4;

} // namespace qhs
