#pragma once

#include <limits>
#include <string>
#include <vector>

#include "qhs/catalog.hpp"

namespace fixture {

struct Named {
    std::string label;
    qhs::CatalogEntry entry;
};

inline Named make(const std::string& name, qhs::CatalogParams p) {
    std::string label = name;
    if (p.q) label += " q=" + std::to_string(*p.q);
    if (p.x) label += " x=" + std::to_string(*p.x);
    if (p.n) label += " n=" + std::to_string(*p.n);
    if (p.loops) label += " loops=" + std::to_string(*p.loops);
    return {label, qhs::catalog(name, p)};
}

// Every catalog family over a spread of parameters; windows kept small.
inline std::vector<Named> catalog_suite() {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<Named> out;
    for (double q : {0.5, -0.5, 1.0, -0.3})
        for (double x : {0.0, 0.3, inf}) out.push_back(make("A_inf_inf", {q, x, {}, 3, {}}));
    for (double q : {0.5, -0.5, -1.0}) out.push_back(make("D_inf_star", {q, {}, {}, 4, {}}));
    for (double q : {0.5, -0.5, -1.0})
        for (int n : {1, 2, 3}) out.push_back(make("A_cycle", {q, {}, n, {}, {}}));
    for (const char* e : {"E6_affine", "E7_affine", "E8_affine"})
        for (double q : {1.0, -1.0}) out.push_back(make(e, {q, {}, {}, {}, {}}));
    for (double q : {1.0, -1.0})
        for (int n : {4, 5, 6}) out.push_back(make("D_affine", {q, {}, n, {}, {}}));
    for (int n : {2, 3, 4}) out.push_back(make("A_prime", {-1.0, {}, n, {}, {}}));
    for (int n : {3, 4, 5}) out.push_back(make("D_prime", {-1.0, {}, n, {}, {}}));
    for (double q : {-0.5, -1.0}) out.push_back(make("A_inf_prime", {q, {}, {}, 3, {}}));
    for (int loops : {2, 3, 4, 5, 6}) out.push_back(make("point_loops", {{}, {}, {}, {}, loops}));
    out.push_back(make("point_loops", {1.0, {}, {}, {}, 2}));
    out.push_back(make("point_loops", {0.5, {}, {}, {}, 2}));
    return out;
}

} // namespace fixture
