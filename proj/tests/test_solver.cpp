#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "qhs/catalog.hpp"
#include "qhs/solver.hpp"

using namespace qhs;

namespace {

OrientedGraph two_vertex() {
    return GraphBuilder().vertex("a").vertex("b").edge("a", "b").edge("b", "a").graph();
}

OrientedGraph bare(const std::string& name, CatalogParams p) { return catalog(name, p).graph; }

// x with f(x+1)/f(x) = a, f(y) = |q|^y + |q|^-y, by bisection; the ratio
// increases from |q| to 1/|q| as x runs over the real line.
double podles_x(double q, double a) {
    double lo = -60, hi = 60;
    for (int it = 0; it < 200; ++it) {
        double mid = (lo + hi) / 2;
        if (podles_weight(q, mid, 0) < a) lo = mid;
        else hi = mid;
    }
    return (lo + hi) / 2;
}

} // namespace

TEST_CASE("admissible_involutions") {
    auto pl = bare("point_loops", {1.0, {}, {}, {}, 2});
    CHECK(admissible_involutions(pl, 2.0).size() == 1);
    CHECK(admissible_involutions(pl, -2.0).size() == 2);
    auto three = bare("point_loops", {{}, {}, {}, {}, 3});
    CHECK(admissible_involutions(three, 3.0).empty());
    CHECK(admissible_involutions(three, -3.0).size() == 2);
    for (const auto& inv : admissible_involutions(bare("A_cycle", {0.5, {}, 2, {}, {}}), 2.5))
        CHECK(is_valid_involution(bare("A_cycle", {0.5, {}, 2, {}, {}}), inv));
    auto one_way = GraphBuilder().vertex("a").vertex("b").edge("a", "b").graph();
    CHECK(admissible_involutions(one_way, -2.0).empty());
}

TEST_CASE("solve_cost examples") {
    for (double q : {0.3, -0.3, 0.5, -0.5, 0.7, -0.7, 1.0, -1.0}) {
        INFO("q=" << q);
        CHECK_FALSE(solve_cost(two_vertex(), DeformationParameter::from_q(q)).feasible);
    }
    auto three = bare("point_loops", {{}, {}, {}, {}, 3});
    CHECK_FALSE(solve_cost(three, DeformationParameter::from_q(0.5)).feasible);
    CHECK(solve_cost(three, DeformationParameter::from_T(-3.0)).feasible);

    auto e6 = bare("E6_affine", {1.0, {}, {}, {}, {}});
    for (double q : {0.5, -0.5, 0.9, -0.9}) {
        INFO("q=" << q);
        CHECK_FALSE(solve_cost(e6, DeformationParameter::from_q(q)).feasible);
    }
    CHECK(solve_cost(e6, DeformationParameter::from_q(1.0)).feasible);
    CHECK(solve_cost(e6, DeformationParameter::from_q(-1.0)).feasible);
}

TEST_CASE("solve_cost on a Podles window finds a one-parameter family") {
    const double q = 0.5;
    auto g = bare("A_inf_inf", {q, 0.0, {}, 3, {}});
    auto r = solve_cost(g, DeformationParameter::from_q(q));
    REQUIRE(r.feasible);
    CHECK(r.family);
    CHECK(r.solutions.size() >= 2);
    const auto e01 = g.edges_between(g.vertex_index("0"), g.vertex_index("1")).front();
    bool inside = false;
    for (const auto& s : r.solutions) {
        const double a = s.cost[e01];
        if (a < q - 1e-9 || a > 1 / q + 1e-9) continue;
        inside = true;
        double x = podles_x(q, a);
        for (int m = -2; m < 2; ++m) {
            auto e = g.edges_between(g.vertex_index(std::to_string(m)),
                                     g.vertex_index(std::to_string(m + 1)))
                         .front();
            INFO("a=" << a << " m=" << m);
            CHECK(s.cost[e] == doctest::Approx(podles_weight(q, x, m)).epsilon(1e-6));
        }
    }
    CHECK(inside);
}

TEST_CASE("solutions are sound") {
    for (const auto& [label, e] : fixture::catalog_suite()) {
        INFO(label);
        auto r = solve_cost(e.graph, e.dp);
        CHECK(r.feasible);
        FairnessOptions fo;
        fo.tol = 10 * kSolverTol;
        for (const auto& s : r.solutions) {
            CHECK(is_valid_involution(e.graph, s.involution));
            CHECK(verify_fair_balanced(e.graph, s.cost, e.dp, fo).pass);
        }
    }
}

TEST_CASE("parallel and serial solvers agree") {
    for (const auto& [label, e] : fixture::catalog_suite()) {
        INFO(label);
        auto a = solve_cost(e.graph, e.dp);
        auto b = solve_cost_serial(e.graph, e.dp);
        CHECK(a.feasible == b.feasible);
        CHECK(a.family == b.family);
        REQUIRE(a.solutions.size() == b.solutions.size());
        for (std::size_t k = 0; k < a.solutions.size(); ++k) {
            CHECK(a.solutions[k].cost == b.solutions[k].cost);
            CHECK(a.solutions[k].involution.pair == b.solutions[k].involution.pair);
        }
    }
}

TEST_CASE("solver agrees with the grid oracle on small graphs") {
    const auto graphs = oracle::small_graphs(3, 6);
    for (double q : {0.5, -0.5, 1.0, -1.0}) {
        auto dp = DeformationParameter::from_q(q);
        for (const auto& g : graphs) {
            INFO("q=" << q << "\n" << save_graph(g));
            CHECK(solve_cost(g, dp).feasible == oracle::grid_feasible(g, dp.T()));
        }
    }
}

TEST_CASE("max_solutions caps the output") {
    auto g = bare("A_inf_inf", {0.5, 0.0, {}, 3, {}});
    SolveOptions o;
    o.max_solutions = 1;
    CHECK(solve_cost(g, DeformationParameter::from_q(0.5), o).solutions.size() == 1);
}

TEST_CASE("canonical_cost") {
    GraphBuilder b;
    b.vertex("v").edge("v", "v", 2.0).edge("v", "v", 0.5);
    auto c = canonical_cost(b.graph(), b.cost());
    CHECK(c == Cost{0.5, 2.0});
    GraphBuilder b2;
    b2.vertex("v").edge("v", "v", 0.5).edge("v", "v", 2.0);
    CHECK(canonical_cost(b2.graph(), b2.cost()) == c);
}
