#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "qhs/catalog.hpp"
#include "qhs/cost.hpp"
#include "qhs/graph.hpp"
#include "qhs/isomorphism.hpp"

using namespace qhs;

namespace {

std::multiset<double> weights_between(const OrientedGraph& g, const Cost& w, std::size_t v,
                                      std::size_t u) {
    std::multiset<double> s;
    for (std::size_t e : g.edges_between(v, u)) s.insert(std::round(w[e] * 1e9) / 1e9);
    return s;
}

} // namespace

TEST_CASE("deformation parameter") {
    auto dp = DeformationParameter::from_q(0.5);
    CHECK(dp.T() == doctest::Approx(2.5));
    CHECK(dp.qint(2) == doctest::Approx(dp.T()));
    CHECK(dp.qint(3) == doctest::Approx(0.25 + 1 + 4));
    auto neg = DeformationParameter::from_T(-2.5);
    CHECK(neg.q() == doctest::Approx(-0.5));
    CHECK(neg.sign() == -1);
    CHECK(neg.abs_T() == doctest::Approx(2.5));
    for (double q : {0.3, -0.3, 0.9, -1.0, 1.0}) {
        auto d = DeformationParameter::from_q(q);
        CHECK(std::abs(d.T()) >= 2.0 - 1e-12);
        CHECK((d.T() > 0) == (q > 0));
        // [n]_q as the quotient (q^-n - q^n) / (q^-1 - q) away from |q| = 1.
        if (std::abs(q) < 1)
            for (int n = 1; n <= 5; ++n)
                CHECK(d.qint(n) ==
                      doctest::Approx((std::pow(q, -n) - std::pow(q, n)) / (1 / q - q)));
    }
    CHECK_THROWS_AS(DeformationParameter::from_q(0.0), std::invalid_argument);
    CHECK_THROWS_AS(DeformationParameter::from_q(1.5), std::invalid_argument);
    CHECK_THROWS_AS(DeformationParameter::from_T(1.0), std::invalid_argument);
}

TEST_CASE("load_graph") {
    auto one = load_graph(R"({"vertices":["a"],"edges":[]})");
    CHECK(one.graph.num_vertices() == 1);
    CHECK(one.graph.num_edges() == 0);
    CHECK_FALSE(one.cost);

    CHECK_THROWS_WITH_AS(
        load_graph(R"({"vertices":["a"],"edges":[{"id":"e","src":"x","dst":"a"}]})"),
        doctest::Contains("src"), SchemaError);
    CHECK_THROWS_AS(load_graph(R"({"vertices":["a","a"],"edges":[]})"), SchemaError);
    CHECK_THROWS_AS(
        load_graph(R"({"vertices":["a"],"edges":[{"id":"e","src":"a","dst":"a"},{"id":"e","src":"a","dst":"a"}]})"),
        SchemaError);
    CHECK_THROWS_WITH_AS(load_graph(R"({"vertices":["a"]})"), doctest::Contains("edges"), SchemaError);
    CHECK_THROWS_WITH_AS(
        load_graph(R"({"vertices":["a"],"edges":[{"id":"e","src":"a","dst":"a","weight":-1}]})"),
        doctest::Contains("weight"), SchemaError);
    CHECK_THROWS_AS(load_graph("{not json"), SchemaError);

    auto b = load_graph(
        R"({"vertices":["a","b"],"edges":[{"id":"e","src":"a","dst":"b","weight":2}],"boundary":["b"],"q":-0.5})");
    CHECK(b.graph.is_boundary("b"));
    REQUIRE(b.cost);
    CHECK((*b.cost)[0] == 2.0);
    CHECK(*b.q == -0.5);
}

TEST_CASE("save and load roundtrip") {
    auto e = catalog("A_cycle", {-0.5, {}, 1, {}, {}});
    auto back = load_graph(save_graph(e.graph, &e.cost, e.dp.q()));
    REQUIRE(back.cost);
    CHECK(weighted_isomorphism(e.graph, e.cost, back.graph, *back.cost, 1e-12));
    CHECK(*back.q == -0.5);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    for (int trial = 0; trial < 30; ++trial) {
        auto g = oracle::random_symmetric_graph(rng, 1 + trial % 4, 2, 2);
        Cost w(g.num_edges());
        for (auto& x : w) x = u(rng);
        auto r = load_graph(save_graph(g, &w));
        REQUIRE(r.cost);
        CHECK(r.graph.vertices() == g.vertices());
        CHECK(weighted_isomorphism(g, w, r.graph, *r.cost, 1e-12));
    }
}

TEST_CASE("catalog examples") {
    auto cyc = catalog("A_cycle", {-0.5, {}, 1, {}, {}});
    CHECK(cyc.graph.num_vertices() == 2);
    CHECK(cyc.graph.num_edges() == 4);
    // Counter-clockwise edges come first.
    CHECK(cyc.cost == Cost{0.5, 0.5, 2.0, 2.0});

    auto e6 = catalog("E6_affine", {1.0, {}, {}, {}, {}});
    CHECK(e6.graph.num_vertices() == 7);
    std::multiset<double> ws;
    for (double x : e6.cost) ws.insert(std::round(x * 1e9) / 1e9);
    for (double expect : {2.0, 0.5, 1.5, 2.0 / 3.0})
        CHECK(ws.count(std::round(expect * 1e9) / 1e9) == 3);
    // Centre out-edges carry 2/3.
    auto c = e6.graph.vertex_index("c");
    for (std::size_t e : e6.graph.out_edges(c)) CHECK(e6.cost[e] == doctest::Approx(2.0 / 3.0));

    auto pl = catalog("point_loops", {1.0, {}, {}, {}, 2});
    CHECK(pl.graph.num_vertices() == 1);
    CHECK(pl.cost == Cost{1.0, 1.0});

    CHECK_THROWS_AS(catalog("no_such_graph", {}), CatalogError);
    CHECK_THROWS_AS(catalog("A_prime", {-1.0, {}, 1, {}, {}}), CatalogError);
    CHECK_THROWS_AS(catalog("E6_affine", {0.5, {}, {}, {}, {}}), CatalogError);
    CHECK_THROWS_AS(catalog("A_inf_inf", {0.5, 0.0, {}, 0, {}}), CatalogError);
}

TEST_CASE("catalog entries are fair and balanced on interior vertices") {
    for (const auto& [label, e] : fixture::catalog_suite()) {
        INFO(label);
        auto r = verify_fair_balanced(e.graph, e.cost, e.dp);
        CHECK(r.pass);
        auto db = degree_bound_check(e.graph, e.dp.T());
        CHECK(db.ok);
    }
}

TEST_CASE("infinite windows flag their ends") {
    auto a = catalog("A_inf_inf", {0.5, 0.0, {}, 3, {}});
    CHECK(a.graph.num_vertices() == 7);
    CHECK(a.graph.boundary() == std::set<std::string>{"-3", "3"});
    auto d = catalog("D_inf_star", {0.5, {}, {}, 4, {}});
    CHECK(d.graph.boundary() == std::set<std::string>{"4"});
    CHECK(is_connected(d.graph));
}

TEST_CASE("is_connected") {
    CHECK(is_connected(GraphBuilder().vertex("a").graph()));
    CHECK_FALSE(is_connected(GraphBuilder().vertex("a").vertex("b").graph()));
    CHECK(is_connected(GraphBuilder().vertex("a").vertex("b").edge("a", "b").graph()));
}

TEST_CASE("degree_bound_check") {
    auto pl = catalog("point_loops", {1.0, {}, {}, {}, 2});
    auto r = degree_bound_check(pl.graph, 2.0);
    CHECK(r.degree == 2);
    CHECK(r.ok);
    GraphBuilder b;
    b.vertex("v");
    for (int k = 0; k < 5; ++k) b.edge("v", "v");
    auto five = degree_bound_check(b.graph(), 2.0);
    CHECK(five.degree == 5);
    CHECK_FALSE(five.ok);
    auto e6 = catalog("E6_affine", {1.0, {}, {}, {}, {}});
    auto r6 = degree_bound_check(e6.graph, 2.0);
    CHECK(r6.degree == 3);
    CHECK(r6.ok);
}

TEST_CASE("to_dot") {
    auto empty = to_dot(OrientedGraph{});
    CHECK(empty.find("digraph") != std::string::npos);
    CHECK(empty.find("->") == std::string::npos);
    GraphBuilder b;
    b.vertex("v").edge("v", "v", 1.0);
    auto g = b.graph();
    auto w = b.cost();
    auto dot = to_dot(g, &w);
    CHECK(dot.find("\"v\" -> \"v\" [label=\"1\"]") != std::string::npos);
    auto cyc = catalog("A_cycle", {0.5, {}, 2, {}, {}});
    auto d2 = to_dot(cyc.graph, &cyc.cost);
    std::size_t arrows = 0, labels = 0;
    for (std::size_t p = d2.find("->"); p != std::string::npos; p = d2.find("->", p + 1)) ++arrows;
    for (std::size_t p = d2.find("label="); p != std::string::npos; p = d2.find("label=", p + 1)) ++labels;
    CHECK(cyc.graph.num_vertices() == 3);
    CHECK(arrows == 6);
    CHECK(labels == 6);
}

TEST_CASE("n_step examples") {
    auto a = catalog("A_inf_inf", {1.0, 0.0, {}, 4, {}});
    auto one = n_step(a.graph, a.cost, 2.0, 1);
    CHECK(one.graph.num_edges() == a.graph.num_edges());
    CHECK(one.cost == a.cost);
    CHECK(one.T == 2.0);

    auto two = n_step(a.graph, a.cost, 2.0, 2);
    CHECK(two.T == -4.0);
    auto v0 = two.graph.vertex_index("0");
    std::size_t loops = 0;
    std::set<std::string> targets;
    for (std::size_t e : two.graph.out_edges(v0)) {
        CHECK(two.cost[e] == doctest::Approx(1.0));
        if (two.graph.is_loop(e)) ++loops;
        else targets.insert(two.graph.vertices()[two.graph.dst(e)]);
    }
    CHECK(loops == 2);
    CHECK(targets == std::set<std::string>{"-2", "2"});
    CHECK(source_cost(two.graph, two.cost, "0") == doctest::Approx(4.0));

    auto pl = catalog("point_loops", {1.0, {}, {}, {}, 2});
    auto three = n_step(pl.graph, pl.cost, 2.0, 3);
    CHECK(three.graph.num_edges() == 8);
    CHECK(three.T == 8.0);
    for (double x : three.cost) CHECK(x == doctest::Approx(1.0));

    CHECK_THROWS(n_step(pl.graph, pl.cost, 2.0, 0));
}

TEST_CASE("n_step output is fair and balanced at the claimed T") {
    for (const auto& [label, e] : fixture::catalog_suite()) {
        for (int n : {1, 2, 3}) {
            INFO(label << " n=" << n);
            auto r = n_step(e.graph, e.cost, e.dp.T(), n);
            CHECK(r.T == doctest::Approx(std::pow(-1.0, n + 1) * std::pow(e.dp.T(), n)));
            CHECK(verify_fair_balanced(r.graph, r.cost, r.T).pass);
        }
    }
}

// Paths of length b in the a-step graph are the paths of length a*b.
TEST_CASE("n_step composes along paths") {
    for (const auto& [label, e] : fixture::catalog_suite()) {
        double T = e.dp.T();
        for (auto [a, b] : {std::pair{2, 2}, {1, 3}, {3, 1}, {1, 2}, {2, 1}}) {
            INFO(label << " a=" << a << " b=" << b);
            auto direct = n_step(e.graph, e.cost, T, a * b);
            auto first = n_step(e.graph, e.cost, T, a);
            auto composed = n_step(first.graph, first.cost, first.T, b);
            CHECK(composed.T == doctest::Approx(direct.T));
            REQUIRE(direct.graph.vertices() == composed.graph.vertices());
            for (std::size_t v = 0; v < direct.graph.num_vertices(); ++v) {
                if (direct.graph.is_boundary(v) || composed.graph.is_boundary(v)) continue;
                for (std::size_t u = 0; u < direct.graph.num_vertices(); ++u)
                    CHECK(weights_between(direct.graph, direct.cost, v, u) ==
                          weights_between(composed.graph, composed.cost, v, u));
            }
        }
    }
}
