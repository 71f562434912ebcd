#include <doctest.h>

#include <cmath>
#include <limits>

#include "fixtures.hpp"
#include "qhs/catalog.hpp"
#include "qhs/cost.hpp"
#include "qhs/presentation.hpp"
#include "qhs/report.hpp"

using namespace qhs;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double max_abs(const CMatrix& A) { return A.size() ? A.cwiseAbs().maxCoeff() : 0.0; }

Presentation present(const CatalogEntry& e) {
    return emit_presentation(build_solution(e.graph, e.cost, e.dp), e.dp);
}

} // namespace

TEST_CASE("f_matrix examples") {
    Eigen::Matrix2d a, b, c;
    a << 0, 1, -1, 0;
    b << 0, 1, 1, 0;
    c << 0, 0.5, -2, 0;
    CHECK((f_matrix(DeformationParameter::from_q(1.0)) - a).cwiseAbs().maxCoeff() == 0.0);
    CHECK((f_matrix(DeformationParameter::from_q(-1.0)) - b).cwiseAbs().maxCoeff() == 0.0);
    CHECK((f_matrix(DeformationParameter::from_q(0.25)) - c).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("e_matrices examples") {
    for (double q : {0.5, -0.5, 0.3}) {
        for (double x : {0.0, 0.3, kInf}) {
            INFO("q=" << q << " x=" << x);
            auto e = catalog("A_inf_inf", {q, x, {}, 2, {}});
            auto s = build_solution(e.graph, e.cost, e.dp);
            auto E = e_matrices(s, e.dp);
            const CMatrix& E10 = E.at({s.index_of("1"), s.index_of("0")});
            REQUIRE(E10.size() == 1);
            CHECK(std::abs(E10(0, 0) - std::sqrt(1.0 / podles_weight(q, x, 0))) < 1e-14);
        }
    }

    auto pl = catalog("point_loops", {1.0, {}, {}, {}, 2});
    auto E = e_matrices(build_solution(pl.graph, pl.cost, pl.dp), pl.dp);
    CMatrix expect(2, 2);
    expect << 0.0, 1.0, -1.0, 0.0;
    CHECK(max_abs(E.at({0, 0}) - expect) < 1e-15);
    CHECK(max_abs(E.at({0, 0}).conjugate() * E.at({0, 0}) + CMatrix::Identity(2, 2)) < 1e-15);

    auto cyc = catalog("A_cycle", {-0.5, {}, 2, {}, {}});
    auto sc = build_solution(cyc.graph, cyc.cost, cyc.dp);
    auto Ec = e_matrices(sc, cyc.dp);
    for (std::size_t i = 0; i < cyc.graph.num_edges(); ++i) {
        const auto key = BlockKey{cyc.graph.src(i), cyc.graph.dst(i)};
        CHECK(std::abs(Ec.at(key)(0, 0) - std::sqrt(cyc.cost[i])) < 1e-15);
    }
}

TEST_CASE("emit_presentation counts") {
    auto cyc = present(catalog("A_cycle", {-0.5, {}, 1, {}, {}}));
    CHECK(cyc.projections.size() == 2);
    CHECK(cyc.generators.size() == 8);
    CHECK(cyc.count("Eq2") == 8);

    auto pl = present(catalog("point_loops", {1.0, {}, {}, {}, 2}));
    CHECK(pl.projections.size() == 1);
    CHECK(pl.generators.size() == 4);

    for (const auto& [label, e] : fixture::catalog_suite()) {
        INFO(label);
        auto p = present(e);
        const std::size_t V = e.graph.num_vertices(), E = e.graph.num_edges();
        std::size_t interior = 0, pairs = 0;
        for (std::size_t v = 0; v < V; ++v) {
            interior += e.graph.is_boundary(v) ? 0 : 1;
            pairs += e.graph.out_edges(v).size() * e.graph.out_edges(v).size();
        }
        CHECK(p.projections.size() == V);
        CHECK(p.generators.size() == 2 * E);
        CHECK(p.count("Eq1") == V * V * E);
        CHECK(p.count("Eq2") == 4 * interior);
        CHECK(p.count("Eq2p") == pairs);
        CHECK(p.count("Eq3") == 2 * E);
    }
}

TEST_CASE("structure matrix identities on every presentation") {
    for (const auto& [label, e] : fixture::catalog_suite()) {
        INFO(label);
        auto p = present(e);
        auto c = check_presentation(p, e.dp);
        CHECK(c.pass);
        CHECK(c.references_ok);
        CHECK(c.e_identity_residual < 1e-10);
        CHECK(c.f_spectrum_residual < 1e-10);
        const double s = e.dp.sign();
        for (const auto& [key, Evw] : p.E) {
            const CMatrix& Ewv = p.E.at({key.second, key.first});
            CMatrix P = Evw.conjugate() * Ewv;
            CHECK(max_abs(P + s * CMatrix::Identity(P.rows(), P.cols())) < 1e-10);
        }
    }
}

TEST_CASE("check_presentation flags a broken structure matrix") {
    auto p = present(catalog("point_loops", {1.0, {}, {}, {}, 2}));
    p.E.at({0, 0})(0, 1) *= 1.01;
    auto c = check_presentation(p, DeformationParameter::from_q(1.0));
    CHECK_FALSE(c.pass);
    CHECK(c.e_identity_residual > 1e-3);

    auto p2 = present(catalog("point_loops", {1.0, {}, {}, {}, 2}));
    p2.relations.push_back({"Eq3", {"nope", "1"}, {"nope:1"}, {1.0}, 0.0});
    CHECK_FALSE(check_presentation(p2, DeformationParameter::from_q(1.0)).references_ok);
}

// Rebuild sum_{a,b} G_ab z_a^* z_b = 1 from the emitted Eq3 and Eq2p
// relations of the edge 0 -> 1 and compare with the printed Podles form
// |q| z_1^* z_1 + |q|^-1 z_2^* z_2 = W(1 -> 0)^-1.
TEST_CASE("Podles window reproduces the simplified relations") {
    for (double q : {0.5, -0.5, 0.3, -0.7}) {
        for (double x : {0.0, 0.3, kInf}) {
            INFO("q=" << q << " x=" << x);
            auto e = catalog("A_inf_inf", {q, x, {}, 1, {}});
            auto p = present(e);
            const std::string up = edge_id("0", "1", 0), down = edge_id("1", "0", 0);
            Eigen::Matrix2cd c = Eigen::Matrix2cd::Zero();  // z^(01)_j^* = sum_l c(j, l) z^(10)_l
            for (const auto& r : p.relations) {
                if (r.kind != "Eq3" || r.indices[0] != up) continue;
                const int j = std::stoi(r.indices[1]) - 1;
                for (std::size_t t = 0; t < r.terms.size(); ++t) {
                    REQUIRE(r.terms[t].rfind(down + ":", 0) == 0);
                    c(j, std::stoi(r.terms[t].substr(down.size() + 1)) - 1) += r.coeffs[t];
                }
            }
            bool unit = false;
            for (const auto& r : p.relations)
                if (r.kind == "Eq2p" && r.indices == std::vector<std::string>{up, up})
                    unit = std::abs(r.rhs - 1.0) < 1e-15;
            CHECK(unit);
            Eigen::Matrix2cd G = c.adjoint() * c;
            const double W10 = 1.0 / podles_weight(q, x, 0);
            const double a = std::abs(q);
            CHECK(std::abs(G(0, 0) / W10 - a) < 1e-12);
            CHECK(std::abs(G(1, 1) / W10 - 1.0 / a) < 1e-12);
            CHECK(std::abs(G(0, 1)) < 1e-15);
            CHECK(std::abs(G(1, 0)) < 1e-15);

            auto sr = simplified_relation(p, "1", "0");
            CHECK(std::abs(sr.G(0, 0) - a) < 1e-12);
            CHECK(std::abs(sr.G(1, 1) - 1.0 / a) < 1e-12);
            CHECK(std::abs(sr.G(0, 1)) == 0.0);
            CHECK(sr.rhs == doctest::Approx(1.0 / W10).epsilon(1e-12));
        }
    }
    auto pl = present(catalog("point_loops", {1.0, {}, {}, {}, 2}));
    CHECK_THROWS_AS(simplified_relation(pl, "o", "o"), std::invalid_argument);
}

TEST_CASE("podles_parameters") {
    auto p = podles_parameters(DeformationParameter::from_q(0.5), 0.0, 3);
    CHECK(p.a == doctest::Approx(1.25).epsilon(1e-14));
    CHECK(p.c == doctest::Approx(4.0 / 9.0).epsilon(1e-14));
    REQUIRE(p.weights.size() == 6);

    auto inf = podles_parameters(DeformationParameter::from_q(0.5), kInf, 3);
    for (auto [m, w] : inf.weights) CHECK(w == doctest::Approx(2.0).epsilon(1e-14));

    CHECK_THROWS_AS(podles_parameters(DeformationParameter::from_q(1.0), 0.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(podles_parameters(DeformationParameter::from_q(-1.0), 0.0, 2), std::invalid_argument);

    for (double q : {0.3, -0.3, 0.7, -0.7}) {
        for (double x : {0.0, 0.25, 0.5, kInf}) {
            INFO("q=" << q << " x=" << x);
            const double aq = std::abs(q);
            auto pp = podles_parameters(DeformationParameter::from_q(q), x, 4);
            if (!std::isinf(x)) {
                auto f = [aq](double y) { return std::pow(aq, y) + std::pow(aq, -y); };
                CHECK(pp.a == doctest::Approx(f(x + 1) / f(x)).epsilon(1e-13));
                CHECK(pp.c == doctest::Approx(1.0 / std::pow(std::pow(aq, x + 1) - std::pow(aq, -x - 1), 2))
                                  .epsilon(1e-13));
            }
            GraphBuilder b;
            for (int m = -4; m <= 4; ++m) b.vertex(std::to_string(m), std::abs(m) == 4);
            for (auto [m, w] : pp.weights) b.pair(std::to_string(m), std::to_string(m + 1), w);
            auto g = b.graph();
            CHECK(verify_fair_balanced(g, b.cost(), DeformationParameter::from_q(q)).pass);
        }
    }
}

TEST_CASE("matrix model satisfies all relation families") {
    std::vector<CatalogEntry> cases{catalog("A_inf_inf", {0.5, 0.0, {}, 1, {}}),
                                    catalog("A_inf_inf", {-0.5, 0.3, {}, 1, {}}),
                                    catalog("A_cycle", {0.5, {}, 2, {}, {}})};
    for (const auto& e : cases) {
        auto s = build_solution(e.graph, e.cost, e.dp);
        auto p = emit_presentation(s, e.dp);
        auto m = matrix_model(p, s);
        CHECK(m.found);
        CHECK(m.residual < 1e-8);
        CHECK(model_residual(p, s, m.z) < 1e-8);
        std::map<std::string, Eigen::Vector2cd> zero;
        CHECK(model_residual(p, s, zero) > 0.5);
    }
}

TEST_CASE("presentation JSON is deterministic and complete") {
    auto e = catalog("A_inf_inf", {0.5, 0.0, {}, 2, {}});
    auto p = present(e);
    auto a = dump(to_json(p));
    CHECK(a == dump(to_json(present(e))));
    auto j = Json::parse(a);
    CHECK(j["generators"].size() == p.generators.size());
    CHECK(j["relations"].size() == p.relations.size());
    CHECK(j["E"].size() == p.E.size());
    CHECK(j["F"][0][1].get<double>() == doctest::Approx(std::sqrt(0.5)));
    CHECK(j["q_sign"] == 1);
}
