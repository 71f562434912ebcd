#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "qhs/catalog.hpp"
#include "qhs/cost.hpp"
#include "qhs/ktheory.hpp"
#include "qhs/report.hpp"

using namespace qhs;

namespace {

// Rank over Q by plain Gaussian elimination on rationals.
std::size_t rational_rank(const IntMatrix& M) {
    std::vector<std::vector<mpq_class>> a(M.rows(), std::vector<mpq_class>(M.cols()));
    for (std::size_t i = 0; i < M.rows(); ++i)
        for (std::size_t j = 0; j < M.cols(); ++j) a[i][j] = M(i, j);
    std::size_t r = 0;
    for (std::size_t c = 0; c < M.cols() && r < M.rows(); ++c) {
        std::size_t p = r;
        while (p < M.rows() && a[p][c] == 0) ++p;
        if (p == M.rows()) continue;
        std::swap(a[p], a[r]);
        for (std::size_t i = r + 1; i < M.rows(); ++i) {
            if (a[i][c] == 0) continue;
            mpq_class f = a[i][c] / a[r][c];
            for (std::size_t j = c; j < M.cols(); ++j) a[i][j] -= f * a[r][j];
        }
        ++r;
    }
    return r;
}

// Determinant by cofactor-free elimination over Q.
mpq_class rational_det(const IntMatrix& M) {
    const std::size_t n = M.rows();
    std::vector<std::vector<mpq_class>> a(n, std::vector<mpq_class>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = M(i, j);
    mpq_class det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            mpq_class f = a[i][c] / a[c][c];
            for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
        }
    }
    return det;
}

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
    std::uniform_int_distribution<long> entry(-9, 9);
    IntMatrix M(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) M(i, j) = entry(rng);
    return M;
}

void check_smith(const IntMatrix& M) {
    auto f = smith_normal_form(M);
    REQUIRE(f.S.rows() == M.rows());
    REQUIRE(f.S.cols() == M.cols());
    CHECK(f.U * M * f.V == f.S);
    CHECK(f.S.is_diagonal());
    CHECK(abs(f.U.determinant()) == 1);
    CHECK(abs(f.V.determinant()) == 1);
    const std::size_t d = std::min(M.rows(), M.cols());
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < d; ++i) {
        CHECK(f.S(i, i) >= 0);
        if (f.S(i, i) != 0) ++nonzero;
        if (i + 1 < d && f.S(i, i) != 0) CHECK(f.S(i + 1, i + 1) % f.S(i, i) == 0);
        if (i + 1 < d && f.S(i, i) == 0) CHECK(f.S(i + 1, i + 1) == 0);
    }
    CHECK(nonzero == rational_rank(M));
}

IntMatrix minus_two(const IntMatrix& g) {
    IntMatrix m = g;
    for (std::size_t i = 0; i < g.rows(); ++i) m(i, i) -= 2;
    return m;
}

} // namespace

TEST_CASE("gamma_matrix and phi_matrix examples") {
    for (int n = 2; n <= 5; ++n) {
        auto g = gamma_matrix(catalog("point_loops", {{}, {}, {}, {}, n}).graph);
        CHECK(g == IntMatrix::from_rows({{n}}));
        CHECK(phi_matrix(g) == IntMatrix::from_rows({{-1, -1}, {1, n - 1}}));
    }
    CHECK(gamma_matrix(catalog("A_cycle", {1.0, {}, 1, {}, {}}).graph) ==
          IntMatrix::from_rows({{0, 2}, {2, 0}}));
    auto lone = GraphBuilder().vertex("o").graph();
    CHECK(gamma_matrix(lone) == IntMatrix::from_rows({{0}}));
    CHECK(phi_matrix(IntMatrix::from_rows({{0}})) == IntMatrix::from_rows({{-1, -1}, {1, -1}}));
    CHECK(phi_matrix(IntMatrix::from_rows({{0, 2}, {2, 0}})) ==
          IntMatrix::from_rows({{-1, 0, -1, 0}, {0, -1, 0, -1}, {1, 0, -1, 2}, {0, 1, 2, -1}}));
}

TEST_CASE("gamma_matrix rejects windows and non-symmetric graphs") {
    CHECK_THROWS_AS(gamma_matrix(catalog("A_inf_inf", {0.5, 0.0, {}, 2, {}}).graph), std::invalid_argument);
    auto one_way = GraphBuilder().vertex("a").vertex("b").edge("a", "b").graph();
    CHECK_THROWS_AS(gamma_matrix(one_way), std::invalid_argument);
    auto split = GraphBuilder().vertex("a").vertex("b").edge("a", "a").edge("b", "b").graph();
    CHECK_THROWS_AS(k_groups(split), std::invalid_argument);
}

TEST_CASE("smith_normal_form examples") {
    auto id = IntMatrix::identity(3);
    auto f = smith_normal_form(id);
    CHECK(f.S == id);
    CHECK(f.U == id);
    CHECK(f.V == id);

    auto d = smith_normal_form(IntMatrix::from_rows({{2, 0}, {0, 3}}));
    CHECK(d.S == IntMatrix::from_rows({{1, 0}, {0, 6}}));
    check_smith(IntMatrix::from_rows({{2, 0}, {0, 3}}));

    auto u = smith_normal_form(IntMatrix::from_rows({{-1, -1}, {1, 2}}));
    CHECK(u.S == IntMatrix::identity(2));

    check_smith(IntMatrix(3, 0));
    check_smith(IntMatrix(0, 2));
    check_smith(IntMatrix(2, 3));
    CHECK(smith_normal_form(IntMatrix::from_rows({{4, 6}})).S == IntMatrix::from_rows({{2, 0}}));
}

TEST_CASE("smith_normal_form on random integer matrices") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> dim(1, 20);
    for (int k = 0; k < 1000; ++k) {
        const std::size_t r = dim(rng), c = dim(rng);
        auto M = random_matrix(rng, r, c);
        INFO("k=" << k << " shape " << r << "x" << c);
        check_smith(M);
    }
}

TEST_CASE("rank deficient and large-entry matrices") {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 50; ++k) {
        // Product of thin factors has rank at most 3.
        auto A = random_matrix(rng, 8, 3), B = random_matrix(rng, 3, 7);
        auto M = A * B;
        check_smith(M);
        CHECK(rational_rank(M) <= 3);
    }
    IntMatrix big(2, 2);
    big(0, 0) = mpz_class("123456789012345678901234567890");
    big(1, 1) = mpz_class("987654321098765432109876543210");
    check_smith(big);
}

TEST_CASE("cokernel and kernel") {
    auto f = smith_normal_form(IntMatrix::from_rows({{2, 0, 0}, {0, 0, 0}}));
    auto ck = cokernel(f), kr = kernel(f);
    CHECK(ck.rank == 1);
    CHECK(ck.torsion == std::vector<mpz_class>{2});
    CHECK(kr.rank == 2);
    CHECK(kr.torsion.empty());
    CHECK(ck.to_string() == "Z + Z/2");
    CHECK(AbelianGroup{}.to_string() == "0");
    CHECK(AbelianGroup{3, {}}.to_string() == "Z^3");
}

TEST_CASE("k_groups of point_loops") {
    for (int n = 3; n <= 10; ++n) {
        INFO("n=" << n);
        auto k = k_groups(catalog("point_loops", {{}, {}, {}, {}, n}).graph);
        CHECK(k.K0.rank == 0);
        if (n == 3) CHECK(k.K0.torsion.empty());
        else CHECK(k.K0.torsion == std::vector<mpz_class>{n - 2});
        CHECK(k.K1 == AbelianGroup{});
    }
    auto two = k_groups(catalog("point_loops", {{}, {}, {}, {}, 2}).graph);
    CHECK(two.K0 == AbelianGroup{1, {}});
    CHECK(two.K1 == AbelianGroup{1, {}});
    CHECK(k_groups(catalog("point_loops", {{}, {}, {}, {}, 4}).graph).to_string() == "K0 = Z/2, K1 = 0");
}

// phi is equivalent to diag(-I, gamma - 2I) over Z, so K0 has rank
// nullity(gamma - 2I) and, when that vanishes, order |det(gamma - 2I)|.
TEST_CASE("k_groups agree with the gamma - 2 oracle") {
    std::vector<OrientedGraph> graphs;
    for (const auto& [label, e] : fixture::catalog_suite())
        if (e.graph.boundary().empty()) graphs.push_back(e.graph);
    for (int n = 1; n <= 6; ++n) graphs.push_back(catalog("A_cycle", {1.0, {}, n, {}, {}}).graph);
    std::mt19937_64 rng(3);
    for (int k = 0; k < 40; ++k) {
        GraphBuilder b;
        std::uniform_int_distribution<int> mult(0, 2);
        const int nv = 1 + k % 5;
        for (int v = 0; v < nv; ++v) b.vertex(std::to_string(v));
        for (int v = 0; v < nv; ++v) {
            for (int l = mult(rng); l > 0; --l) b.edge(std::to_string(v), std::to_string(v));
            if (v + 1 < nv) b.edge(std::to_string(v), std::to_string(v + 1)).edge(std::to_string(v + 1), std::to_string(v));
            for (int u = v + 2; u < nv; ++u)
                for (int m = mult(rng) - 1; m > 0; --m)
                    b.edge(std::to_string(v), std::to_string(u)).edge(std::to_string(u), std::to_string(v));
        }
        graphs.push_back(b.graph());
    }
    for (const auto& g : graphs) {
        INFO(save_graph(g));
        auto gm = gamma_matrix(g);
        auto k = k_groups(g);
        auto phi = phi_matrix(gm);
        const std::size_t nullity = gm.rows() - rational_rank(minus_two(gm));
        CHECK(k.K0.rank == nullity);
        CHECK(k.K1.rank == nullity);
        CHECK(k.K1.torsion.empty());
        CHECK(rational_rank(phi) + k.K1.rank == phi.cols());
        if (nullity == 0) {
            mpz_class order = 1;
            for (const auto& t : k.K0.torsion) order *= t;
            CHECK(mpq_class(order) == abs(rational_det(minus_two(gm))));
        }
        for (std::size_t i = 0; i + 1 < k.K0.torsion.size(); ++i)
            CHECK(k.K0.torsion[i + 1] % k.K0.torsion[i] == 0);
        for (const auto& t : k.K0.torsion) CHECK(t >= 2);
    }
}

TEST_CASE("K-group JSON") {
    auto k = k_groups(catalog("point_loops", {{}, {}, {}, {}, 4}).graph);
    auto j = to_json(k);
    CHECK(j["K0"]["rank"] == 0);
    CHECK(j["K0"]["torsion"].size() == 1);
    CHECK(j["K1"]["rank"] == 0);
    CHECK(j["K1"]["torsion"].empty());
}
