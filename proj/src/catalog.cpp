#include "qhs/catalog.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <map>

namespace qhs {

namespace {

double require_q(const CatalogParams& p, double fallback) { return p.q.value_or(fallback); }

void require_unit_modulus(const std::string& name, double q) {
    if (std::abs(std::abs(q) - 1.0) > 1e-12)
        throw CatalogError(name + " admits a fair and balanced cost only for |q| = 1");
}

void require_q_minus_one(const std::string& name, double q) {
    if (std::abs(q + 1.0) > 1e-12) throw CatalogError(name + " is defined for q = -1 only");
}

int window_of(const CatalogParams& p) {
    int M = p.window.value_or(kDefaultWindow);
    if (M < 1) throw CatalogError("window must be at least 1");
    return M;
}

std::string num(int k) { return std::to_string(k); }

// Weighted tree from an integer Perron vector: W(v -> w) = c_w / c_v.
CatalogEntry perron_tree(const std::vector<std::string>& names, const std::vector<int>& c,
                         const std::vector<std::pair<int, int>>& links, double q) {
    GraphBuilder b;
    for (const auto& n : names) b.vertex(n);
    for (auto [v, w] : links) b.pair(names[v], names[w], static_cast<double>(c[w]) / c[v]);
    return {b.graph(), b.cost(), DeformationParameter::from_q(q)};
}

// Star with arms of the given lengths; arm vertices carry Perron entries.
CatalogEntry star(const std::vector<std::vector<int>>& arms, int centre, double q) {
    std::vector<std::string> names{"c"};
    std::vector<int> c{centre};
    std::vector<std::pair<int, int>> links;
    for (std::size_t a = 0; a < arms.size(); ++a) {
        int prev = 0;
        for (std::size_t k = 0; k < arms[a].size(); ++k) {
            names.push_back(std::string(1, static_cast<char>('a' + a)) + num(static_cast<int>(k + 1)));
            c.push_back(arms[a][k]);
            int cur = static_cast<int>(names.size()) - 1;
            links.push_back({prev, cur});
            prev = cur;
        }
    }
    return perron_tree(names, c, links, q);
}

CatalogEntry a_inf_inf(const CatalogParams& p) {
    double q = require_q(p, 1.0);
    int M = window_of(p);
    double x = p.x.value_or(0.0);
    GraphBuilder b;
    for (int m = -M; m <= M; ++m) b.vertex(num(m), std::abs(m) == M);
    for (int m = -M; m < M; ++m) b.pair(num(m), num(m + 1), podles_weight(q, x, m));
    return {b.graph(), b.cost(), DeformationParameter::from_q(q)};
}

CatalogEntry d_inf_star(const CatalogParams& p) {
    double q = require_q(p, 1.0);
    auto dp = DeformationParameter::from_q(q);
    int M = window_of(p);
    double two = dp.abs_qint(2);
    GraphBuilder b;
    b.vertex("*").vertex("*~");
    for (int m = 1; m <= M; ++m) b.vertex(num(m), m == M);
    b.pair("*", "1", two).pair("*~", "1", two);
    double a = std::abs(q);
    auto f = [a](int k) { return std::pow(a, k) + std::pow(a, -k); };
    for (int m = 1; m < M; ++m) b.pair(num(m), num(m + 1), f(m + 1) / f(m));
    return {b.graph(), b.cost(), dp};
}

CatalogEntry a_cycle(const CatalogParams& p) {
    double q = require_q(p, 1.0);
    int n = p.n.value_or(1);
    if (n < 1) throw CatalogError("A_cycle requires n >= 1");
    double a = std::abs(q);
    GraphBuilder b;
    for (int k = 0; k <= n; ++k) b.vertex(num(k));
    // Counter-clockwise edges k -> k+1 first, then the clockwise ones.
    for (int k = 0; k <= n; ++k) b.edge(num(k), num((k + 1) % (n + 1)), a);
    for (int k = 0; k <= n; ++k) b.edge(num((k + 1) % (n + 1)), num(k), 1.0 / a);
    return {b.graph(), b.cost(), DeformationParameter::from_q(q)};
}

CatalogEntry d_affine(const CatalogParams& p) {
    double q = require_q(p, 1.0);
    require_unit_modulus("D_affine", q);
    int n = p.n.value_or(4);
    if (n < 4) throw CatalogError("D_affine requires n >= 4");
    // n+1 vertices: leaves l1,l2 on p1, leaves l3,l4 on p{n-3}, path p1..p{n-3}.
    int len = n - 3;
    std::vector<std::string> names{"l1", "l2", "l3", "l4"};
    std::vector<int> c{1, 1, 1, 1};
    for (int k = 1; k <= len; ++k) {
        names.push_back("p" + num(k));
        c.push_back(2);
    }
    std::vector<std::pair<int, int>> links{{4, 0}, {4, 1}, {3 + len, 2}, {3 + len, 3}};
    for (int k = 0; k + 1 < len; ++k) links.push_back({4 + k, 5 + k});
    return perron_tree(names, c, links, q);
}

CatalogEntry a_prime(const CatalogParams& p) {
    double q = require_q(p, -1.0);
    require_q_minus_one("A_prime", q);
    int m = p.n.value_or(2);
    if (m < 2) throw CatalogError("A_prime requires m >= 2");
    GraphBuilder b;
    for (int k = 1; k <= m; ++k) b.vertex(num(k));
    b.edge("1", "1", 1.0);
    for (int k = 1; k < m; ++k) b.pair(num(k), num(k + 1), 1.0);
    b.edge(num(m), num(m), 1.0);
    return {b.graph(), b.cost(), DeformationParameter::from_q(q)};
}

CatalogEntry d_prime(const CatalogParams& p) {
    double q = require_q(p, -1.0);
    require_q_minus_one("D_prime", q);
    int m = p.n.value_or(3);
    if (m < 3) throw CatalogError("D_prime requires m >= 3");
    GraphBuilder b;
    b.vertex("+").vertex("-").vertex("*");
    for (int k = 2; k <= m - 2; ++k) b.vertex("p" + num(k));
    b.pair("+", "*", 2.0).pair("-", "*", 2.0);
    std::string prev = "*";
    for (int k = 2; k <= m - 2; ++k) {
        b.pair(prev, "p" + num(k), 1.0);
        prev = "p" + num(k);
    }
    b.edge(prev, prev, 1.0);
    return {b.graph(), b.cost(), DeformationParameter::from_q(q)};
}

CatalogEntry a_inf_prime(const CatalogParams& p) {
    double q = require_q(p, -0.5);
    if (q >= 0) throw CatalogError("A_inf_prime requires q < 0");
    int M = window_of(p);
    double a = std::abs(q);
    // |[k]_t| for t = i|q|^{1/2} at odd k.
    auto odd = [a](int k) { return std::pow(a, k / 2.0) + std::pow(a, -k / 2.0); };
    GraphBuilder b;
    for (int m = 0; m <= M; ++m) b.vertex(num(m), m == M);
    b.edge("0", "0", 1.0);
    for (int m = 0; m < M; ++m) b.pair(num(m), num(m + 1), odd(2 * m + 3) / odd(2 * m + 1));
    return {b.graph(), b.cost(), DeformationParameter::from_q(q)};
}

CatalogEntry point_loops(const CatalogParams& p) {
    int n = p.loops.value_or(2);
    if (n < 1) throw CatalogError("point_loops requires at least one loop");
    double q;
    if (p.q) {
        q = *p.q;
    } else {
        if (n < 2) throw CatalogError("point_loops(1) needs an explicit q");
        // Odd loop counts force q < 0.
        q = DeformationParameter::from_T(n % 2 == 0 ? n : -n).q();
    }
    auto dp = DeformationParameter::from_q(q);
    if (n % 2 == 1 && q > 0) throw CatalogError("point_loops with odd loop count requires q < 0");
    int pairs = n / 2;
    double rest = dp.abs_T() - (n % 2);
    if (pairs == 0) {
        if (std::abs(rest) > 1e-12) throw CatalogError("point_loops: one loop forces |T| = 1");
    }
    GraphBuilder b;
    b.vertex("o");
    if (pairs > 0) {
        // Equal pairs lambda + 1/lambda = rest / pairs.
        double s = rest / pairs;
        if (s < 2.0 - 1e-12) throw CatalogError("point_loops: too many loops for this q");
        double lam = (s - std::sqrt(std::max(0.0, s * s - 4.0))) / 2.0;
        for (int k = 0; k < pairs; ++k) b.edge("o", "o", lam).edge("o", "o", 1.0 / lam);
    }
    if (n % 2 == 1) b.edge("o", "o", 1.0);
    return {b.graph(), b.cost(), dp};
}

} // namespace

double podles_weight(double q, double x, int m) {
    double a = std::abs(q);
    if (a == 1.0) return 1.0;
    if (std::isinf(x)) return x > 0 ? 1.0 / a : a;
    auto f = [a](double y) { return std::pow(a, y) + std::pow(a, -y); };
    return f(x + m + 1) / f(x + m);
}

const std::vector<std::string>& catalog_names() {
    static const std::vector<std::string> names{
        "A_inf_inf", "D_inf_star", "A_cycle", "E6_affine", "E7_affine",   "E8_affine",
        "D_affine",  "A_prime",    "D_prime", "A_inf_prime", "point_loops"};
    return names;
}

CatalogEntry catalog(const std::string& name, const CatalogParams& p) {
    if (name == "A_inf_inf") return a_inf_inf(p);
    if (name == "D_inf_star") return d_inf_star(p);
    if (name == "A_cycle") return a_cycle(p);
    if (name == "E6_affine") {
        double q = require_q(p, 1.0);
        require_unit_modulus(name, q);
        return star({{2, 1}, {2, 1}, {2, 1}}, 3, q);
    }
    if (name == "E7_affine") {
        double q = require_q(p, 1.0);
        require_unit_modulus(name, q);
        return star({{3, 2, 1}, {3, 2, 1}, {2}}, 4, q);
    }
    if (name == "E8_affine") {
        double q = require_q(p, 1.0);
        require_unit_modulus(name, q);
        return star({{5, 4, 3, 2, 1}, {4, 2}, {3}}, 6, q);
    }
    if (name == "D_affine") return d_affine(p);
    if (name == "A_prime") return a_prime(p);
    if (name == "D_prime") return d_prime(p);
    if (name == "A_inf_prime") return a_inf_prime(p);
    if (name == "point_loops") return point_loops(p);
    throw CatalogError("unknown catalog entry '" + name + "'");
}

} // namespace qhs
