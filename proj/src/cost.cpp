#include "qhs/cost.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

namespace qhs {

bool is_valid_involution(const OrientedGraph& g, const Involution& inv) {
    if (inv.pair.size() != g.num_edges()) return false;
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        std::size_t f = inv.pair[e];
        if (f >= g.num_edges() || inv.pair[f] != e) return false;
        if (g.src(f) != g.dst(e) || g.dst(f) != g.src(e)) return false;
        if (f == e && !g.is_loop(e)) return false;
    }
    return true;
}

double source_cost(const OrientedGraph& g, const Cost& w, std::size_t v) {
    double s = 0.0;
    for (auto e : g.out_edges(v)) s += w[e];
    return s;
}

double source_cost(const OrientedGraph& g, const Cost& w, const std::string& v) {
    return source_cost(g, w, g.vertex_index(v));
}

namespace {

// Kuhn's augmenting-path matching; left[i] is matched to match_l[i].
std::optional<std::vector<std::size_t>> perfect_matching(
    std::size_t nl, std::size_t nr, const std::function<bool(std::size_t, std::size_t)>& ok) {
    if (nl != nr) return std::nullopt;
    const std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> match_r(nr, none), match_l(nl, none);
    std::vector<char> seen;
    std::function<bool(std::size_t)> augment = [&](std::size_t i) {
        for (std::size_t j = 0; j < nr; ++j) {
            if (seen[j] || !ok(i, j)) continue;
            seen[j] = 1;
            if (match_r[j] == none || augment(match_r[j])) {
                match_r[j] = i;
                match_l[i] = j;
                return true;
            }
        }
        return false;
    };
    for (std::size_t i = 0; i < nl; ++i) {
        seen.assign(nr, 0);
        if (!augment(i)) return std::nullopt;
    }
    return match_l;
}

bool reciprocal(double a, double b, double tol) { return std::abs(a * b - 1.0) <= tol; }

} // namespace

std::optional<Involution> find_involution(const OrientedGraph& g, const Cost& w,
                                          bool require_loop_free, double tol) {
    validate_cost(g, w);
    Involution inv;
    inv.pair.assign(g.num_edges(), 0);
    const std::size_t n = g.num_vertices();
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t u = v + 1; u < n; ++u) {
            auto a = g.edges_between(v, u);
            auto b = g.edges_between(u, v);
            auto m = perfect_matching(a.size(), b.size(), [&](std::size_t i, std::size_t j) {
                return reciprocal(w[a[i]], w[b[j]], tol);
            });
            if (!m) return std::nullopt;
            for (std::size_t i = 0; i < a.size(); ++i) {
                inv.pair[a[i]] = b[(*m)[i]];
                inv.pair[b[(*m)[i]]] = a[i];
            }
        }
        // Loops: weights above 1 match weights below 1; unit loops pair up in
        // order, leaving at most one fixed point.
        auto loops = g.edges_between(v, v);
        std::vector<std::size_t> big, small, unit;
        for (auto e : loops) {
            if (reciprocal(w[e], w[e], tol))
                unit.push_back(e);
            else
                (w[e] > 1.0 ? big : small).push_back(e);
        }
        auto m = perfect_matching(big.size(), small.size(), [&](std::size_t i, std::size_t j) {
            return reciprocal(w[big[i]], w[small[j]], tol);
        });
        if (!m) return std::nullopt;
        for (std::size_t i = 0; i < big.size(); ++i) {
            inv.pair[big[i]] = small[(*m)[i]];
            inv.pair[small[(*m)[i]]] = big[i];
        }
        if (require_loop_free && unit.size() % 2 == 1) return std::nullopt;
        for (std::size_t i = 0; i + 1 < unit.size(); i += 2) {
            inv.pair[unit[i]] = unit[i + 1];
            inv.pair[unit[i + 1]] = unit[i];
        }
        if (unit.size() % 2 == 1) inv.pair[unit.back()] = unit.back();
    }
    return inv;
}

FairnessReport verify_fair_balanced(const OrientedGraph& g, const Cost& w, double T,
                                    const FairnessOptions& opt) {
    validate_cost(g, w);
    FairnessReport r;
    const double absT = std::abs(T);
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        double c = source_cost(g, w, v);
        r.source_costs.push_back(c);
        if (!g.is_boundary(v) && std::abs(c - absT) > opt.tol) {
            std::ostringstream os;
            os << "source_cost:" << g.vertices()[v];
            r.reasons.push_back(os.str());
        }
    }
    if (T > 0) {
        for (std::size_t v = 0; v < g.num_vertices(); ++v) {
            if (g.edges_between(v, v).size() % 2 == 1) {
                r.loop_parity_ok = false;
                r.reasons.push_back("loop_parity:" + g.vertices()[v]);
            }
        }
    }
    r.witness = find_involution(g, w, T > 0, opt.tol);
    if (!r.witness) r.reasons.push_back("no_involution");
    if (opt.require_connected && !is_connected(g)) r.reasons.push_back("disconnected");
    r.pass = r.reasons.empty();
    return r;
}

FairnessReport verify_fair_balanced(const OrientedGraph& g, const Cost& w,
                                    const DeformationParameter& dp, const FairnessOptions& opt) {
    return verify_fair_balanced(g, w, dp.T(), opt);
}

Eigen::MatrixXi adjacency(const OrientedGraph& g) {
    Eigen::MatrixXi A = Eigen::MatrixXi::Zero(g.num_vertices(), g.num_vertices());
    for (std::size_t e = 0; e < g.num_edges(); ++e) A(g.src(e), g.dst(e)) += 1;
    return A;
}

bool is_symmetric(const OrientedGraph& g) {
    Eigen::MatrixXi A = adjacency(g);
    return A == A.transpose();
}

PowerResult perron_power(const Eigen::MatrixXd& A, double tol, int max_iter) {
    const Eigen::Index n = A.rows();
    if (n == 0) return {0.0, Eigen::VectorXd(), 0};
    Eigen::VectorXd x = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
    double lambda = 0.0;
    int it = 0;
    for (; it < max_iter; ++it) {
        Eigen::VectorXd Ax = A * x;
        lambda = x.dot(Ax);
        if ((Ax - lambda * x).norm() <= tol) break;
        Eigen::VectorXd y = Ax + x;
        double nrm = y.norm();
        if (nrm == 0.0) break;
        x = y / nrm;
    }
    return {lambda, x, it};
}

double graph_norm(const OrientedGraph& g, double tol) {
    if (!is_symmetric(g)) throw std::invalid_argument("graph_norm: adjacency is not symmetric");
    return perron_power(adjacency(g).cast<double>(), tol).value;
}

std::optional<Cost> perron_cost(const OrientedGraph& g, double T, double tol) {
    if (!is_connected(g)) throw std::invalid_argument("perron_cost: graph is disconnected");
    if (!is_symmetric(g)) throw std::invalid_argument("perron_cost: adjacency is not symmetric");
    PowerResult p = perron_power(adjacency(g).cast<double>(), 1e-13);
    if (std::abs(std::abs(T) - p.value) > tol) return std::nullopt;
    Eigen::VectorXd c = p.vector / p.vector.minCoeff();
    Cost w(g.num_edges());
    for (std::size_t e = 0; e < g.num_edges(); ++e) w[e] = c[g.dst(e)] / c[g.src(e)];
    return w;
}

std::vector<double> random_walk(const OrientedGraph& g, const Cost& w,
                                const DeformationParameter& dp, double tol) {
    auto rep = verify_fair_balanced(g, w, dp, {tol, false});
    if (!rep.pass) throw std::invalid_argument("random_walk: cost is not fair and balanced");
    std::vector<double> p(w.size());
    for (std::size_t e = 0; e < w.size(); ++e) p[e] = w[e] / dp.abs_T();
    return p;
}

std::string to_string(AdeTag t) {
    switch (t) {
    case AdeTag::A_cycle: return "A_cycle";
    case AdeTag::D_affine: return "D_affine";
    case AdeTag::E6_affine: return "E6_affine";
    case AdeTag::E7_affine: return "E7_affine";
    case AdeTag::E8_affine: return "E8_affine";
    case AdeTag::A_inf_inf: return "A_inf_inf";
    case AdeTag::D_inf_star: return "D_inf_star";
    case AdeTag::A_inf: return "A_inf";
    case AdeTag::A_prime: return "A_prime";
    case AdeTag::D_prime: return "D_prime";
    case AdeTag::A_inf_prime: return "A_inf_prime";
    case AdeTag::point_double_loop: return "point_double_loop";
    case AdeTag::none: return "none";
    }
    return "none";
}

bool is_infinite_type(AdeTag t) {
    return t == AdeTag::A_inf_inf || t == AdeTag::D_inf_star || t == AdeTag::A_inf ||
           t == AdeTag::A_inf_prime;
}

namespace {

enum class End { plain, loop, boundary };

struct Shape {
    std::size_t n;
    std::vector<std::vector<std::size_t>> nbr;  // simple undirected neighbours
    std::vector<int> loops;
    std::vector<bool> boundary;
};

// Walks from a leaf along degree-2 vertices; returns the visited chain.
std::vector<std::size_t> arm(const Shape& s, std::size_t from, std::size_t start) {
    std::vector<std::size_t> chain{start};
    std::size_t prev = from, cur = start;
    while (s.nbr[cur].size() == 2) {
        std::size_t nxt = s.nbr[cur][0] == prev ? s.nbr[cur][1] : s.nbr[cur][0];
        prev = cur;
        cur = nxt;
        chain.push_back(cur);
    }
    return chain;
}

End end_kind(const Shape& s, std::size_t v) {
    if (s.boundary[v]) return End::boundary;
    return s.loops[v] == 1 ? End::loop : End::plain;
}

AdeTag classify_path(const Shape& s) {
    std::vector<std::size_t> ends;
    for (std::size_t v = 0; v < s.n; ++v)
        if (s.nbr[v].size() == 1) ends.push_back(v);
    if (ends.size() != 2) return AdeTag::none;
    // Loops are allowed only at the ends, boundary only at the ends.
    for (std::size_t v = 0; v < s.n; ++v)
        if (s.nbr[v].size() == 2 && (s.loops[v] != 0 || s.boundary[v])) {
            // D_prime with m = 3: a 3-path whose middle carries the loop.
            if (s.n == 3 && s.loops[v] == 1 && !s.boundary[v] &&
                end_kind(s, ends[0]) == End::plain && end_kind(s, ends[1]) == End::plain)
                return AdeTag::D_prime;
            return AdeTag::none;
        }
    End a = end_kind(s, ends[0]), b = end_kind(s, ends[1]);
    if (a > b) std::swap(a, b);
    if (a == End::loop && b == End::loop) return AdeTag::A_prime;
    if (a == End::boundary && b == End::boundary) return AdeTag::A_inf_inf;
    if (a == End::loop && b == End::boundary) return AdeTag::A_inf_prime;
    if (a == End::plain && b == End::boundary) return AdeTag::A_inf;
    return AdeTag::none;
}

AdeTag classify_tree(const Shape& s) {
    std::vector<std::size_t> branch;
    for (std::size_t v = 0; v < s.n; ++v) {
        if (s.nbr[v].size() >= 3) branch.push_back(v);
        if (s.nbr[v].size() > 4) return AdeTag::none;
    }
    if (branch.empty()) return classify_path(s);
    for (std::size_t v = 0; v < s.n; ++v)
        if (s.boundary[v] && s.nbr[v].size() != 1) return AdeTag::none;

    if (branch.size() == 1) {
        std::size_t c = branch[0];
        std::vector<std::vector<std::size_t>> arms;
        for (auto u : s.nbr[c]) arms.push_back(arm(s, c, u));
        std::sort(arms.begin(), arms.end(), [&](const auto& x, const auto& y) {
            if (x.size() != y.size()) return x.size() < y.size();
            return end_kind(s, x.back()) < end_kind(s, y.back());
        });
        std::vector<std::size_t> len;
        for (auto& a : arms) len.push_back(a.size());
        // Interior vertices of arms must be plain.
        for (auto& a : arms)
            for (std::size_t k = 0; k + 1 < a.size(); ++k)
                if (s.loops[a[k]] || s.boundary[a[k]]) return AdeTag::none;
        if (s.loops[c] || s.boundary[c]) return AdeTag::none;
        std::vector<End> tips;
        for (auto& a : arms) tips.push_back(end_kind(s, a.back()));
        bool all_plain = std::all_of(tips.begin(), tips.end(), [](End e) { return e == End::plain; });
        if (len.size() == 4) {
            if (all_plain && len == std::vector<std::size_t>{1, 1, 1, 1}) return AdeTag::D_affine;
            return AdeTag::none;
        }
        if (all_plain) {
            if (len == std::vector<std::size_t>{2, 2, 2}) return AdeTag::E6_affine;
            if (len == std::vector<std::size_t>{1, 3, 3}) return AdeTag::E7_affine;
            if (len == std::vector<std::size_t>{1, 2, 5}) return AdeTag::E8_affine;
            return AdeTag::none;
        }
        if (len[0] == 1 && len[1] == 1 && tips[0] == End::plain && tips[1] == End::plain) {
            if (tips[2] == End::loop) return AdeTag::D_prime;
            if (tips[2] == End::boundary) return AdeTag::D_inf_star;
        }
        return AdeTag::none;
    }
    if (branch.size() == 2) {
        for (auto c : branch) {
            if (s.nbr[c].size() != 3 || s.loops[c] || s.boundary[c]) return AdeTag::none;
            int leaves = 0;
            for (auto u : s.nbr[c])
                if (s.nbr[u].size() == 1 && end_kind(s, u) == End::plain) ++leaves;
            if (leaves < 2) return AdeTag::none;
        }
        for (std::size_t v = 0; v < s.n; ++v)
            if (s.loops[v] || s.boundary[v]) return AdeTag::none;
        return AdeTag::D_affine;
    }
    return AdeTag::none;
}

} // namespace

AdeTag classify_ade(const OrientedGraph& g) {
    if (!is_symmetric(g) || !is_connected(g) || g.num_vertices() == 0) return AdeTag::none;
    Eigen::MatrixXi A = adjacency(g);
    const std::size_t n = g.num_vertices();
    if (n == 1) return A(0, 0) == 2 && !g.is_boundary(0) ? AdeTag::point_double_loop : AdeTag::none;

    bool any_boundary = !g.boundary().empty();
    bool simple = true;
    Shape s{n, std::vector<std::vector<std::size_t>>(n), std::vector<int>(n, 0),
            std::vector<bool>(n, false)};
    std::size_t undirected_edges = 0;
    for (std::size_t v = 0; v < n; ++v) {
        s.loops[v] = A(v, v);
        s.boundary[v] = g.is_boundary(v);
        if (A(v, v) > 1) return AdeTag::none;
        for (std::size_t u = 0; u < n; ++u) {
            if (u == v || A(v, u) == 0) continue;
            if (A(v, u) > 1) simple = false;
            s.nbr[v].push_back(u);
            if (u > v) ++undirected_edges;
        }
    }
    if (!simple) {
        if (n == 2 && A(0, 1) == 2 && A(0, 0) == 0 && A(1, 1) == 0 && !any_boundary)
            return AdeTag::A_cycle;
        return AdeTag::none;
    }
    if (undirected_edges == n) {
        // Single cycle: every vertex of degree 2, no loops.
        for (std::size_t v = 0; v < n; ++v)
            if (s.nbr[v].size() != 2 || s.loops[v] || s.boundary[v]) return AdeTag::none;
        return n >= 3 ? AdeTag::A_cycle : AdeTag::none;
    }
    if (undirected_edges != n - 1) return AdeTag::none;
    return classify_tree(s);
}

bool is_coideal_type(const OrientedGraph& g, double tol) {
    if (!is_connected(g)) throw std::invalid_argument("is_coideal_type: graph is disconnected");
    if (!g.boundary().empty()) return is_infinite_type(classify_ade(g));
    return std::abs(graph_norm(g, tol * 1e-2) - 2.0) <= tol;
}

} // namespace qhs
