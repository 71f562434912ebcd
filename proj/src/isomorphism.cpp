#include "qhs/isomorphism.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

namespace qhs {

namespace {

using Multiset = std::vector<double>;  // sorted descending

bool same(const Multiset& a, const Multiset& b, double tol) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > tol * std::max(1.0, std::abs(a[i]))) return false;
    return true;
}

struct Weighted {
    const OrientedGraph* g;
    std::map<std::pair<std::size_t, std::size_t>, Multiset> blocks;
    std::vector<Multiset> out, in;

    Weighted(const OrientedGraph& graph, const Cost& w) : g(&graph) {
        out.resize(g->num_vertices());
        in.resize(g->num_vertices());
        for (std::size_t e = 0; e < g->num_edges(); ++e) {
            blocks[{g->src(e), g->dst(e)}].push_back(w[e]);
            out[g->src(e)].push_back(w[e]);
            in[g->dst(e)].push_back(w[e]);
        }
        auto desc = [](Multiset& m) { std::sort(m.begin(), m.end(), std::greater<>()); };
        for (auto& [k, m] : blocks) desc(m);
        for (auto& m : out) desc(m);
        for (auto& m : in) desc(m);
    }

    const Multiset& block(std::size_t v, std::size_t w) const {
        static const Multiset empty;
        auto it = blocks.find({v, w});
        return it == blocks.end() ? empty : it->second;
    }
};

} // namespace

void for_each_weighted_isomorphism(const OrientedGraph& g1, const Cost& w1,
                                   const OrientedGraph& g2, const Cost& w2, double tol,
                                   const std::function<bool(const std::vector<std::size_t>&)>& visit) {
    const std::size_t n = g1.num_vertices();
    if (n != g2.num_vertices() || g1.num_edges() != g2.num_edges()) return;
    Weighted a(g1, w1), b(g2, w2);

    std::vector<std::vector<std::size_t>> cand(n);
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t u = 0; u < n; ++u) {
            if (g1.is_boundary(v) != g2.is_boundary(u)) continue;
            if (!same(a.out[v], b.out[u], tol) || !same(a.in[v], b.in[u], tol)) continue;
            if (!same(a.block(v, v), b.block(u, u), tol)) continue;
            cand[v].push_back(u);
        }
        if (cand[v].empty()) return;
    }

    // Breadth-first order keeps assigned vertices adjacent, which prunes early.
    std::vector<std::size_t> order;
    std::vector<char> placed(n, 0);
    for (std::size_t root = 0; root < n; ++root) {
        if (placed[root]) continue;
        std::deque<std::size_t> q{root};
        placed[root] = 1;
        while (!q.empty()) {
            auto v = q.front();
            q.pop_front();
            order.push_back(v);
            auto push = [&](std::size_t u) {
                if (!placed[u]) {
                    placed[u] = 1;
                    q.push_back(u);
                }
            };
            for (auto e : g1.out_edges(v)) push(g1.dst(e));
            for (auto e : g1.in_edges(v)) push(g1.src(e));
        }
    }

    std::vector<std::size_t> phi(n, 0);
    std::vector<char> used(n, 0);
    bool stop = false;
    std::function<void(std::size_t)> extend = [&](std::size_t depth) {
        if (stop) return;
        if (depth == n) {
            stop = visit(phi);
            return;
        }
        std::size_t v = order[depth];
        for (auto u : cand[v]) {
            if (used[u]) continue;
            bool ok = true;
            for (std::size_t d = 0; d < depth && ok; ++d) {
                std::size_t x = order[d];
                ok = same(a.block(v, x), b.block(u, phi[x]), tol) &&
                     same(a.block(x, v), b.block(phi[x], u), tol);
            }
            if (!ok) continue;
            used[u] = 1;
            phi[v] = u;
            extend(depth + 1);
            used[u] = 0;
            if (stop) return;
        }
    };
    extend(0);
}

std::optional<std::vector<std::size_t>> weighted_isomorphism(const OrientedGraph& g1,
                                                             const Cost& w1,
                                                             const OrientedGraph& g2,
                                                             const Cost& w2, double tol) {
    std::optional<std::vector<std::size_t>> found;
    for_each_weighted_isomorphism(g1, w1, g2, w2, tol, [&](const std::vector<std::size_t>& phi) {
        found = phi;
        return true;
    });
    return found;
}

} // namespace qhs
