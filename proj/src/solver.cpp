#include "qhs/solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include <omp.h>

namespace qhs {

std::vector<Involution> admissible_involutions(const OrientedGraph& g, double T) {
    const std::size_t n = g.num_vertices();
    Involution base;
    base.pair.assign(g.num_edges(), 0);
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t u = v + 1; u < n; ++u) {
            auto a = g.edges_between(v, u);
            auto b = g.edges_between(u, v);
            if (a.size() != b.size()) return {};
            for (std::size_t i = 0; i < a.size(); ++i) {
                base.pair[a[i]] = b[i];
                base.pair[b[i]] = a[i];
            }
        }
    }
    // Per-vertex fixed-loop counts.
    std::vector<std::vector<std::size_t>> loops(n);
    std::vector<std::vector<std::size_t>> choices(n);
    for (std::size_t v = 0; v < n; ++v) {
        loops[v] = g.edges_between(v, v);
        std::size_t L = loops[v].size();
        if (T > 0) {
            if (L % 2 == 1) return {};
            choices[v] = {0};
        } else {
            for (std::size_t f = L % 2; f <= L; f += 2) choices[v].push_back(f);
        }
    }
    std::vector<Involution> out;
    std::vector<std::size_t> pick(n, 0);
    while (true) {
        Involution inv = base;
        for (std::size_t v = 0; v < n; ++v) {
            std::size_t f = choices[v][pick[v]];
            const auto& l = loops[v];
            for (std::size_t i = 0; i < f; ++i) inv.pair[l[i]] = l[i];
            for (std::size_t i = f; i + 1 < l.size(); i += 2) {
                inv.pair[l[i]] = l[i + 1];
                inv.pair[l[i + 1]] = l[i];
            }
        }
        out.push_back(std::move(inv));
        std::size_t v = 0;
        while (v < n && ++pick[v] == choices[v].size()) pick[v++] = 0;
        if (v == n) break;
    }
    return out;
}

Cost canonical_cost(const OrientedGraph& g, const Cost& w) {
    Cost c = w;
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        for (std::size_t u = 0; u < g.num_vertices(); ++u) {
            auto es = g.edges_between(v, u);
            if (es.size() < 2) continue;
            std::vector<double> vals;
            for (auto e : es) vals.push_back(w[e]);
            std::sort(vals.begin(), vals.end());
            for (std::size_t i = 0; i < es.size(); ++i) c[es[i]] = vals[i];
        }
    }
    return c;
}

namespace {

// Per-branch system: one log-variable per non-fixed pair, constraints at the
// non-boundary vertices.
struct Branch {
    const OrientedGraph* g;
    Involution inv;
    std::vector<std::size_t> lead;  // lead[p] is the smaller edge of pair p
    std::vector<std::size_t> rows;  // constrained vertices
    double absT;

    Branch(const OrientedGraph& graph, Involution i, double T) : g(&graph), inv(std::move(i)) {
        absT = std::abs(T);
        for (std::size_t e = 0; e < g->num_edges(); ++e)
            if (inv.pair[e] > e) lead.push_back(e);
        for (std::size_t v = 0; v < g->num_vertices(); ++v)
            if (!g->is_boundary(v)) rows.push_back(v);
    }

    Cost weights(const Eigen::VectorXd& y) const {
        Cost w(g->num_edges(), 1.0);
        for (std::size_t p = 0; p < lead.size(); ++p) {
            double yp = std::clamp(y[p], -50.0, 50.0);
            w[lead[p]] = std::exp(yp);
            w[inv.pair[lead[p]]] = std::exp(-yp);
        }
        return w;
    }

    Eigen::VectorXd residual(const Cost& w) const {
        Eigen::VectorXd r(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) r[i] = source_cost(*g, w, rows[i]) - absT;
        return r;
    }

    Eigen::MatrixXd jacobian(const Cost& w) const {
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(rows.size(), lead.size());
        std::vector<long> row_of(g->num_vertices(), -1);
        for (std::size_t i = 0; i < rows.size(); ++i) row_of[rows[i]] = static_cast<long>(i);
        for (std::size_t p = 0; p < lead.size(); ++p) {
            std::size_t e = lead[p], f = inv.pair[e];
            if (row_of[g->src(e)] >= 0) J(row_of[g->src(e)], p) += w[e];
            if (row_of[g->src(f)] >= 0) J(row_of[g->src(f)], p) -= w[f];
        }
        return J;
    }
};

struct Attempt {
    bool converged = false;
    Cost cost;
    bool rank_deficient = false;
};

// Levenberg-Marquardt on the log-weights, then Gauss-Newton polishing. The
// residual is driven to rounding level: at a rigid point it is quadratic in
// the weight error.
Attempt run_start(const Branch& b, Eigen::VectorXd y, const SolveOptions& opt) {
    Attempt a;
    const Eigen::Index nv = static_cast<Eigen::Index>(b.lead.size());
    Cost w = b.weights(y);
    Eigen::VectorXd r = b.residual(w);
    double mu = 1e-3;
    for (int it = 0; it < opt.max_iterations && nv > 0; ++it) {
        if (r.size() == 0 || r.lpNorm<Eigen::Infinity>() <= 1e-15 * std::max(1.0, b.absT)) break;
        Eigen::MatrixXd J = b.jacobian(w);
        Eigen::MatrixXd H = J.transpose() * J;
        Eigen::VectorXd grad = J.transpose() * r;
        bool improved = false;
        for (int tries = 0; tries < 30; ++tries) {
            Eigen::MatrixXd Hd = H;
            Hd.diagonal().array() += mu * (1.0 + H.diagonal().array());
            Eigen::VectorXd step = Hd.ldlt().solve(-grad);
            Eigen::VectorXd y2 = y + step;
            Cost w2 = b.weights(y2);
            Eigen::VectorXd r2 = b.residual(w2);
            if (r2.squaredNorm() < r.squaredNorm()) {
                y = y2;
                w = std::move(w2);
                r = std::move(r2);
                mu = std::max(mu * 0.3, 1e-12);
                improved = true;
                break;
            }
            mu *= 10.0;
        }
        if (!improved) break;
    }
    for (int k = 0; k < 80 && nv > 0 && r.size() > 0; ++k) {
        Eigen::MatrixXd J = b.jacobian(w);
        Eigen::VectorXd step = J.completeOrthogonalDecomposition().solve(-r);
        Eigen::VectorXd y2 = y + step;
        Cost w2 = b.weights(y2);
        Eigen::VectorXd r2 = b.residual(w2);
        if (r2.squaredNorm() >= r.squaredNorm()) break;
        y = y2;
        w = std::move(w2);
        r = std::move(r2);
    }
    a.converged = r.size() == 0 || r.lpNorm<Eigen::Infinity>() <= opt.tol;
    if (a.converged) {
        a.cost = std::move(w);
        if (nv > 0) {
            Eigen::MatrixXd J = b.jacobian(a.cost);
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
            const auto& s = svd.singularValues();
            double smax = s.size() ? s[0] : 0.0;
            Eigen::Index rank = 0;
            for (Eigen::Index i = 0; i < s.size(); ++i)
                if (s[i] > 1e-8 * std::max(1.0, smax)) ++rank;
            a.rank_deficient = rank < nv;
        }
    }
    return a;
}

Eigen::VectorXd start_point(std::size_t nv, std::size_t branch, int start, double absT,
                            std::uint64_t seed) {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nv));
    if (start == 0) return y;
    std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ULL * (branch * 1009 + static_cast<std::size_t>(start))));
    double L = std::log(absT);
    std::uniform_real_distribution<double> U(-L, L);
    for (auto& v : y) v = U(rng);
    return y;
}

SolveResult collect(const OrientedGraph& g, const std::vector<Branch>& branches,
                    const std::vector<Attempt>& attempts, const SolveOptions& opt) {
    SolveResult res;
    res.branches = branches.size();
    std::vector<Cost> seen;
    bool deficient = false;
    for (std::size_t i = 0; i < attempts.size(); ++i) {
        const Attempt& a = attempts[i];
        if (!a.converged) continue;
        res.feasible = true;
        deficient = deficient || a.rank_deficient;
        Cost c = canonical_cost(g, a.cost);
        bool fresh = std::none_of(seen.begin(), seen.end(), [&](const Cost& s) {
            double d = 0.0;
            for (std::size_t e = 0; e < c.size(); ++e) d = std::max(d, std::abs(c[e] - s[e]));
            return d <= 10.0 * opt.tol;
        });
        if (!fresh) continue;
        seen.push_back(c);
        if (res.solutions.size() < opt.max_solutions)
            res.solutions.push_back({a.cost, branches[i / static_cast<std::size_t>(opt.starts)].inv});
    }
    res.family = deficient && seen.size() >= 2;
    return res;
}

SolveResult solve_impl(const OrientedGraph& g, const DeformationParameter& dp,
                       const SolveOptions& opt, bool parallel) {
    std::vector<Branch> branches;
    for (auto& inv : admissible_involutions(g, dp.T())) branches.emplace_back(g, std::move(inv), dp.T());
    const std::size_t starts = static_cast<std::size_t>(std::max(1, opt.starts));
    SolveOptions o = opt;
    o.starts = static_cast<int>(starts);
    const std::size_t total = branches.size() * starts;
    std::vector<Attempt> attempts(total);
    auto work = [&](std::size_t k) {
        const Branch& b = branches[k / starts];
        auto y = start_point(b.lead.size(), k / starts, static_cast<int>(k % starts), b.absT, opt.seed);
        attempts[k] = run_start(b, std::move(y), o);
    };
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long k = 0; k < static_cast<long>(total); ++k) work(static_cast<std::size_t>(k));
    } else {
        for (std::size_t k = 0; k < total; ++k) work(k);
    }
    // At |T| = ||Gamma|| the solution is unique and equal to the Perron cost, but
    // the residual is only quadratic in the weight error there, so iterates stop
    // near 1e-6 of it.
    if (g.boundary().empty() && is_connected(g) && is_symmetric(g) &&
        std::abs(graph_norm(g) - dp.abs_T()) <= opt.tol) {
        if (auto pc = perron_cost(g, dp.T(), opt.tol))
            for (auto& a : attempts)
                if (a.converged) a.cost = *pc;
    }
    return collect(g, branches, attempts, o);
}

} // namespace

SolveResult solve_cost(const OrientedGraph& g, const DeformationParameter& dp,
                       const SolveOptions& opt) {
    return solve_impl(g, dp, opt, true);
}

SolveResult solve_cost_serial(const OrientedGraph& g, const DeformationParameter& dp,
                              const SolveOptions& opt) {
    return solve_impl(g, dp, opt, false);
}

} // namespace qhs
