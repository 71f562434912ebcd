#include "qhs/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qhs/isomorphism.hpp"

namespace qhs {

std::size_t FundamentalSolution::dim(std::size_t v, std::size_t w) const {
    auto it = jmaps.find({v, w});
    return it == jmaps.end() ? 0 : static_cast<std::size_t>(it->second.cols());
}

const CMatrix& FundamentalSolution::block(std::size_t v, std::size_t w) const {
    static const CMatrix empty;
    auto it = jmaps.find({v, w});
    return it == jmaps.end() ? empty : it->second;
}

std::size_t FundamentalSolution::index_of(const std::string& v) const {
    auto it = std::find(index.begin(), index.end(), v);
    if (it == index.end()) throw std::invalid_argument("unknown index: " + v);
    return static_cast<std::size_t>(it - index.begin());
}

std::vector<int> default_rho(const Involution& inv, int q_sign) {
    std::vector<int> rho(inv.pair.size(), 1);
    if (q_sign > 0)
        for (std::size_t e = 0; e < inv.pair.size(); ++e)
            if (inv.pair[e] < e) rho[e] = -1;
    return rho;
}

FundamentalSolution build_solution(const OrientedGraph& g, const Cost& w,
                                   const DeformationParameter& dp, const std::vector<int>* rho,
                                   const Involution* inv) {
    validate_cost(g, w);
    Involution pairing;
    if (inv) {
        if (!is_valid_involution(g, *inv)) throw std::invalid_argument("invalid involution");
        pairing = *inv;
    } else {
        auto rep = verify_fair_balanced(g, w, dp);
        if (!rep.pass) {
            std::string why = "cost fails verification:";
            for (const auto& r : rep.reasons) why += " " + r;
            throw std::invalid_argument(why);
        }
        pairing = *rep.witness;
    }
    for (std::size_t e = 0; e < g.num_edges(); ++e)
        if (std::abs(w[e] * w[pairing.pair[e]] - 1.0) > 1e-9)
            throw std::invalid_argument("involution is not balanced at " + g.edges()[e].id);
    if (dp.sign() > 0)
        for (std::size_t e = 0; e < g.num_edges(); ++e)
            if (pairing.pair[e] == e)
                throw std::invalid_argument("fixed loop with q > 0 at " + g.edges()[e].id);

    std::vector<int> r = rho ? *rho : default_rho(pairing, dp.sign());
    if (r.size() != g.num_edges()) throw std::invalid_argument("rho has wrong length");
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        if (r[e] != 1 && r[e] != -1) throw std::invalid_argument("rho must be +-1");
        if (r[e] * r[pairing.pair[e]] != -dp.sign())
            throw std::invalid_argument("rho(e) rho(ebar) != -sgn(q) at " + g.edges()[e].id);
    }

    FundamentalSolution s;
    s.index = g.vertices();
    s.q_sign = dp.sign();
    for (std::size_t v = 0; v < g.num_vertices(); ++v) s.boundary.push_back(g.is_boundary(v));

    // Position of each edge inside its parallel set.
    std::vector<std::size_t> slot(g.num_edges(), 0);
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        for (std::size_t u = 0; u < g.num_vertices(); ++u) {
            auto es = g.edges_between(v, u);
            if (es.empty()) continue;
            std::vector<std::string> labels;
            for (std::size_t i = 0; i < es.size(); ++i) {
                slot[es[i]] = i;
                labels.push_back(g.edges()[es[i]].id);
            }
            s.basis[{v, u}] = std::move(labels);
        }
    }
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        std::size_t v = g.src(e), u = g.dst(e);
        auto& M = s.jmaps[{v, u}];
        if (M.size() == 0) {
            auto n = static_cast<Eigen::Index>(g.edges_between(v, u).size());
            M = CMatrix::Zero(n, n);
        }
        M(static_cast<Eigen::Index>(slot[pairing.pair[e]]), static_cast<Eigen::Index>(slot[e])) =
            static_cast<double>(r[e]) * std::sqrt(w[e]);
    }
    return s;
}

SolutionReport verify_solution(const FundamentalSolution& s, const DeformationParameter& dp,
                               double tol) {
    SolutionReport rep;
    const double sgn = dp.sign();
    if (s.q_sign != dp.sign()) rep.reasons.push_back("q_sign");
    for (const auto& [key, M] : s.jmaps) {
        auto [v, w] = key;
        const CMatrix& Mt = s.block(w, v);
        if (M.rows() != M.cols() || Mt.rows() != M.rows() || Mt.cols() != M.rows()) {
            rep.reasons.push_back("dimension:" + s.index[v] + "," + s.index[w]);
            rep.composition_residual = std::max(rep.composition_residual, 1e300);
            continue;
        }
        CMatrix P = Mt * M.conjugate();
        P.diagonal().array() += sgn;
        double res = P.cwiseAbs().maxCoeff();
        rep.composition_residual = std::max(rep.composition_residual, res);
        if (res > tol) rep.reasons.push_back("composition:" + s.index[v] + "," + s.index[w]);
    }
    rep.trace_residual.assign(s.size(), 0.0);
    for (std::size_t v = 0; v < s.size(); ++v) {
        if (s.boundary[v]) continue;
        double t = 0.0;
        for (std::size_t w = 0; w < s.size(); ++w) t += s.block(v, w).squaredNorm();
        rep.trace_residual[v] = std::abs(t - dp.abs_T());
        if (rep.trace_residual[v] > tol) rep.reasons.push_back("trace:" + s.index[v]);
    }
    rep.pass = rep.reasons.empty();
    return rep;
}

namespace {

std::vector<double> block_costs(const CMatrix& M) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(M.adjoint() * M, Eigen::EigenvaluesOnly);
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

SolutionGraph to_graph(const FundamentalSolution& s) {
    std::vector<Edge> edges;
    Cost cost;
    for (std::size_t v = 0; v < s.size(); ++v) {
        for (std::size_t w = 0; w < s.size(); ++w) {
            const CMatrix& M = s.block(v, w);
            if (M.size() == 0) continue;
            auto ev = block_costs(M);
            for (std::size_t k = 0; k < ev.size(); ++k) {
                edges.push_back({edge_id(s.index[v], s.index[w], static_cast<int>(k)), s.index[v],
                                 s.index[w]});
                cost.push_back(ev[k]);
            }
        }
    }
    std::set<std::string> boundary;
    for (std::size_t v = 0; v < s.size(); ++v)
        if (s.boundary[v]) boundary.insert(s.index[v]);
    return {OrientedGraph(s.index, std::move(edges), std::move(boundary)), std::move(cost)};
}

} // namespace

SolutionGraph solution_to_graph(const FundamentalSolution& s, const DeformationParameter& dp,
                                double tol) {
    auto rep = verify_solution(s, dp, tol);
    if (!rep.pass) throw std::invalid_argument("solution fails verification");
    return to_graph(s);
}

std::optional<CanonicalForm> canonical_antiunitary(const CMatrix& M, int q_sign, double tol) {
    const Eigen::Index n = M.rows();
    if (M.cols() != n) return std::nullopt;
    auto J = [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd { return M * x.conjugate(); };
    // J^* J acts linearly as x -> M^T conj(M) x.
    Eigen::SelfAdjointEigenSolver<CMatrix> es(M.transpose() * M.conjugate());
    const auto& lam = es.eigenvalues();
    const CMatrix& B = es.eigenvectors();

    std::vector<Eigen::VectorXcd> cols;
    std::vector<std::pair<std::size_t, std::size_t>> partner;  // (b, c) index pairs
    std::vector<double> scale;
    std::vector<std::size_t> fixed;

    // Clusters in descending order of eigenvalue.
    Eigen::Index hi = n - 1;
    while (hi >= 0) {
        Eigen::Index lo = hi;
        while (lo > 0 && std::abs(lam[lo - 1] - lam[hi]) <= tol * std::max(1.0, lam[hi])) --lo;
        double l = lam.segment(lo, hi - lo + 1).mean();
        if (l > 1.0 + tol) {
            for (Eigen::Index i = lo; i <= hi; ++i) {
                Eigen::VectorXcd b = B.col(i);
                Eigen::VectorXcd c = J(b) / std::sqrt(l);
                partner.push_back({cols.size(), cols.size() + 1});
                scale.push_back(std::sqrt(l));
                cols.push_back(b);
                cols.push_back(c);
            }
        } else if (l >= 1.0 - tol) {
            std::vector<Eigen::VectorXcd> found;
            const Eigen::Index want = hi - lo + 1;
            auto residual = [&](Eigen::VectorXcd y) {
                for (const auto& e : found) y -= e.dot(y) * e;
                return y;
            };
            for (Eigen::Index i = lo; i <= hi && static_cast<Eigen::Index>(found.size()) < want; ++i) {
                for (int rep = 0; rep < 2 && static_cast<Eigen::Index>(found.size()) < want; ++rep) {
                    Eigen::VectorXcd y = residual(B.col(i));
                    if (y.norm() < 1e-6) break;
                    y.normalize();
                    if (q_sign < 0) {
                        // J^2 = 1: real vectors y + Jy or i(y - Jy) are fixed.
                        Eigen::VectorXcd z = y + J(y);
                        if (z.norm() < 0.5) z = Complex(0, 1) * (y - J(y));
                        z = residual(z);
                        z.normalize();
                        fixed.push_back(cols.size());
                        cols.push_back(z);
                        found.push_back(z);
                    } else {
                        Eigen::VectorXcd c = residual(J(y));
                        c.normalize();
                        partner.push_back({cols.size(), cols.size() + 1});
                        scale.push_back(1.0);
                        cols.push_back(y);
                        cols.push_back(c);
                        found.push_back(y);
                        found.push_back(c);
                    }
                }
            }
            if (static_cast<Eigen::Index>(found.size()) != want) return std::nullopt;
        }
        hi = lo - 1;
    }
    if (static_cast<Eigen::Index>(cols.size()) != n) return std::nullopt;

    CanonicalForm f;
    f.V.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) f.V.col(k) = cols[static_cast<std::size_t>(k)];
    f.C = CMatrix::Zero(n, n);
    const double s = q_sign;
    for (std::size_t p = 0; p < partner.size(); ++p) {
        auto [b, c] = partner[p];
        auto bi = static_cast<Eigen::Index>(b), ci = static_cast<Eigen::Index>(c);
        f.C(ci, bi) = scale[p];
        f.C(bi, ci) = -s / scale[p];
    }
    for (auto k : fixed) f.C(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1.0;
    if ((f.V * f.C * f.V.transpose() - M).cwiseAbs().maxCoeff() > 1e3 * tol) return std::nullopt;
    if ((f.V.adjoint() * f.V - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() > 1e3 * tol)
        return std::nullopt;
    return f;
}

namespace {

double mismatch(const CMatrix& A, const CMatrix& B) {
    if (A.rows() != B.rows() || A.cols() != B.cols()) return 1e300;
    return A.size() == 0 ? 0.0 : (A - B).cwiseAbs().maxCoeff();
}

// Unitaries for one isomorphism phi, or nullopt if some block fails.
std::optional<EquivalenceWitness> witness_for(const FundamentalSolution& s1,
                                              const FundamentalSolution& s2,
                                              const std::vector<std::size_t>& phi, double tol) {
    EquivalenceWitness wit;
    wit.status = EquivalenceStatus::equivalent;
    wit.phi = phi;
    for (const auto& [key, M1] : s1.jmaps) {
        auto [v, w] = key;
        if (v > w) continue;
        const CMatrix& M2 = s2.block(phi[v], phi[w]);
        if (M2.rows() != M1.rows()) return std::nullopt;
        if (v == w) {
            auto c1 = canonical_antiunitary(M1, s1.q_sign, tol);
            auto c2 = canonical_antiunitary(M2, s2.q_sign, tol);
            if (!c1 || !c2 || mismatch(c1->C, c2->C) > 1e3 * tol) return std::nullopt;
            wit.unitary[key] = c1->V * c2->V.adjoint();
        } else {
            Eigen::JacobiSVD<CMatrix> a(M1, Eigen::ComputeFullU | Eigen::ComputeFullV);
            Eigen::JacobiSVD<CMatrix> b(M2, Eigen::ComputeFullU | Eigen::ComputeFullV);
            if ((a.singularValues() - b.singularValues()).cwiseAbs().maxCoeff() > 1e3 * tol)
                return std::nullopt;
            wit.unitary[{w, v}] = a.matrixU() * b.matrixU().adjoint();
            wit.unitary[key] = a.matrixV().conjugate() * b.matrixV().transpose();
        }
    }
    double res = 0.0;
    for (const auto& [key, M1] : s1.jmaps) {
        auto [v, w] = key;
        const CMatrix& Uvw = wit.unitary.at(key);
        const CMatrix& Uwv = wit.unitary.at({w, v});
        res = std::max(res, mismatch(M1, Uwv * s2.block(phi[v], phi[w]) * Uvw.transpose()));
        res = std::max(res, mismatch(Uvw.adjoint() * Uvw, CMatrix::Identity(Uvw.rows(), Uvw.cols())));
    }
    wit.residual = res;
    if (res > tol) return std::nullopt;
    return wit;
}

} // namespace

EquivalenceWitness solutions_equivalent(const FundamentalSolution& s1,
                                        const FundamentalSolution& s2, double tol) {
    EquivalenceWitness out;
    if (s1.q_sign != s2.q_sign || s1.size() != s2.size()) return out;
    bool oversized = s1.size() > kEquivalenceMaxVertices;
    for (const auto* s : {&s1, &s2})
        for (const auto& [k, M] : s->jmaps)
            oversized = oversized || static_cast<std::size_t>(M.rows()) > kEquivalenceMaxBlock;
    if (oversized) {
        out.status = EquivalenceStatus::undecided;
        return out;
    }
    auto g1 = to_graph(s1), g2 = to_graph(s2);
    for_each_weighted_isomorphism(g1.graph, g1.cost, g2.graph, g2.cost, 1e-7,
                                  [&](const std::vector<std::size_t>& phi) {
                                      auto w = witness_for(s1, s2, phi, tol);
                                      if (w) out = std::move(*w);
                                      return w.has_value();
                                  });
    return out;
}

} // namespace qhs
