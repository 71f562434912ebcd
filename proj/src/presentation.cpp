#include "qhs/presentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "qhs/catalog.hpp"

namespace qhs {

namespace {

struct FlatEdge {
    std::string id;
    std::size_t src, dst, slot;
};

std::vector<FlatEdge> flat_edges(const FundamentalSolution& s) {
    std::vector<FlatEdge> out;
    for (const auto& [key, M] : s.jmaps) {
        auto it = s.basis.find(key);
        for (Eigen::Index k = 0; k < M.cols(); ++k) {
            std::string id = it != s.basis.end() ? it->second[static_cast<std::size_t>(k)]
                                                 : edge_id(s.index[key.first], s.index[key.second],
                                                           static_cast<int>(k));
            out.push_back({id, key.first, key.second, static_cast<std::size_t>(k)});
        }
    }
    return out;
}

std::string term(const std::string& edge, int col) { return edge + ":" + std::to_string(col); }

} // namespace

std::size_t Presentation::count(const std::string& kind) const {
    return static_cast<std::size_t>(std::count_if(relations.begin(), relations.end(),
                                                  [&](const Relation& r) { return r.kind == kind; }));
}

Eigen::Matrix2d f_matrix(const DeformationParameter& dp) {
    const double a = std::abs(dp.q());
    Eigen::Matrix2d F;
    F << 0.0, std::sqrt(a), -dp.sign() / std::sqrt(a), 0.0;
    return F;
}

std::map<BlockKey, CMatrix> e_matrices(const FundamentalSolution& s,
                                       const DeformationParameter& dp) {
    std::map<BlockKey, CMatrix> E;
    for (const auto& [key, M] : s.jmaps) E[key] = -static_cast<double>(dp.sign()) * M.conjugate();
    return E;
}

Presentation emit_presentation(const FundamentalSolution& s, const DeformationParameter& dp) {
    auto rep = verify_solution(s, dp);
    if (!rep.pass) throw std::invalid_argument("solution fails verification");
    Presentation p;
    p.index = s.index;
    p.q_sign = dp.sign();
    p.projections = s.index;
    p.F = f_matrix(dp);
    p.E = e_matrices(s, dp);
    const auto edges = flat_edges(s);
    for (const auto& e : edges)
        for (int j = 1; j <= 2; ++j) p.generators.push_back({e.id, j});

    for (std::size_t v = 0; v < s.size(); ++v)
        for (const auto& e : edges)
            for (std::size_t w = 0; w < s.size(); ++w)
                p.relations.push_back({"Eq1",
                                       {s.index[v], e.id, s.index[w]},
                                       {e.id},
                                       {Complex(v == e.src && w == e.dst ? 1.0 : 0.0)},
                                       0.0});

    for (std::size_t w = 0; w < s.size(); ++w) {
        if (s.boundary[w]) continue;
        for (int j = 1; j <= 2; ++j) {
            for (int k = 1; k <= 2; ++k) {
                Relation r{"Eq2", {s.index[w], std::to_string(j), std::to_string(k)}, {}, {},
                           Complex(j == k ? 1.0 : 0.0)};
                for (const auto& e : edges) {
                    if (e.dst != w) continue;
                    r.terms.push_back(e.id);
                    r.coeffs.push_back(1.0);
                }
                p.relations.push_back(std::move(r));
            }
        }
    }

    for (std::size_t a = 0; a < edges.size(); ++a)
        for (std::size_t b = 0; b < edges.size(); ++b)
            if (edges[a].src == edges[b].src)
                p.relations.push_back({"Eq2p",
                                       {edges[a].id, edges[b].id},
                                       {term(edges[a].id, 1), term(edges[a].id, 2)},
                                       {1.0, 1.0},
                                       Complex(a == b ? 1.0 : 0.0)});

    for (const auto& e : edges) {
        const CMatrix& Ewv = p.E.at({e.dst, e.src});
        for (int j = 1; j <= 2; ++j) {
            Relation r{"Eq3", {e.id, std::to_string(j)}, {}, {}, 0.0};
            for (const auto& k : edges) {
                if (k.src != e.dst || k.dst != e.src) continue;
                Complex c = Ewv(static_cast<Eigen::Index>(e.slot), static_cast<Eigen::Index>(k.slot));
                for (int l = 1; l <= 2; ++l) {
                    r.terms.push_back(term(k.id, l));
                    r.coeffs.push_back(c * p.F(l - 1, j - 1));
                }
            }
            p.relations.push_back(std::move(r));
        }
    }
    return p;
}

PresentationCheck check_presentation(const Presentation& p, const DeformationParameter& dp,
                                     double tol) {
    PresentationCheck c;
    for (const auto& [key, E] : p.E) {
        auto it = p.E.find({key.second, key.first});
        if (it == p.E.end() || it->second.rows() != E.cols()) {
            c.e_identity_residual = std::numeric_limits<double>::infinity();
            continue;
        }
        CMatrix P = E.conjugate() * it->second;
        P.diagonal().array() += static_cast<double>(dp.sign());
        c.e_identity_residual = std::max(c.e_identity_residual, P.cwiseAbs().maxCoeff());
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(p.F.transpose() * p.F);
    const double a = std::abs(dp.q());
    c.f_spectrum_residual = std::max(std::abs(es.eigenvalues()[0] - std::min(a, 1.0 / a)),
                                     std::abs(es.eigenvalues()[1] - std::max(a, 1.0 / a)));

    std::set<std::string> gens, edges, proj(p.projections.begin(), p.projections.end());
    for (const auto& g : p.generators) {
        gens.insert(term(g.edge, g.col));
        edges.insert(g.edge);
    }
    for (const auto& r : p.relations) {
        for (const auto& t : r.terms)
            if (!gens.count(t) && !edges.count(t)) c.references_ok = false;
        if (r.terms.size() != r.coeffs.size() && r.kind != "Eq1") c.references_ok = false;
        if ((r.kind == "Eq1" && (!proj.count(r.indices[0]) || !edges.count(r.indices[1]) ||
                                 !proj.count(r.indices[2]))) ||
            (r.kind == "Eq2" && !proj.count(r.indices[0])) ||
            ((r.kind == "Eq2p") && (!edges.count(r.indices[0]) || !edges.count(r.indices[1]))) ||
            (r.kind == "Eq3" && !edges.count(r.indices[0])))
            c.references_ok = false;
    }
    c.pass = c.e_identity_residual <= tol && c.f_spectrum_residual <= tol && c.references_ok;
    return c;
}

QuadraticRelation simplified_relation(const Presentation& p, const std::string& v,
                                      const std::string& w) {
    auto find = [&](const std::string& x) {
        auto it = std::find(p.index.begin(), p.index.end(), x);
        if (it == p.index.end()) throw std::invalid_argument("unknown vertex: " + x);
        return static_cast<std::size_t>(it - p.index.begin());
    };
    std::size_t vi = find(v), wi = find(w);
    auto it = p.E.find({vi, wi});
    if (it == p.E.end() || it->second.rows() != 1 || it->second.cols() != 1)
        throw std::invalid_argument("simplified_relation needs 1x1 blocks");
    // z^(wv)_j^* = E^(vw) sum_l F_lj z^(vw)_l, so
    // sum_j z^(wv)_j z^(wv)_j^* = |E|^2 sum_{a,b} (sum_j F_aj F_bj) z_a^* z_b.
    const double e2 = std::norm(it->second(0, 0));
    QuadraticRelation r;
    r.G = (p.F * p.F.transpose()).cast<Complex>();
    r.rhs = 1.0 / e2;
    return r;
}

PodlesParameters podles_parameters(const DeformationParameter& dp, double x, int window) {
    const double a = std::abs(dp.q());
    if (a == 1.0) throw std::invalid_argument("podles_parameters requires |q| < 1");
    PodlesParameters p;
    if (std::isinf(x)) {
        p.c = 0.0;
        p.a = 1.0 / a;
    } else {
        p.c = std::pow(std::pow(a, x + 1) - std::pow(a, -x - 1), -2.0);
        p.a = (std::pow(a, x + 1) + std::pow(a, -x - 1)) / (std::pow(a, x) + std::pow(a, -x));
    }
    for (int m = -window; m < window; ++m) p.weights.push_back({m, podles_weight(dp.q(), x, m)});
    return p;
}

namespace {

struct ModelIndex {
    std::map<std::string, std::size_t> edge;  // edge id -> flat position
    std::vector<FlatEdge> edges;
};

ModelIndex model_index(const FundamentalSolution& s) {
    ModelIndex mi;
    mi.edges = flat_edges(s);
    for (std::size_t i = 0; i < mi.edges.size(); ++i) mi.edge[mi.edges[i].id] = i;
    return mi;
}

std::pair<std::size_t, int> split_term(const ModelIndex& mi, const std::string& t) {
    auto pos = t.rfind(':');
    return {mi.edge.at(t.substr(0, pos)), std::stoi(t.substr(pos + 1))};
}

// Residuals of every emitted relation in the scalar model, as complex numbers.
std::vector<Complex> residuals(const Presentation& p, const ModelIndex& mi,
                               const std::vector<Eigen::Vector2cd>& c) {
    std::vector<Complex> out;
    for (const auto& r : p.relations) {
        if (r.kind == "Eq2") {
            int j = std::stoi(r.indices[1]) - 1, k = std::stoi(r.indices[2]) - 1;
            Complex sum = 0.0;
            for (std::size_t t = 0; t < r.terms.size(); ++t) {
                const auto& z = c[mi.edge.at(r.terms[t])];
                sum += r.coeffs[t] * std::conj(z[j]) * z[k];
            }
            out.push_back(sum - r.rhs);
        } else if (r.kind == "Eq2p") {
            std::size_t i = mi.edge.at(r.indices[0]), k = mi.edge.at(r.indices[1]);
            Complex sum = 0.0;
            if (mi.edges[i].dst == mi.edges[k].dst)
                sum = c[i][0] * std::conj(c[k][0]) + c[i][1] * std::conj(c[k][1]);
            out.push_back(sum - r.rhs);
        } else if (r.kind == "Eq3") {
            std::size_t i = mi.edge.at(r.indices[0]);
            int j = std::stoi(r.indices[1]) - 1;
            Complex sum = 0.0;
            for (std::size_t t = 0; t < r.terms.size(); ++t) {
                auto [k, l] = split_term(mi, r.terms[t]);
                sum += r.coeffs[t] * c[k][l - 1];
            }
            out.push_back(std::conj(c[i][j]) - sum);
        }
    }
    return out;
}

} // namespace

double model_residual(const Presentation& p, const FundamentalSolution& s,
                      const std::map<std::string, Eigen::Vector2cd>& z) {
    auto mi = model_index(s);
    std::vector<Eigen::Vector2cd> c(mi.edges.size(), Eigen::Vector2cd::Zero());
    for (const auto& [id, v] : z) c.at(mi.edge.at(id)) = v;
    double worst = 0.0;
    for (auto r : residuals(p, mi, c)) worst = std::max(worst, std::abs(r));
    return worst;
}

MatrixModel matrix_model(const Presentation& p, const FundamentalSolution& s, int starts,
                         std::uint64_t seed) {
    auto mi = model_index(s);
    const std::size_t ne = mi.edges.size();
    const Eigen::Index nx = static_cast<Eigen::Index>(4 * ne);
    auto unpack = [&](const Eigen::VectorXd& x) {
        std::vector<Eigen::Vector2cd> c(ne);
        for (std::size_t e = 0; e < ne; ++e)
            for (int j = 0; j < 2; ++j) {
                auto b = static_cast<Eigen::Index>(4 * e + 2 * static_cast<std::size_t>(j));
                c[e][j] = Complex(x[b], x[b + 1]);
            }
        return c;
    };
    auto F = [&](const Eigen::VectorXd& x) {
        auto r = residuals(p, mi, unpack(x));
        Eigen::VectorXd out(static_cast<Eigen::Index>(2 * r.size()));
        for (std::size_t i = 0; i < r.size(); ++i) {
            out[static_cast<Eigen::Index>(2 * i)] = r[i].real();
            out[static_cast<Eigen::Index>(2 * i + 1)] = r[i].imag();
        }
        return out;
    };

    MatrixModel best;
    best.residual = std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N(0.0, 0.7);
    for (int st = 0; st < starts && !best.found; ++st) {
        Eigen::VectorXd x(nx);
        for (auto& v : x) v = N(rng);
        Eigen::VectorXd r = F(x);
        double mu = 1e-2;
        for (int it = 0; it < 400; ++it) {
            if (r.lpNorm<Eigen::Infinity>() < 1e-12) break;
            Eigen::MatrixXd J(r.size(), nx);
            for (Eigen::Index k = 0; k < nx; ++k) {
                Eigen::VectorXd xh = x;
                const double h = 1e-7;
                xh[k] += h;
                J.col(k) = (F(xh) - r) / h;
            }
            Eigen::MatrixXd H = J.transpose() * J;
            Eigen::VectorXd g = J.transpose() * r;
            bool improved = false;
            for (int t = 0; t < 20; ++t) {
                Eigen::MatrixXd Hd = H;
                Hd.diagonal().array() += mu;
                Eigen::VectorXd x2 = x + Hd.ldlt().solve(-g);
                Eigen::VectorXd r2 = F(x2);
                if (r2.squaredNorm() < r.squaredNorm()) {
                    x = x2;
                    r = r2;
                    mu = std::max(mu * 0.3, 1e-15);
                    improved = true;
                    break;
                }
                mu *= 10.0;
            }
            if (!improved) break;
        }
        double res = r.size() ? r.lpNorm<Eigen::Infinity>() : 0.0;
        if (res < best.residual) {
            best.residual = res;
            best.z.clear();
            auto c = unpack(x);
            for (std::size_t e = 0; e < ne; ++e) best.z[mi.edges[e].id] = c[e];
        }
        best.found = best.residual < 1e-8;
    }
    return best;
}

} // namespace qhs
