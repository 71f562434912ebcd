#include "qhs/morphism.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "qhs/catalog.hpp"

namespace qhs {

std::size_t MorphismData::dim(std::size_t t, std::size_t r) const {
    auto it = fdim.find({t, r});
    return it == fdim.end() ? 0 : it->second;
}

std::pair<std::vector<PsiIndex>, std::vector<PsiIndex>> standard_layout(const MorphismData& m,
                                                                        std::size_t t,
                                                                        std::size_t r) {
    std::vector<PsiIndex> dom, cod;
    for (std::size_t s = 0; s < m.x.size(); ++s)
        for (std::size_t a = 0; a < m.dim(t, s); ++a)
            for (std::size_t k = 0; k < m.x.dim(s, r); ++k) dom.push_back({s, a, k});
    for (std::size_t u = 0; u < m.y.size(); ++u)
        for (std::size_t g = 0; g < m.y.dim(t, u); ++g)
            for (std::size_t b = 0; b < m.dim(u, r); ++b) cod.push_back({u, g, b});
    return {dom, cod};
}

namespace {

using DiagramKey = std::tuple<std::size_t, std::size_t, std::size_t, std::size_t, std::size_t>;

struct Term {
    Complex coef;
    BlockKey A;
    Eigen::Index ra, ca;
    BlockKey B;
    Eigen::Index rb, cb;
};

struct Equation {
    std::vector<Term> terms;
    Complex rhs = 0.0;
};

// Equations of the square at (t, r), one per (a, output key).
struct Square {
    std::map<std::pair<std::size_t, DiagramKey>, Equation> eqs;
    std::vector<std::string> missing;
};

Eigen::Index position(const std::vector<PsiIndex>& list, const PsiIndex& x) {
    auto it = std::find(list.begin(), list.end(), x);
    return it == list.end() ? -1 : static_cast<Eigen::Index>(it - list.begin());
}

std::string pair_name(const MorphismData& m, std::size_t t, std::size_t r) {
    return m.y.index[t] + "," + m.x.index[r];
}

Square square(const MorphismData& m, std::size_t t, std::size_t r) {
    Square sq;
    const std::size_t d = m.dim(t, r);
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t s = 0; s < m.x.size(); ++s) {
            const CMatrix& MX = m.x.block(r, s);
            if (MX.size() == 0) continue;
            auto ita = m.psi.find({t, s});
            if (ita == m.psi.end()) {
                sq.missing.push_back(pair_name(m, t, s));
                continue;
            }
            const PsiBlock& A = ita->second;
            for (Eigen::Index k = 0; k < MX.cols(); ++k) {
                Eigen::Index ca = position(A.domain, {r, a, static_cast<std::size_t>(k)});
                if (ca < 0) {
                    sq.missing.push_back(pair_name(m, t, s));
                    continue;
                }
                for (Eigen::Index l = 0; l < MX.rows(); ++l) {
                    const Complex coef = MX(l, k);
                    if (coef == 0.0) continue;
                    for (Eigen::Index ra = 0; ra < static_cast<Eigen::Index>(A.codomain.size()); ++ra) {
                        auto [u, g, b] = A.codomain[static_cast<std::size_t>(ra)];
                        auto itb = m.psi.find({u, r});
                        if (itb == m.psi.end()) {
                            sq.missing.push_back(pair_name(m, u, r));
                            continue;
                        }
                        const PsiBlock& B = itb->second;
                        Eigen::Index cb = position(B.domain, {s, b, static_cast<std::size_t>(l)});
                        if (cb < 0) {
                            sq.missing.push_back(pair_name(m, u, r));
                            continue;
                        }
                        for (Eigen::Index rb = 0; rb < static_cast<Eigen::Index>(B.codomain.size()); ++rb) {
                            auto [u2, g2, c] = B.codomain[static_cast<std::size_t>(rb)];
                            sq.eqs[{a, {u, g, u2, g2, c}}].terms.push_back(
                                {coef, {t, s}, ra, ca, {u, r}, rb, cb});
                        }
                    }
                }
            }
        }
        for (std::size_t u = 0; u < m.y.size(); ++u) {
            const CMatrix& MY = m.y.block(t, u);
            for (Eigen::Index k = 0; k < MY.cols(); ++k)
                for (Eigen::Index l = 0; l < MY.rows(); ++l)
                    sq.eqs[{a, {u, static_cast<std::size_t>(k), t, static_cast<std::size_t>(l), a}}].rhs +=
                        MY(l, k);
        }
    }
    std::sort(sq.missing.begin(), sq.missing.end());
    sq.missing.erase(std::unique(sq.missing.begin(), sq.missing.end()), sq.missing.end());
    return sq;
}

Complex entry(const MorphismData& m, const BlockKey& k, Eigen::Index r, Eigen::Index c) {
    return m.psi.at(k).matrix(r, c);
}

void check_shapes(const MorphismData& m) {
    for (const auto& [key, P] : m.psi)
        if (P.matrix.rows() != static_cast<Eigen::Index>(P.codomain.size()) ||
            P.matrix.cols() != static_cast<Eigen::Index>(P.domain.size()))
            throw std::invalid_argument("psi block " + pair_name(m, key.first, key.second) +
                                        " does not match its index lists");
}

} // namespace

std::vector<BlockKey> default_window(const MorphismData& m) {
    std::vector<BlockKey> out;
    for (const auto& [key, d] : m.fdim) {
        auto [t, r] = key;
        if (d == 0 || m.y.boundary[t] || m.x.boundary[r]) continue;
        if (square(m, t, r).missing.empty()) out.push_back(key);
    }
    return out;
}

PsiReport verify_psi(const MorphismData& m, const DeformationParameter& dp, double tol) {
    check_shapes(m);
    PsiReport rep;
    if (m.x.q_sign != dp.sign() || m.y.q_sign != dp.sign()) rep.reasons.push_back("q_sign");

    std::set<BlockKey> touched;
    for (const auto& [t, r] : m.window) {
        Square sq = square(m, t, r);
        for (const auto& name : sq.missing) rep.reasons.push_back("missing_block:" + name);
        if (!sq.missing.empty()) continue;
        std::map<DiagramKey, Eigen::Index> rows;
        for (const auto& [k, eq] : sq.eqs) rows.emplace(k.second, static_cast<Eigen::Index>(rows.size()));
        CMatrix R = CMatrix::Zero(static_cast<Eigen::Index>(rows.size()),
                                  static_cast<Eigen::Index>(m.dim(t, r)));
        for (const auto& [k, eq] : sq.eqs) {
            Complex v = -eq.rhs;
            for (const auto& tm : eq.terms) {
                v += tm.coef * entry(m, tm.A, tm.ra, tm.ca) * entry(m, tm.B, tm.rb, tm.cb);
                touched.insert(tm.A);
                touched.insert(tm.B);
            }
            R(rows[k.second], static_cast<Eigen::Index>(k.first)) = v;
        }
        double res = R.size() ? Eigen::JacobiSVD<CMatrix>(R).singularValues()[0] : 0.0;
        rep.residual[{t, r}] = res;
        if (!rep.worst_pair || res > rep.worst_residual) {
            rep.worst_residual = res;
            rep.worst_pair = BlockKey{t, r};
        }
        if (res > tol) rep.reasons.push_back("square:" + pair_name(m, t, r));
    }
    for (const auto& [t, r] : m.window) touched.insert({t, r});
    for (const auto& key : touched) {
        auto it = m.psi.find(key);
        if (it == m.psi.end()) continue;
        const CMatrix& P = it->second.matrix;
        if (P.rows() != P.cols()) {
            rep.reasons.push_back("not_square:" + pair_name(m, key.first, key.second));
            rep.unitarity_residual = std::numeric_limits<double>::infinity();
            continue;
        }
        auto [dom, cod] = standard_layout(m, key.first, key.second);
        if (dom.size() != static_cast<std::size_t>(P.cols()))
            rep.reasons.push_back("grading:" + pair_name(m, key.first, key.second));
        double u = P.size() ? (P.adjoint() * P - CMatrix::Identity(P.rows(), P.cols())).cwiseAbs().maxCoeff()
                            : 0.0;
        rep.unitarity_residual = std::max(rep.unitarity_residual, u);
        if (u > tol) rep.reasons.push_back("unitarity:" + pair_name(m, key.first, key.second));
    }
    rep.pass = rep.reasons.empty();
    return rep;
}

PsiReport propagate_phases(MorphismData& m, const std::set<BlockKey>& unknown,
                           const DeformationParameter& dp, double tol) {
    check_shapes(m);
    for (const auto& k : unknown) {
        const CMatrix& P = m.psi.at(k).matrix;
        if (P.rows() != 1 || P.cols() != 1) throw std::invalid_argument("unknown blocks must be 1x1");
    }
    std::vector<Equation> eqs;
    for (const auto& [t, r] : m.window)
        for (auto& [k, eq] : square(m, t, r).eqs) eqs.push_back(std::move(eq));

    std::set<BlockKey> open = unknown;
    auto value = [&](const BlockKey& k, Eigen::Index r, Eigen::Index c) { return entry(m, k, r, c); };
    while (!open.empty()) {
        bool progress = false;
        for (const auto& eq : eqs) {
            std::set<BlockKey> vars;
            bool nonlinear = false;
            for (const auto& tm : eq.terms) {
                bool a = open.count(tm.A) != 0, b = open.count(tm.B) != 0;
                if (a) vars.insert(tm.A);
                if (b) vars.insert(tm.B);
                nonlinear = nonlinear || (a && b);
            }
            if (vars.size() != 1 || nonlinear) continue;
            const BlockKey v = *vars.begin();
            Complex alpha = 0.0, beta = 0.0;
            for (const auto& tm : eq.terms) {
                if (tm.A == v)
                    alpha += tm.coef * value(tm.B, tm.rb, tm.cb);
                else if (tm.B == v)
                    alpha += tm.coef * value(tm.A, tm.ra, tm.ca);
                else
                    beta += tm.coef * value(tm.A, tm.ra, tm.ca) * value(tm.B, tm.rb, tm.cb);
            }
            if (std::abs(alpha) < 1e-9) continue;
            m.psi.at(v).matrix(0, 0) = (eq.rhs - beta) / alpha;
            open.erase(v);
            progress = true;
        }
        if (progress) continue;
        // Gauge: fix the first open block that occurs in some equation.
        std::optional<BlockKey> pick;
        for (const auto& eq : eqs) {
            for (const auto& tm : eq.terms) {
                if (open.count(tm.A)) pick = tm.A;
                else if (open.count(tm.B)) pick = tm.B;
                if (pick) break;
            }
            if (pick) break;
        }
        if (!pick) {
            for (const auto& k : open) m.psi.at(k).matrix(0, 0) = 1.0;
            open.clear();
            break;
        }
        m.psi.at(*pick).matrix(0, 0) = 1.0;
        open.erase(*pick);
    }
    return verify_psi(m, dp, tol);
}

PruneReport dimension_prune(const OrientedGraph& x, const OrientedGraph& y, std::size_t max_dim,
                            const PruneOptions& opt) {
    const std::size_t nx = x.num_vertices(), ny = y.num_vertices();
    const Eigen::MatrixXi AX = adjacency(x), AY = adjacency(y);
    auto var = [nx](std::size_t t, std::size_t r) { return t * nx + r; };
    const std::size_t nv = nx * ny;

    std::vector<std::size_t> hi(nv, max_dim);
    std::vector<std::size_t> lo(nv, 0);
    std::vector<std::size_t> xdist(nx, 0);
    if (opt.base) {
        std::size_t t0 = y.vertex_index(opt.base->first), r0 = x.vertex_index(opt.base->second);
        xdist = undirected_distances(x, {r0});
        std::size_t far = 0;
        for (auto d : xdist)
            if (d != SIZE_MAX) far = std::max(far, d);
        // reach[k]: vertices of y at the end of a walk of length k from t0.
        std::vector<std::vector<char>> reach(far + 1, std::vector<char>(ny, 0));
        reach[0][t0] = 1;
        for (std::size_t k = 0; k < far; ++k)
            for (std::size_t e = 0; e < y.num_edges(); ++e)
                if (reach[k][y.src(e)]) reach[k + 1][y.dst(e)] = 1;
        for (std::size_t t = 0; t < ny; ++t) {
            for (std::size_t r = 0; r < nx; ++r) {
                if (r == r0) {
                    lo[var(t, r)] = hi[var(t, r)] = (t == t0) ? 1 : 0;
                } else if (xdist[r] != SIZE_MAX && !reach[xdist[r]][t]) {
                    hi[var(t, r)] = 0;
                }
            }
        }
    }

    // Linear constraints sum_v c_v d_v = 0, one per interior pair.
    struct Constraint {
        std::vector<std::pair<std::size_t, long>> terms;
    };
    std::vector<Constraint> cons;
    std::vector<std::vector<std::size_t>> cons_of(nv);
    for (std::size_t t = 0; t < ny; ++t) {
        if (y.is_boundary(t)) continue;
        for (std::size_t r = 0; r < nx; ++r) {
            if (x.is_boundary(r)) continue;
            std::map<std::size_t, long> c;
            for (std::size_t s = 0; s < nx; ++s)
                if (AX(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(r)))
                    c[var(t, s)] += AX(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(r));
            for (std::size_t u = 0; u < ny; ++u)
                if (AY(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(u)))
                    c[var(u, r)] -= AY(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(u));
            Constraint k;
            for (auto [v, w] : c)
                if (w != 0) k.terms.push_back({v, w});
            if (k.terms.empty()) continue;
            for (auto [v, w] : k.terms) cons_of[v].push_back(cons.size());
            cons.push_back(std::move(k));
        }
    }

    // Fixed variables first, then by distance of r from the base, then t.
    std::vector<std::size_t> order(nv);
    for (std::size_t v = 0; v < nv; ++v) order[v] = v;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        bool fa = lo[a] == hi[a], fb = lo[b] == hi[b];
        if (fa != fb) return fa;
        return xdist[a % nx] < xdist[b % nx];
    });

    std::vector<long> val(nv, 0);
    std::vector<char> set(nv, 0);
    auto feasible = [&](const Constraint& k) {
        long sum = 0, lo_s = 0, hi_s = 0;
        for (auto [v, w] : k.terms) {
            if (set[v]) {
                sum += w * val[v];
            } else {
                long span = w * static_cast<long>(hi[v]);
                long base = w * static_cast<long>(lo[v]);
                lo_s += std::min(span, base);
                hi_s += std::max(span, base);
            }
        }
        return sum + lo_s <= 0 && 0 <= sum + hi_s;
    };

    auto costs_ok = [&]() {
        if (!opt.x_cost || !opt.y_cost) return true;
        const Cost& wx = *opt.x_cost;
        const Cost& wy = *opt.y_cost;
        auto d = [&](std::size_t t, std::size_t r) { return static_cast<std::size_t>(val[var(t, r)]); };
        auto block_dim = [&](std::size_t t, std::size_t r) {
            std::size_t n = 0;
            for (std::size_t s = 0; s < nx; ++s)
                n += d(t, s) * static_cast<std::size_t>(AX(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(r)));
            return n;
        };
        for (std::size_t t = 0; t < ny; ++t) {
            if (y.is_boundary(t)) continue;
            for (std::size_t r = 0; r < nx; ++r) {
                if (x.is_boundary(r) || d(t, r) == 0) continue;
                struct Path {
                    double mod;
                    bool simple;
                };
                std::map<std::pair<std::size_t, std::size_t>, std::vector<Path>> keys;
                for (std::size_t s = 0; s < nx; ++s) {
                    auto rs = x.edges_between(r, s), sr = x.edges_between(s, r);
                    if (rs.empty()) continue;
                    for (std::size_t u = 0; u < ny; ++u) {
                        auto tu = y.edges_between(t, u);
                        if (tu.empty() || d(u, s) == 0) continue;
                        for (std::size_t u2 = 0; u2 < ny; ++u2) {
                            auto uu = y.edges_between(u, u2);
                            if (uu.empty() || d(u2, r) == 0) continue;
                            bool simple = rs.size() == 1 && sr.size() == 1 && tu.size() == 1 &&
                                          uu.size() == 1 && d(t, r) == 1 && d(u, s) == 1 &&
                                          d(u2, r) == 1 && block_dim(t, s) == 1 && block_dim(u, r) == 1;
                            keys[{u, u2}].push_back({std::sqrt(wx[rs[0]]), simple});
                        }
                    }
                }
                for (std::size_t u = 0; u < ny; ++u) {
                    auto tu = y.edges_between(t, u);
                    if (tu.empty()) continue;
                    if (!keys.count({u, t})) return false;  // unreachable output component
                    if (tu.size() == 1 && y.edges_between(u, t).size() == 1) keys[{u, t}];
                }
                for (const auto& [k, paths] : keys) {
                    if (paths.size() != 1 || !paths[0].simple) continue;
                    auto tu = y.edges_between(t, k.first);
                    double rhs = (k.second == t && !tu.empty()) ? std::sqrt(wy[tu[0]]) : 0.0;
                    if (std::abs(paths[0].mod - rhs) > 1e3 * opt.tol) return false;
                }
            }
        }
        return true;
    };

    PruneReport rep;
    std::function<void(std::size_t)> search = [&](std::size_t depth) {
        if (rep.truncated) return;
        if (depth == nv) {
            if (std::all_of(val.begin(), val.end(), [](long v) { return v == 0; })) return;
            if (!costs_ok()) {
                ++rep.rejected_by_modulus;
                return;
            }
            if (rep.gradings.size() >= opt.max_solutions) {
                rep.truncated = true;
                return;
            }
            Grading g;
            for (std::size_t t = 0; t < ny; ++t)
                for (std::size_t r = 0; r < nx; ++r)
                    if (val[var(t, r)]) g[{t, r}] = static_cast<std::size_t>(val[var(t, r)]);
            rep.gradings.push_back(std::move(g));
            return;
        }
        std::size_t v = order[depth];
        set[v] = 1;
        for (std::size_t k = lo[v]; k <= hi[v]; ++k) {
            val[v] = static_cast<long>(k);
            bool ok = std::all_of(cons_of[v].begin(), cons_of[v].end(),
                                  [&](std::size_t c) { return feasible(cons[c]); });
            if (ok) search(depth + 1);
            if (rep.truncated) break;
        }
        set[v] = 0;
        val[v] = 0;
    };
    search(0);
    rep.feasible = !rep.gradings.empty();
    return rep;
}

FundamentalSolution point_solution(const DeformationParameter& dp) {
    const double p = std::abs(dp.q());
    GraphBuilder b;
    b.vertex("o").edge("o", "o", 1.0 / p).edge("o", "o", p);
    Involution inv{{1, 0}};
    std::vector<int> rho{-dp.sign(), 1};
    return build_solution(b.graph(), b.cost(), dp, &rho, &inv);
}

MorphismData identity_morphism(const FundamentalSolution& s) {
    MorphismData m;
    m.x = s;
    m.y = s;
    for (std::size_t v = 0; v < s.size(); ++v) m.fdim[{v, v}] = 1;
    for (std::size_t t = 0; t < s.size(); ++t) {
        for (std::size_t r = 0; r < s.size(); ++r) {
            std::size_t n = s.dim(t, r);
            if (n == 0) continue;
            PsiBlock P;
            P.matrix = CMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
            for (std::size_t k = 0; k < n; ++k) {
                P.domain.push_back({t, 0, k});
                P.codomain.push_back({r, k, 0});
            }
            m.psi[{t, r}] = std::move(P);
        }
    }
    m.window = default_window(m);
    return m;
}

namespace {

void require_unit(const Complex& z, const char* what) {
    if (std::abs(std::abs(z) - 1.0) > 1e-12)
        throw std::invalid_argument(std::string(what) + " must lie on the unit circle");
}

// Coefficients of the Podles chain: R^X_m = -sqrt(W(m->m+1)) xi xi + sgn(q) sqrt(W(m->m-1)) xi xi.
std::vector<int> chain_rho(const OrientedGraph& g, int sign) {
    std::vector<int> rho(g.num_edges(), 1);
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        if (g.is_loop(e)) continue;
        int a = std::stoi(g.vertices()[g.src(e)]), b = std::stoi(g.vertices()[g.dst(e)]);
        rho[e] = b == a + 1 ? -1 : sign;
    }
    return rho;
}

// Columns (m+1 branch, m-1 branch) of psi_m over (e1, e2) at y = x + m.
Eigen::Matrix2cd podles_block(double q, double y, int m, Complex lambda) {
    const double p = std::abs(q);
    double a, b;
    if (std::isinf(y)) {
        a = 1.0;
        b = 0.0;
    } else {
        const double f = std::pow(p, y) + std::pow(p, -y);
        a = std::sqrt(std::pow(p, -y) / f);
        b = std::sqrt(std::pow(p, y) / f);
    }
    const double sm = (m % 2 == 0) ? 1.0 : -1.0;
    Eigen::Matrix2cd P;
    if (q > 0) {
        P.col(0) << sm * b, sm * lambda * a;
        P.col(1) << sm * a, -sm * lambda * b;
    } else {
        P.col(0) << b, sm * lambda * a;
        P.col(1) << -sm * a, lambda * b;
    }
    // Global phase making the square commute for every lambda on the circle.
    return std::sqrt(-std::conj(lambda)) * P;
}

MorphismData podles_into_suq2(const EmbeddingParams& p) {
    const double q = p.q.value_or(0.5);
    const double x = p.x.value_or(0.0);
    const int M = p.window.value_or(kDefaultWindow);
    require_unit(p.lambda, "lambda");
    for (const auto& a : p.alpha) require_unit(a, "alpha");
    if (!p.alpha.empty() && p.alpha.size() != static_cast<std::size_t>(2 * M + 3))
        throw std::invalid_argument("alpha needs 2*window+3 entries");
    auto dp = DeformationParameter::from_q(q);
    if (std::abs(q) >= 1.0) throw std::invalid_argument("podles_into_suq2 requires |q| < 1");
    CatalogParams cp;
    cp.q = q;
    cp.x = x;
    cp.window = M + 1;
    auto X = catalog("A_inf_inf", cp);
    auto rho = chain_rho(X.graph, dp.sign());
    MorphismData m;
    m.x = build_solution(X.graph, X.cost, dp, &rho);
    m.y = point_solution(dp);
    for (std::size_t r = 0; r < m.x.size(); ++r) m.fdim[{0, r}] = 1;
    auto alpha = [&](int k) { return p.alpha.empty() ? Complex(1.0) : p.alpha[static_cast<std::size_t>(k + M + 1)]; };
    for (int k = -M; k <= M; ++k) {
        Eigen::Matrix2cd P = podles_block(q, x + k, k, p.lambda);
        P.col(0) *= alpha(k) * std::conj(alpha(k + 1));
        P.col(1) *= alpha(k) * std::conj(alpha(k - 1));
        PsiBlock B;
        B.matrix = P;
        B.domain = {{m.x.index_of(std::to_string(k + 1)), 0, 0}, {m.x.index_of(std::to_string(k - 1)), 0, 0}};
        B.codomain = {{0, 0, 0}, {0, 1, 0}};
        m.psi[{0, m.x.index_of(std::to_string(k))}] = std::move(B);
    }
    for (int k = -M + 1; k <= M - 1; ++k) m.window.push_back({0, m.x.index_of(std::to_string(k))});
    return m;
}

MorphismData ainf_prime_coideal(const EmbeddingParams& p) {
    const double q = p.q.value_or(-0.5);
    if (q >= 0) throw std::invalid_argument("ainf_prime_coideal requires q < 0");
    const int M = p.window.value_or(kDefaultWindow);
    require_unit(p.lambda, "lambda");
    auto dp = DeformationParameter::from_q(q);
    CatalogParams cp;
    cp.q = q;
    cp.window = M + 1;
    auto X = catalog("A_inf_prime", cp);
    auto rho = chain_rho(X.graph, dp.sign());
    MorphismData m;
    m.x = build_solution(X.graph, X.cost, dp, &rho);
    m.y = point_solution(dp);
    for (std::size_t r = 0; r < m.x.size(); ++r) m.fdim[{0, r}] = 1;
    for (int k = 0; k <= M; ++k) {
        PsiBlock B;
        B.matrix = podles_block(q, 0.5 + k, k, p.lambda);
        // At 0 the lower branch is the loop.
        std::size_t low = m.x.index_of(std::to_string(k == 0 ? 0 : k - 1));
        B.domain = {{m.x.index_of(std::to_string(k + 1)), 0, 0}, {low, 0, 0}};
        B.codomain = {{0, 0, 0}, {0, 1, 0}};
        m.psi[{0, m.x.index_of(std::to_string(k))}] = std::move(B);
    }
    for (int k = 0; k <= M - 1; ++k) m.window.push_back({0, m.x.index_of(std::to_string(k))});
    return m;
}

MorphismData d3prime(const EmbeddingParams& p, int family) {
    require_unit(p.beta, "beta");
    auto dp = DeformationParameter::from_q(-1.0);
    CatalogParams cp;
    cp.q = -1.0;
    cp.n = 3;
    auto X = catalog("D_prime", cp);
    MorphismData m;
    m.x = build_solution(X.graph, X.cost, dp);
    m.y = point_solution(dp);
    const std::size_t P = m.x.index_of("+"), N = m.x.index_of("-"), S = m.x.index_of("*");
    m.fdim[{0, S}] = 2;
    m.fdim[{0, P}] = 1;
    m.fdim[{0, N}] = 1;
    const Complex b = p.beta, bb = std::conj(p.beta);
    const double h = 1.0 / std::sqrt(2.0);

    // xi_1, xi_2 (x) xi_{*+} -> e_1 xi_+, e_2 xi_+
    PsiBlock plus;
    plus.matrix = CMatrix::Identity(2, 2);
    plus.domain = {{S, 0, 0}, {S, 1, 0}};
    plus.codomain = {{0, 0, 0}, {0, 1, 0}};
    m.psi[{0, P}] = plus;

    PsiBlock minus = plus;
    minus.matrix = CMatrix::Zero(2, 2);
    if (family == 1) {
        minus.matrix(0, 0) = 1.0;
        minus.matrix(1, 1) = -1.0;
    } else {
        minus.matrix(1, 0) = -bb * bb * bb * bb;
        minus.matrix(0, 1) = 1.0;
    }
    m.psi[{0, N}] = minus;

    // Codomain e_g (x) xi_c with g, c in {1, 2}.
    PsiBlock star;
    star.domain = {{P, 0, 0}, {N, 0, 0}, {S, 0, 0}, {S, 1, 0}};
    star.codomain = {{0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {0, 1, 1}};
    auto row = [](int g, int c) { return static_cast<Eigen::Index>(2 * (g - 1) + (c - 1)); };
    CMatrix& Q = star.matrix;
    Q = CMatrix::Zero(4, 4);
    Q(row(2, 1), 0) = h;
    Q(row(1, 2), 0) = h;
    if (family == 1) {
        Q(row(2, 1), 1) = h;
        Q(row(1, 2), 1) = -h;
        Q(row(2, 2), 2) = b;
        Q(row(1, 1), 3) = bb;
    } else {
        Q(row(1, 1), 1) = -b * b * b * b * h;
        Q(row(2, 2), 1) = h;
        Q(row(1, 1), 2) = b / 2.0;
        Q(row(2, 1), 2) = bb / 2.0;
        Q(row(1, 2), 2) = -bb / 2.0;
        Q(row(2, 2), 2) = bb * bb * bb / 2.0;
        Q(row(1, 1), 3) = b * b * b / 2.0;
        Q(row(2, 1), 3) = -b / 2.0;
        Q(row(1, 2), 3) = b / 2.0;
        Q(row(2, 2), 3) = bb / 2.0;
    }
    m.psi[{0, S}] = star;
    m.window = {{0, P}, {0, N}, {0, S}};
    return m;
}

MorphismData rp2_into_podles0(const EmbeddingParams& p) {
    const double q = p.q.value_or(0.5);
    const int MX = p.window.value_or(kDefaultWindow);
    const int MY = MX + 1;
    auto dp = DeformationParameter::from_q(q);
    CatalogParams cx;
    cx.q = q;
    cx.window = MX;
    CatalogParams cy;
    cy.q = q;
    cy.x = p.x.value_or(0.0);
    cy.window = MY;
    auto X = catalog("D_inf_star", cx);
    auto Y = catalog("A_inf_inf", cy);
    MorphismData m;
    m.x = build_solution(X.graph, X.cost, dp);
    m.y = build_solution(Y.graph, Y.cost, dp);
    auto yi = [&](int k) { return m.y.index_of(std::to_string(k)); };
    auto xi = [&](const std::string& v) { return m.x.index_of(v); };
    m.fdim[{yi(0), xi("*")}] = 1;
    m.fdim[{yi(0), xi("*~")}] = 1;
    for (int k = 1; k <= MX; ++k) {
        m.fdim[{yi(k), xi(std::to_string(k))}] = 1;
        m.fdim[{yi(-k), xi(std::to_string(k))}] = 1;
    }
    std::set<BlockKey> unknown;
    for (std::size_t t = 0; t < m.y.size(); ++t) {
        for (std::size_t r = 0; r < m.x.size(); ++r) {
            auto [dom, cod] = standard_layout(m, t, r);
            if (dom.empty() || dom.size() != cod.size()) continue;
            PsiBlock B;
            B.domain = dom;
            B.codomain = cod;
            if (t == yi(0) && r == xi("1")) {
                B.codomain = {{yi(1), 0, 0}, {yi(-1), 0, 0}};
                B.matrix.resize(2, 2);
                B.matrix << 1.0, 1.0, -1.0, 1.0;
                B.matrix /= std::sqrt(2.0);
            } else if (dom.size() == 1) {
                B.matrix = CMatrix::Ones(1, 1);
                unknown.insert({t, r});
            } else {
                continue;
            }
            m.psi[{t, r}] = std::move(B);
        }
    }
    m.window = default_window(m);
    auto rep = propagate_phases(m, unknown, dp);
    if (!rep.pass) throw std::runtime_error("rp2_into_podles0: no compatible phases on this window");
    return m;
}

} // namespace

const std::vector<std::string>& example_names() {
    static const std::vector<std::string> names{"podles_into_suq2", "rp2_into_podles0",
                                                "ainf_prime_coideal", "d3prime_family1",
                                                "d3prime_family2"};
    return names;
}

DeformationParameter example_parameter(const std::string& name, const EmbeddingParams& p) {
    if (name == "d3prime_family1" || name == "d3prime_family2") return DeformationParameter::from_q(-1.0);
    if (name == "ainf_prime_coideal") return DeformationParameter::from_q(p.q.value_or(-0.5));
    if (name == "podles_into_suq2" || name == "rp2_into_podles0")
        return DeformationParameter::from_q(p.q.value_or(0.5));
    throw std::invalid_argument("unknown example '" + name + "'");
}

MorphismData example_embedding(const std::string& name, const EmbeddingParams& p) {
    if (name == "podles_into_suq2") return podles_into_suq2(p);
    if (name == "rp2_into_podles0") return rp2_into_podles0(p);
    if (name == "ainf_prime_coideal") return ainf_prime_coideal(p);
    if (name == "d3prime_family1") return d3prime(p, 1);
    if (name == "d3prime_family2") return d3prime(p, 2);
    throw std::invalid_argument("unknown example '" + name + "'");
}

} // namespace qhs
