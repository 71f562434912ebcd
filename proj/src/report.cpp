#include "qhs/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace qhs {

double round12(double x) {
    if (!std::isfinite(x)) return x;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    double r = std::strtod(buf, nullptr);
    return r == 0.0 ? 0.0 : r;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json complex_json(Complex z) { return Json::array({round12(z.real()), round12(z.imag())}); }

Json matrix_json(const CMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

namespace {

[[noreturn]] void schema(const std::string& field, const std::string& what) {
    throw SchemaError(field + ": " + what);
}

const Json& field(const Json& j, const std::string& key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) schema(path + key, "missing");
    return j[key];
}

Complex complex_from_json(const Json& z, const std::string& path) {
    if (z.is_number()) return {z.get<double>(), 0.0};
    if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
        schema(path, "expected [re, im]");
    return {z[0].get<double>(), z[1].get<double>()};
}

std::string pair_key(const std::vector<std::string>& names, BlockKey k) {
    return names[k.first] + "," + names[k.second];
}

BlockKey parse_pair_key(const std::string& key, const FundamentalSolution& a,
                        const FundamentalSolution& b, const std::string& path) {
    auto comma = key.find(',');
    if (comma == std::string::npos) schema(path, "key '" + key + "' is not of the form v,w");
    try {
        return {a.index_of(key.substr(0, comma)), b.index_of(key.substr(comma + 1))};
    } catch (const std::exception&) {
        schema(path, "unknown vertex in key '" + key + "'");
    }
}

Json psi_index_json(const PsiIndex& p, const FundamentalSolution& s) {
    return Json::array({s.index[p.vertex], p.first, p.second});
}

PsiIndex psi_index_from_json(const Json& j, const FundamentalSolution& s, const std::string& path) {
    if (!j.is_array() || j.size() != 3 || !j[0].is_string() || !j[1].is_number_unsigned() ||
        !j[2].is_number_unsigned())
        schema(path, "expected [vertex, int, int]");
    try {
        return {s.index_of(j[0].get<std::string>()), j[1].get<std::size_t>(),
                j[2].get<std::size_t>()};
    } catch (const SchemaError&) {
        throw;
    } catch (const std::exception&) {
        schema(path, "unknown vertex");
    }
}

} // namespace

CMatrix matrix_from_json(const Json& j) {
    if (!j.is_array()) schema("matrix", "expected an array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows ? static_cast<Eigen::Index>(j[0].size()) : 0;
    CMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (!j[i].is_array() || static_cast<Eigen::Index>(j[i].size()) != cols)
            schema("matrix", "ragged rows");
        for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = complex_from_json(j[i][k], "matrix entry");
    }
    return m;
}

Json graph_json(const OrientedGraph& g, const Cost* w, std::optional<double> q) {
    Json j = Json::parse(save_graph(g, w, q));
    for (auto& e : j["edges"])
        if (e.contains("weight")) e["weight"] = round12(e["weight"].get<double>());
    if (q) j["q"] = round12(*q);
    return j;
}

Json to_json(const FairnessReport& r, const OrientedGraph& g) {
    Json j;
    j["verdict"] = r.pass ? "pass" : "fail";
    j["reasons"] = r.reasons;
    Json costs = Json::object();
    for (std::size_t v = 0; v < g.num_vertices() && v < r.source_costs.size(); ++v)
        costs[g.vertices()[v]] = round12(r.source_costs[v]);
    j["source_costs"] = costs;
    if (r.witness) {
        Json inv = Json::object();
        for (std::size_t e = 0; e < g.num_edges(); ++e)
            inv[g.edges()[e].id] = g.edges()[r.witness->pair[e]].id;
        j["involution"] = inv;
    }
    return j;
}

Json to_json(const SolveResult& r, const OrientedGraph& g) {
    Json j;
    j["verdict"] = r.feasible ? "feasible" : "infeasible";
    j["family"] = r.family;
    j["branches"] = r.branches;
    Json sols = Json::array();
    for (const auto& s : r.solutions) {
        Json cost = Json::object(), inv = Json::object();
        for (std::size_t e = 0; e < g.num_edges(); ++e) {
            cost[g.edges()[e].id] = round12(s.cost[e]);
            inv[g.edges()[e].id] = g.edges()[s.involution.pair[e]].id;
        }
        sols.push_back({{"cost", cost}, {"involution", inv}});
    }
    j["solutions"] = sols;
    return j;
}

Json to_json(const FundamentalSolution& s) {
    Json j;
    j["index"] = s.index;
    Json boundary = Json::array();
    for (std::size_t v = 0; v < s.size(); ++v)
        if (s.boundary[v]) boundary.push_back(s.index[v]);
    j["boundary"] = boundary;
    j["q_sign"] = s.q_sign;
    Json blocks = Json::object();
    for (const auto& [key, m] : s.jmaps) {
        Json b{{"matrix", matrix_json(m)}};
        auto it = s.basis.find(key);
        if (it != s.basis.end()) b["basis"] = it->second;
        blocks[pair_key(s.index, key)] = b;
    }
    j["blocks"] = blocks;
    return j;
}

FundamentalSolution solution_from_json(const Json& j) {
    FundamentalSolution s;
    const Json& index = field(j, "index", "");
    if (!index.is_array()) schema("index", "expected an array of strings");
    for (const auto& v : index) {
        if (!v.is_string()) schema("index", "expected an array of strings");
        s.index.push_back(v.get<std::string>());
    }
    s.boundary.assign(s.size(), false);
    if (j.contains("boundary")) {
        for (const auto& b : j["boundary"]) {
            if (!b.is_string()) schema("boundary", "expected an array of strings");
            try {
                s.boundary[s.index_of(b.get<std::string>())] = true;
            } catch (const std::exception&) {
                schema("boundary", "unknown vertex '" + b.get<std::string>() + "'");
            }
        }
    }
    const Json& qs = field(j, "q_sign", "");
    if (!qs.is_number_integer() || (qs.get<int>() != 1 && qs.get<int>() != -1))
        schema("q_sign", "expected 1 or -1");
    s.q_sign = qs.get<int>();
    const Json& blocks = field(j, "blocks", "");
    if (!blocks.is_object()) schema("blocks", "expected an object");
    for (const auto& [key, b] : blocks.items()) {
        BlockKey k = parse_pair_key(key, s, s, "blocks");
        CMatrix m = matrix_from_json(field(b, "matrix", "blocks." + key + "."));
        if (b.contains("basis")) s.basis[k] = b["basis"].get<std::vector<std::string>>();
        s.jmaps[k] = std::move(m);
    }
    for (const auto& [k, m] : s.jmaps) {
        auto rev = s.jmaps.find({k.second, k.first});
        if (rev == s.jmaps.end() || rev->second.rows() != m.cols() || rev->second.cols() != m.rows())
            schema("blocks", "block " + pair_key(s.index, k) + " has no reverse of matching shape");
        auto it = s.basis.find(k);
        if (it != s.basis.end() && static_cast<Eigen::Index>(it->second.size()) != m.cols())
            schema("blocks." + pair_key(s.index, k) + ".basis", "length differs from column count");
    }
    return s;
}

Json to_json(const SolutionReport& r) {
    Json j;
    j["verdict"] = r.pass ? "pass" : "fail";
    j["composition_residual"] = round12(r.composition_residual);
    Json tr = Json::array();
    for (double x : r.trace_residual) tr.push_back(round12(x));
    j["trace_residual"] = tr;
    j["reasons"] = r.reasons;
    return j;
}

Json to_json(const Presentation& p) {
    Json j;
    j["projections"] = p.projections;
    Json gens = Json::array();
    for (const auto& g : p.generators) gens.push_back({{"edge", g.edge}, {"col", g.col}});
    j["generators"] = gens;
    Json rels = Json::array();
    for (const auto& r : p.relations) {
        Json coeffs = Json::array();
        for (const auto& c : r.coeffs) coeffs.push_back(complex_json(c));
        rels.push_back({{"kind", r.kind},
                        {"indices", r.indices},
                        {"terms", r.terms},
                        {"coeffs", coeffs},
                        {"rhs", complex_json(r.rhs)}});
    }
    j["relations"] = rels;
    j["F"] = Json::array({Json::array({round12(p.F(0, 0)), round12(p.F(0, 1))}),
                          Json::array({round12(p.F(1, 0)), round12(p.F(1, 1))})});
    Json E = Json::object();
    for (const auto& [k, m] : p.E) E[pair_key(p.index, k)] = matrix_json(m);
    j["E"] = E;
    j["q_sign"] = p.q_sign;
    return j;
}

Json to_json(const MorphismData& m) {
    Json j;
    j["x"] = to_json(m.x);
    j["y"] = to_json(m.y);
    Json fdim = Json::object();
    for (const auto& [k, d] : m.fdim)
        fdim[m.y.index[k.first] + "," + m.x.index[k.second]] = d;
    j["fdim"] = fdim;
    Json psi = Json::object();
    for (const auto& [k, b] : m.psi) {
        Json dom = Json::array(), cod = Json::array();
        for (const auto& p : b.domain) dom.push_back(psi_index_json(p, m.x));
        for (const auto& p : b.codomain) cod.push_back(psi_index_json(p, m.y));
        psi[m.y.index[k.first] + "," + m.x.index[k.second]] =
            Json{{"matrix", matrix_json(b.matrix)}, {"domain", dom}, {"codomain", cod}};
    }
    j["psi"] = psi;
    Json window = Json::array();
    for (const auto& [t, r] : m.window) window.push_back({m.y.index[t], m.x.index[r]});
    j["window"] = window;
    return j;
}

MorphismData morphism_from_json(const Json& j) {
    MorphismData m;
    m.x = solution_from_json(field(j, "x", ""));
    m.y = solution_from_json(field(j, "y", ""));
    const Json& fdim = field(j, "fdim", "");
    if (!fdim.is_object()) schema("fdim", "expected an object");
    for (const auto& [key, d] : fdim.items()) {
        if (!d.is_number_unsigned()) schema("fdim." + key, "expected a nonnegative integer");
        m.fdim[parse_pair_key(key, m.y, m.x, "fdim")] = d.get<std::size_t>();
    }
    const Json& psi = field(j, "psi", "");
    if (!psi.is_object()) schema("psi", "expected an object");
    for (const auto& [key, b] : psi.items()) {
        PsiBlock blk;
        const std::string path = "psi." + key + ".";
        blk.matrix = matrix_from_json(field(b, "matrix", path));
        for (const auto& p : field(b, "domain", path))
            blk.domain.push_back(psi_index_from_json(p, m.x, path + "domain"));
        for (const auto& p : field(b, "codomain", path))
            blk.codomain.push_back(psi_index_from_json(p, m.y, path + "codomain"));
        m.psi[parse_pair_key(key, m.y, m.x, "psi")] = std::move(blk);
    }
    if (j.contains("window")) {
        for (const auto& w : j["window"]) {
            if (!w.is_array() || w.size() != 2 || !w[0].is_string() || !w[1].is_string())
                schema("window", "expected [t, r] pairs");
            m.window.push_back(parse_pair_key(w[0].get<std::string>() + "," + w[1].get<std::string>(),
                                              m.y, m.x, "window"));
        }
    } else {
        m.window = default_window(m);
    }
    return m;
}

Json to_json(const PsiReport& r, const MorphismData& m) {
    Json j;
    j["verdict"] = r.pass ? "pass" : "fail";
    j["worst_residual"] = round12(r.worst_residual);
    if (r.worst_pair)
        j["worst_pair"] = {m.y.index[r.worst_pair->first], m.x.index[r.worst_pair->second]};
    j["unitarity_residual"] = round12(r.unitarity_residual);
    Json res = Json::object();
    for (const auto& [k, v] : r.residual) res[m.y.index[k.first] + "," + m.x.index[k.second]] = round12(v);
    j["residual"] = res;
    j["reasons"] = r.reasons;
    return j;
}

Json to_json(const PruneReport& r, const OrientedGraph& x, const OrientedGraph& y) {
    Json j;
    j["verdict"] = r.feasible ? "feasible" : "infeasible";
    j["truncated"] = r.truncated;
    j["rejected_by_modulus"] = r.rejected_by_modulus;
    Json gs = Json::array();
    for (const auto& g : r.gradings) {
        Json o = Json::object();
        for (const auto& [k, d] : g) o[y.vertices()[k.first] + "," + x.vertices()[k.second]] = d;
        gs.push_back(o);
    }
    j["gradings"] = gs;
    return j;
}

Json to_json(const AbelianGroup& g) {
    Json t = Json::array();
    for (const auto& x : g.torsion) {
        if (x.fits_slong_p())
            t.push_back(x.get_si());
        else
            t.push_back(x.get_str());
    }
    return {{"rank", g.rank}, {"torsion", t}};
}

Json to_json(const KGroups& k) { return {{"K0", to_json(k.K0)}, {"K1", to_json(k.K1)}}; }

} // namespace qhs
