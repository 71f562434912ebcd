#include "qhs/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

namespace qhs {

using json = nlohmann::json;

OrientedGraph::OrientedGraph(std::vector<std::string> vertices, std::vector<Edge> edges,
                             std::set<std::string> boundary)
    : vertices_(std::move(vertices)), edges_(std::move(edges)), boundary_(std::move(boundary)) {
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        if (!vindex_.emplace(vertices_[i], i).second)
            throw SchemaError("duplicate vertex id '" + vertices_[i] + "'");
    }
    out_.resize(vertices_.size());
    in_.resize(vertices_.size());
    vboundary_.assign(vertices_.size(), false);
    for (const auto& b : boundary_) {
        auto it = vindex_.find(b);
        if (it == vindex_.end()) throw SchemaError("boundary vertex '" + b + "' is not declared");
        vboundary_[it->second] = true;
    }
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const Edge& ed = edges_[e];
        if (!eindex_.emplace(ed.id, e).second)
            throw SchemaError("duplicate edge id '" + ed.id + "'");
        auto s = vindex_.find(ed.src);
        if (s == vindex_.end())
            throw SchemaError("edge '" + ed.id + "': src '" + ed.src + "' is not a vertex");
        auto t = vindex_.find(ed.dst);
        if (t == vindex_.end())
            throw SchemaError("edge '" + ed.id + "': dst '" + ed.dst + "' is not a vertex");
        esrc_.push_back(s->second);
        edst_.push_back(t->second);
        out_[s->second].push_back(e);
        in_[t->second].push_back(e);
    }
}

std::size_t OrientedGraph::vertex_index(const std::string& v) const {
    auto it = vindex_.find(v);
    if (it == vindex_.end()) throw std::out_of_range("unknown vertex '" + v + "'");
    return it->second;
}

std::size_t OrientedGraph::edge_index(const std::string& id) const {
    auto it = eindex_.find(id);
    if (it == eindex_.end()) throw std::out_of_range("unknown edge '" + id + "'");
    return it->second;
}

std::vector<std::size_t> OrientedGraph::edges_between(std::size_t v, std::size_t w) const {
    std::vector<std::size_t> r;
    for (auto e : out_[v])
        if (edst_[e] == w) r.push_back(e);
    return r;
}

void validate_cost(const OrientedGraph& g, const Cost& w) {
    if (w.size() != g.num_edges())
        throw std::invalid_argument("cost has " + std::to_string(w.size()) + " entries for " +
                                    std::to_string(g.num_edges()) + " edges");
    for (std::size_t e = 0; e < w.size(); ++e)
        if (!(w[e] > 0.0) || !std::isfinite(w[e]))
            throw std::invalid_argument("edge '" + g.edges()[e].id +
                                        "' has non-positive or non-finite weight");
}

std::string edge_id(const std::string& src, const std::string& dst, int k) {
    return src + "\xE2\x86\x92" + dst + "#" + std::to_string(k);
}

GraphBuilder& GraphBuilder::vertex(const std::string& v, bool boundary) {
    vertices_.push_back(v);
    if (boundary) boundary_.insert(v);
    return *this;
}

GraphBuilder& GraphBuilder::edge(const std::string& src, const std::string& dst, double weight) {
    int& k = pair_count_[src + '\0' + dst];
    edges_.push_back({edge_id(src, dst, k), src, dst});
    ++k;
    weights_.push_back(weight);
    return *this;
}

GraphBuilder& GraphBuilder::pair(const std::string& src, const std::string& dst, double weight) {
    edge(src, dst, weight);
    return edge(dst, src, 1.0 / weight);
}

OrientedGraph GraphBuilder::graph() const { return OrientedGraph(vertices_, edges_, boundary_); }

DeformationParameter DeformationParameter::from_q(double q) {
    if (!(std::abs(q) > 0.0) || std::abs(q) > 1.0 || !std::isfinite(q))
        throw std::invalid_argument("q must satisfy 0 < |q| <= 1");
    return DeformationParameter(q);
}

DeformationParameter DeformationParameter::from_T(double T) {
    if (!(std::abs(T) >= 2.0) || !std::isfinite(T))
        throw std::invalid_argument("|T| must be at least 2");
    double a = std::abs(T);
    double p = (a - std::sqrt(a * a - 4.0)) / 2.0;
    return DeformationParameter(T > 0 ? p : -p);
}

double DeformationParameter::qint(int n) const {
    if (n <= 0) return 0.0;
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += std::pow(q_, n - 1 - 2 * k);
    return s;
}

LoadedGraph load_graph(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("parse error: ") + e.what());
    }
    if (!doc.is_object()) throw SchemaError("document: expected an object");
    if (!doc.contains("vertices") || !doc["vertices"].is_array())
        throw SchemaError("vertices: expected an array of strings");
    if (!doc.contains("edges") || !doc["edges"].is_array())
        throw SchemaError("edges: expected an array of objects");

    std::vector<std::string> vertices;
    for (const auto& v : doc["vertices"]) {
        if (!v.is_string()) throw SchemaError("vertices: expected an array of strings");
        vertices.push_back(v.get<std::string>());
    }
    std::vector<Edge> edges;
    Cost w;
    std::size_t weighted = 0;
    for (const auto& e : doc["edges"]) {
        if (!e.is_object()) throw SchemaError("edges: expected an array of objects");
        for (const char* key : {"id", "src", "dst"})
            if (!e.contains(key) || !e[key].is_string())
                throw SchemaError(std::string("edges[].") + key + ": expected a string");
        edges.push_back({e["id"].get<std::string>(), e["src"].get<std::string>(),
                         e["dst"].get<std::string>()});
        if (e.contains("weight")) {
            if (!e["weight"].is_number()) throw SchemaError("edges[].weight: expected a number");
            w.push_back(e["weight"].get<double>());
            ++weighted;
        }
    }
    if (weighted != 0 && weighted != edges.size())
        throw SchemaError("edges[].weight: either every edge or no edge carries a weight");

    std::set<std::string> boundary;
    if (doc.contains("boundary")) {
        if (!doc["boundary"].is_array()) throw SchemaError("boundary: expected an array of strings");
        for (const auto& b : doc["boundary"]) {
            if (!b.is_string()) throw SchemaError("boundary: expected an array of strings");
            boundary.insert(b.get<std::string>());
        }
    }
    LoadedGraph out;
    out.graph = OrientedGraph(std::move(vertices), std::move(edges), std::move(boundary));
    if (weighted) {
        try {
            validate_cost(out.graph, w);
        } catch (const std::invalid_argument& e) {
            throw SchemaError(std::string("edges[].weight: ") + e.what());
        }
        out.cost = std::move(w);
    }
    for (const char* key : {"q", "T"}) {
        if (!doc.contains(key)) continue;
        if (!doc[key].is_number()) throw SchemaError(std::string(key) + ": expected a number");
        (key[0] == 'q' ? out.q : out.T) = doc[key].get<double>();
    }
    return out;
}

std::string save_graph(const OrientedGraph& g, const Cost* w, std::optional<double> q) {
    json doc;
    doc["vertices"] = g.vertices();
    json edges = json::array();
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        const Edge& ed = g.edges()[e];
        json je = {{"id", ed.id}, {"src", ed.src}, {"dst", ed.dst}};
        if (w) je["weight"] = (*w)[e];
        edges.push_back(je);
    }
    doc["edges"] = edges;
    if (!g.boundary().empty()) doc["boundary"] = g.boundary();
    if (q) doc["q"] = *q;
    return doc.dump(2);
}

namespace {

std::string dot_quote(const std::string& s) {
    std::string r = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') r += '\\';
        r += c;
    }
    return r + "\"";
}

std::string six_digits(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

} // namespace

std::string to_dot(const OrientedGraph& g, const Cost* w) {
    if (g.num_vertices() == 0) return "digraph { }\n";
    std::ostringstream os;
    os << "digraph {\n";
    for (const auto& v : g.vertices()) {
        os << "  " << dot_quote(v);
        if (g.is_boundary(v)) os << " [style=dashed]";
        os << ";\n";
    }
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        const Edge& ed = g.edges()[e];
        os << "  " << dot_quote(ed.src) << " -> " << dot_quote(ed.dst);
        if (w) os << " [label=" << dot_quote(six_digits((*w)[e])) << "]";
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

std::vector<std::size_t> undirected_distances(const OrientedGraph& g,
                                              const std::vector<std::size_t>& sources) {
    const std::size_t inf = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> d(g.num_vertices(), inf);
    std::deque<std::size_t> queue;
    for (auto s : sources) {
        d[s] = 0;
        queue.push_back(s);
    }
    while (!queue.empty()) {
        auto v = queue.front();
        queue.pop_front();
        auto visit = [&](std::size_t u) {
            if (d[u] == inf) {
                d[u] = d[v] + 1;
                queue.push_back(u);
            }
        };
        for (auto e : g.out_edges(v)) visit(g.dst(e));
        for (auto e : g.in_edges(v)) visit(g.src(e));
    }
    return d;
}

bool is_connected(const OrientedGraph& g) {
    if (g.num_vertices() == 0) return true;
    auto d = undirected_distances(g, {0});
    return std::none_of(d.begin(), d.end(),
                        [](std::size_t x) { return x == std::numeric_limits<std::size_t>::max(); });
}

DegreeBound degree_bound_check(const OrientedGraph& g, double T) {
    std::size_t deg = 0;
    for (std::size_t v = 0; v < g.num_vertices(); ++v) deg = std::max(deg, g.out_edges(v).size());
    return {deg, static_cast<double>(deg) <= T * T};
}

NStepResult n_step(const OrientedGraph& g, const Cost& w, double T, int n) {
    if (n <= 0) throw std::invalid_argument("n_step: n must be positive");
    validate_cost(g, w);

    GraphBuilder b;
    std::vector<std::size_t> old_boundary;
    for (std::size_t v = 0; v < g.num_vertices(); ++v)
        if (g.is_boundary(v)) old_boundary.push_back(v);
    auto dist = undirected_distances(g, old_boundary);
    for (std::size_t v = 0; v < g.num_vertices(); ++v)
        b.vertex(g.vertices()[v], dist[v] < static_cast<std::size_t>(n));

    // Depth-first over out-edges in edge order gives a deterministic path order.
    struct Frame {
        std::size_t vertex;
        double weight;
        int depth;
    };
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        std::vector<Frame> stack{{v, 1.0, 0}};
        while (!stack.empty()) {
            Frame f = stack.back();
            stack.pop_back();
            if (f.depth == n) {
                b.edge(g.vertices()[v], g.vertices()[f.vertex], f.weight);
                continue;
            }
            const auto& out = g.out_edges(f.vertex);
            for (auto it = out.rbegin(); it != out.rend(); ++it)
                stack.push_back({g.dst(*it), f.weight * w[*it], f.depth + 1});
        }
    }
    double Tn = std::pow(T, n) * ((n % 2 == 1) ? 1.0 : -1.0);
    return {b.graph(), b.cost(), Tn};
}

} // namespace qhs
