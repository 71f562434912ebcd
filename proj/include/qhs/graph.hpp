#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace qhs {

struct Edge {
    std::string id;
    std::string src;
    std::string dst;
};

// Finite oriented multigraph. Vertices and edges keep insertion order; all
// per-edge data elsewhere (costs, involutions) is indexed by edge position.
class OrientedGraph {
public:
    OrientedGraph() = default;
    OrientedGraph(std::vector<std::string> vertices, std::vector<Edge> edges,
                  std::set<std::string> boundary = {});

    const std::vector<std::string>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::set<std::string>& boundary() const { return boundary_; }

    std::size_t num_vertices() const { return vertices_.size(); }
    std::size_t num_edges() const { return edges_.size(); }

    bool has_vertex(const std::string& v) const { return vindex_.count(v) != 0; }
    std::size_t vertex_index(const std::string& v) const;
    std::size_t edge_index(const std::string& id) const;
    std::size_t src(std::size_t e) const { return esrc_[e]; }
    std::size_t dst(std::size_t e) const { return edst_[e]; }
    bool is_loop(std::size_t e) const { return esrc_[e] == edst_[e]; }
    bool is_boundary(std::size_t v) const { return vboundary_[v]; }
    bool is_boundary(const std::string& v) const { return boundary_.count(v) != 0; }

    const std::vector<std::size_t>& out_edges(std::size_t v) const { return out_[v]; }
    const std::vector<std::size_t>& in_edges(std::size_t v) const { return in_[v]; }
    // Edges v -> w in edge order.
    std::vector<std::size_t> edges_between(std::size_t v, std::size_t w) const;

private:
    std::vector<std::string> vertices_;
    std::vector<Edge> edges_;
    std::set<std::string> boundary_;
    std::unordered_map<std::string, std::size_t> vindex_;
    std::unordered_map<std::string, std::size_t> eindex_;
    std::vector<std::size_t> esrc_, edst_;
    std::vector<bool> vboundary_;
    std::vector<std::vector<std::size_t>> out_, in_;
};

// Edge weights aligned with OrientedGraph::edges().
using Cost = std::vector<double>;

void validate_cost(const OrientedGraph& g, const Cost& w);

// Accumulates vertices and edges, assigning ids "src→dst#k" with k counting
// earlier edges between the same ordered pair.
class GraphBuilder {
public:
    GraphBuilder& vertex(const std::string& v, bool boundary = false);
    GraphBuilder& edge(const std::string& src, const std::string& dst, double weight = 1.0);
    // Adds src->dst with weight and dst->src with 1/weight.
    GraphBuilder& pair(const std::string& src, const std::string& dst, double weight);
    OrientedGraph graph() const;
    Cost cost() const { return weights_; }

private:
    std::vector<std::string> vertices_;
    std::set<std::string> boundary_;
    std::vector<Edge> edges_;
    Cost weights_;
    std::unordered_map<std::string, int> pair_count_;
};

std::string edge_id(const std::string& src, const std::string& dst, int k);

class DeformationParameter {
public:
    static DeformationParameter from_q(double q);
    // Picks the root with 0 < |q| <= 1.
    static DeformationParameter from_T(double T);

    double q() const { return q_; }
    double T() const { return q_ + 1.0 / q_; }
    double abs_T() const { return std::abs(q_) + 1.0 / std::abs(q_); }
    int sign() const { return q_ > 0 ? 1 : -1; }
    // [n]_q as the finite sum q^{n-1} + q^{n-3} + ... + q^{1-n}.
    double qint(int n) const;
    double abs_qint(int n) const { return std::abs(qint(n)); }

private:
    explicit DeformationParameter(double q) : q_(q) {}
    double q_ = 1.0;
};

struct LoadedGraph {
    OrientedGraph graph;
    std::optional<Cost> cost;
    std::optional<double> q;
    std::optional<double> T;
};

class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

LoadedGraph load_graph(const std::string& text);
std::string save_graph(const OrientedGraph& g, const Cost* w = nullptr,
                       std::optional<double> q = std::nullopt);
std::string to_dot(const OrientedGraph& g, const Cost* w = nullptr);

bool is_connected(const OrientedGraph& g);

struct DegreeBound {
    std::size_t degree;
    bool ok;
};
DegreeBound degree_bound_check(const OrientedGraph& g, double T);

struct NStepResult {
    OrientedGraph graph;
    Cost cost;
    double T;
};
// Result boundary: old boundary plus every vertex within undirected distance
// n-1 of it.
NStepResult n_step(const OrientedGraph& g, const Cost& w, double T, int n);

// Undirected graph distances from a set of sources; unreachable = SIZE_MAX.
std::vector<std::size_t> undirected_distances(const OrientedGraph& g,
                                              const std::vector<std::size_t>& sources);

} // namespace qhs
