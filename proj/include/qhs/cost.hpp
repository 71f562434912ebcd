#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qhs/graph.hpp"

namespace qhs {

inline constexpr double kVerifyTol = 1e-9;
inline constexpr double kSolverTol = 1e-7;

// pair[e] is the partner of edge e; pair[e] == e marks a fixed loop.
struct Involution {
    std::vector<std::size_t> pair;
};

// Self-inverse, swaps endpoints, fixed points only on loops.
bool is_valid_involution(const OrientedGraph& g, const Involution& inv);

double source_cost(const OrientedGraph& g, const Cost& w, const std::string& v);
double source_cost(const OrientedGraph& g, const Cost& w, std::size_t v);

std::optional<Involution> find_involution(const OrientedGraph& g, const Cost& w,
                                          bool require_loop_free, double tol = kVerifyTol);

struct FairnessReport {
    bool pass = false;
    std::vector<std::string> reasons;
    std::vector<double> source_costs;  // per vertex, boundary included
    std::optional<Involution> witness;
    bool loop_parity_ok = true;
};

struct FairnessOptions {
    double tol = kVerifyTol;
    bool require_connected = false;
};

// T is taken as a plain real so that graphs of norm below 2 can be checked.
FairnessReport verify_fair_balanced(const OrientedGraph& g, const Cost& w, double T,
                                    const FairnessOptions& opt = {});
FairnessReport verify_fair_balanced(const OrientedGraph& g, const Cost& w,
                                    const DeformationParameter& dp,
                                    const FairnessOptions& opt = {});

Eigen::MatrixXi adjacency(const OrientedGraph& g);
bool is_symmetric(const OrientedGraph& g);

struct PowerResult {
    double value;
    Eigen::VectorXd vector;  // nonnegative, unit 2-norm
    int iterations;
};
// Largest eigenvalue of a symmetric nonnegative matrix; iterates on A + I
// from the all-ones vector until the residual |Ax - lambda x| <= tol.
PowerResult perron_power(const Eigen::MatrixXd& A, double tol, int max_iter = 100000);

double graph_norm(const OrientedGraph& g, double tol = kVerifyTol);

std::optional<Cost> perron_cost(const OrientedGraph& g, double T, double tol = 1e-8);

std::vector<double> random_walk(const OrientedGraph& g, const Cost& w,
                                const DeformationParameter& dp, double tol = kVerifyTol);

enum class AdeTag {
    A_cycle,
    D_affine,
    E6_affine,
    E7_affine,
    E8_affine,
    A_inf_inf,
    D_inf_star,
    A_inf,
    A_prime,
    D_prime,
    A_inf_prime,
    point_double_loop,
    none
};

std::string to_string(AdeTag t);
AdeTag classify_ade(const OrientedGraph& g);
bool is_infinite_type(AdeTag t);

// Finite graphs: norm 2. Windows of infinite families: the window shape is
// recognised by classify_ade, since a finite truncation has norm below 2.
bool is_coideal_type(const OrientedGraph& g, double tol = 1e-8);

} // namespace qhs
