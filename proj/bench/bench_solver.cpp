// Wall-clock comparison of solve_cost (OpenMP) against solve_cost_serial.

#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include <omp.h>

#include "qhs/catalog.hpp"
#include "qhs/solver.hpp"

using namespace qhs;

namespace {

struct Case {
    std::string label;
    OrientedGraph graph;
    DeformationParameter dp;
};

template <class F>
double best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

// Connected symmetric multigraph on n vertices: a path plus random extra edges and loops.
OrientedGraph random_graph(std::mt19937_64& rng, int n) {
    std::uniform_int_distribution<int> mult(0, 2);
    GraphBuilder b;
    for (int v = 0; v < n; ++v) b.vertex(std::to_string(v));
    for (int v = 0; v < n; ++v) {
        for (int k = mult(rng); k > 0; --k) b.edge(std::to_string(v), std::to_string(v));
        for (int u = v + 1; u < n; ++u)
            for (int k = (u == v + 1 ? 1 : 0) + mult(rng) / 2; k > 0; --k)
                b.edge(std::to_string(v), std::to_string(u)).edge(std::to_string(u), std::to_string(v));
    }
    return b.graph();
}

} // namespace

int main(int argc, char** argv) {
    const int reps = argc > 1 ? std::stoi(argv[1]) : 3;
    std::vector<Case> cases;
    cases.push_back({"E6_affine q=1", catalog("E6_affine", {1.0, {}, {}, {}, {}}).graph, DeformationParameter::from_q(1.0)});
    cases.push_back({"E8_affine q=-1", catalog("E8_affine", {-1.0, {}, {}, {}, {}}).graph, DeformationParameter::from_q(-1.0)});
    cases.push_back({"D_affine n=8 q=1", catalog("D_affine", {1.0, {}, 8, {}, {}}).graph, DeformationParameter::from_q(1.0)});
    cases.push_back({"A_cycle n=6 q=-0.5", catalog("A_cycle", {-0.5, {}, 6, {}, {}}).graph, DeformationParameter::from_q(-0.5)});
    cases.push_back({"point_loops n=6 q=-0.2", catalog("point_loops", {{}, {}, {}, {}, 6}).graph, DeformationParameter::from_q(-0.2)});
    std::mt19937_64 rng(7);
    for (int n : {4, 6, 8}) cases.push_back({"random n=" + std::to_string(n) + " q=-0.1", random_graph(rng, n), DeformationParameter::from_q(-0.1)});

    std::printf("threads: %d, best of %d\n", omp_get_max_threads(), reps);
    std::printf("%-26s %12s %12s %8s %s\n", "case", "serial [s]", "parallel [s]", "speedup", "agree");
    for (const auto& c : cases) {
        SolveResult s, p;
        double ts = best_of(reps, [&] { s = solve_cost_serial(c.graph, c.dp); });
        double tp = best_of(reps, [&] { p = solve_cost(c.graph, c.dp); });
        bool agree = s.feasible == p.feasible && s.solutions.size() == p.solutions.size();
        for (std::size_t i = 0; agree && i < s.solutions.size(); ++i) agree = s.solutions[i].cost == p.solutions[i].cost;
        std::printf("%-26s %12.5f %12.5f %8.2f %s\n", c.label.c_str(), ts, tp, ts / tp, agree ? "yes" : "NO");
    }
}
