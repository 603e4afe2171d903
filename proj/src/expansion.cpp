#include "flowseg/expansion.hpp"

#include <chrono>
#include <string>
#include <utility>

#include "flowseg/maxflow.hpp"

namespace flowseg {

namespace {

// Source side of the cut means "keep the current label", sink side means
// "take alpha". Keeping node p costs its p->sink arc, switching costs the
// source->p arc. Edges between two variables with equal labels become one
// undirected arc pair; differing labels get an auxiliary node whose arc to
// the sink pays the current disagreement cost.
Labeling solve_move(const CrfProblem& problem, const Labeling& current, int alpha) {
    const int n = problem.num_nodes();
    std::vector<int> var_of(n, -1);
    std::vector<int> node_of;
    node_of.reserve(n);
    for (int i = 0; i < n; ++i)
        if (current.at(i) != alpha) {
            var_of[i] = static_cast<int>(node_of.size());
            node_of.push_back(i);
        }
    if (node_of.empty()) return current;

    const int kSource = 0, kSink = 1;
    FlowNetwork net(2 + static_cast<int>(node_of.size()), kSource, kSink);
    auto var_node = [](int var) { return 2 + var; };

    std::vector<double> keep_cost(node_of.size()), take_cost(node_of.size());
    for (size_t k = 0; k < node_of.size(); ++k) {
        const int u = node_of[k];
        keep_cost[k] = problem.unary(u, current.at(u));
        take_cost[k] = problem.unary(u, alpha);
    }
    // A neighbor already at alpha agrees with the move and disagrees with the
    // kept label, so it folds into the keep cost.
    problem.for_each_edge([&](int u, int v) {
        const int lu = current.at(u), lv = current.at(v);
        if (lu == alpha && lv != alpha)
            keep_cost[var_of[v]] += problem.pairwise(u, v, alpha, lv);
        else if (lv == alpha && lu != alpha)
            keep_cost[var_of[u]] += problem.pairwise(u, v, lu, alpha);
    });
    for (size_t k = 0; k < node_of.size(); ++k) {
        if (take_cost[k] > 0.0) net.add_arc(kSource, var_node(static_cast<int>(k)), take_cost[k], 0.0);
        if (keep_cost[k] > 0.0) net.add_arc(var_node(static_cast<int>(k)), kSink, keep_cost[k], 0.0);
    }

    problem.for_each_edge([&](int u, int v) {
        const int lu = current.at(u), lv = current.at(v);
        if (lu == alpha || lv == alpha) return;
        const int pu = var_node(var_of[u]), pv = var_node(var_of[v]);
        if (lu == lv) {
            const double w = problem.pairwise(u, v, lu, alpha);
            if (w > 0.0) net.add_arc(pu, pv, w, w);
            return;
        }
        const double a = problem.pairwise(u, v, lu, alpha);
        const double b = problem.pairwise(u, v, alpha, lv);
        const double c = problem.pairwise(u, v, lu, lv);
        if (c > a + b + 1e-9)
            throw NonMetricPairwise("pairwise term violates the triangle inequality on edge (" +
                                    std::to_string(u) + "," + std::to_string(v) + ")");
        const int aux = net.add_node();
        if (a > 0.0) net.add_arc(pu, aux, a, a);
        if (b > 0.0) net.add_arc(aux, pv, b, b);
        if (c > 0.0) net.add_arc(aux, kSink, c, 0.0);
    });

    const MaxFlowResult cut = max_flow(std::move(net));
    Labeling next = current;
    for (size_t k = 0; k < node_of.size(); ++k)
        if (!cut.source_side[var_node(static_cast<int>(k))]) next.at(node_of[k]) = alpha;
    return next;
}

}  // namespace

Labeling expansion_move(const CrfProblem& problem, const Labeling& current, int alpha) {
    if (current.width() != problem.width() || current.height() != problem.height())
        throw DimensionMismatch("labeling does not match the problem grid");
    if (alpha < 0 || alpha >= problem.num_labels())
        throw OutOfBounds("alpha label " + std::to_string(alpha) + " out of range");

    Labeling next = solve_move(problem, current, alpha);
    // The cut is exact in exact arithmetic; this guard makes the no-increase
    // contract hold under floating point too.
    if (problem.energy(next) > problem.energy(current)) return current;
    return next;
}

SolverReport minimize(const CrfProblem& problem) {
    return minimize(problem, Labeling(problem.width(), problem.height(), 0));
}

SolverReport minimize(const CrfProblem& problem, Labeling initial) {
    constexpr int kMaxSweeps = 20;
    const auto start = std::chrono::steady_clock::now();

    SolverReport report;
    Labeling current = std::move(initial);
    double current_energy = problem.energy(current);
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool improved = false;
        for (int alpha = 0; alpha < problem.num_labels(); ++alpha) {
            Labeling moved = expansion_move(problem, current, alpha);
            const double e = problem.energy(moved);
            if (e < current_energy) {
                current = std::move(moved);
                current_energy = e;
                improved = true;
            }
        }
        report.sweep_energies.push_back(current_energy);
        ++report.sweeps;
        if (!improved) break;
    }
    report.labeling = std::move(current);
    report.final_energy = current_energy;
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace flowseg
