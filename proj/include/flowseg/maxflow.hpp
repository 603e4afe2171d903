#pragma once

#include <span>
#include <vector>

#include "flowseg/errors.hpp"

namespace flowseg {

// Directed flow network with paired reverse arcs: arc i^1 is the reverse of
// arc i. Arc and node insertion order is part of the interface; the solver
// scans both in that order, so identical construction gives identical cuts.
class FlowNetwork {
public:
    FlowNetwork(int node_count, int source, int sink);

    int add_node();
    // Adds the pair (from->to, cap) and (to->from, rev_cap).
    void add_arc(int from, int to, double cap, double rev_cap);

    int node_count() const noexcept { return static_cast<int>(adjacency_.size()); }
    int source() const noexcept { return source_; }
    int sink() const noexcept { return sink_; }
    int arc_count() const noexcept { return static_cast<int>(arcs_.size()); }

    struct Arc {
        int to;
        double cap;
    };
    const Arc& arc(int i) const { return arcs_[i]; }
    int arc_tail(int i) const { return arcs_[i ^ 1].to; }
    std::span<const int> arcs_of(int node) const { return adjacency_[node]; }

private:
    friend struct MaxFlowRun;
    int source_ = 0;
    int sink_ = 0;
    std::vector<Arc> arcs_;
    std::vector<std::vector<int>> adjacency_;
};

struct MaxFlowResult {
    double value = 0.0;
    // Residual reachability from the source after the last phase; this is
    // the canonical minimum cut.
    std::vector<bool> source_side;
};

// Dinic's algorithm. Takes the network by value; the caller's copy keeps its
// original capacities.
MaxFlowResult max_flow(FlowNetwork network);

}  // namespace flowseg
