#include "flowseg/maxflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace flowseg {

namespace {
// Residual capacities below this are treated as zero, both for admissibility
// and for the final reachability pass, so rounding dust cannot open arcs.
constexpr double kEps = 1e-12;
}  // namespace

FlowNetwork::FlowNetwork(int node_count, int source, int sink)
    : source_(source), sink_(sink), adjacency_(node_count) {
    if (node_count < 2) throw MalformedNetwork("network needs at least two nodes");
    if (source < 0 || source >= node_count || sink < 0 || sink >= node_count)
        throw MalformedNetwork("terminal index out of range");
    if (source == sink) throw MalformedNetwork("source and sink must differ");
}

int FlowNetwork::add_node() {
    adjacency_.emplace_back();
    return node_count() - 1;
}

void FlowNetwork::add_arc(int from, int to, double cap, double rev_cap) {
    if (from < 0 || from >= node_count() || to < 0 || to >= node_count())
        throw MalformedNetwork("arc endpoint out of range");
    if (from == to) throw MalformedNetwork("self arcs are not allowed");
    if (!std::isfinite(cap) || cap < 0.0 || !std::isfinite(rev_cap) || rev_cap < 0.0)
        throw MalformedNetwork("arc capacities must be finite and non-negative");
    adjacency_[from].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({to, cap});
    adjacency_[to].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({from, rev_cap});
}

struct MaxFlowRun {
    FlowNetwork net;

    MaxFlowResult solve() {
        const int n = net.node_count();
        const int s = net.source_, t = net.sink_;
        auto& arcs = net.arcs_;
        const auto& adj = net.adjacency_;

        std::vector<int> level(n), cur(n), queue;
        queue.reserve(n);

        auto bfs = [&]() {
            std::fill(level.begin(), level.end(), -1);
            queue.assign(1, s);
            level[s] = 0;
            for (size_t head = 0; head < queue.size(); ++head) {
                const int u = queue[head];
                for (int ai : adj[u]) {
                    const auto& a = arcs[ai];
                    if (a.cap > kEps && level[a.to] < 0) {
                        level[a.to] = level[u] + 1;
                        queue.push_back(a.to);
                    }
                }
            }
            return level[t] >= 0;
        };

        double total = 0.0;
        std::vector<int> path;  // arc indices from s toward the current node
        while (bfs()) {
            std::fill(cur.begin(), cur.end(), 0);
            path.clear();
            int u = s;
            while (true) {
                if (u == t) {
                    double push = std::numeric_limits<double>::infinity();
                    for (int ai : path) push = std::min(push, arcs[ai].cap);
                    for (int ai : path) {
                        arcs[ai].cap -= push;
                        arcs[ai ^ 1].cap += push;
                    }
                    total += push;
                    size_t k = 0;
                    while (k < path.size() && arcs[path[k]].cap > kEps) ++k;
                    path.resize(k);
                    u = k == 0 ? s : arcs[path[k - 1]].to;
                    continue;
                }
                bool advanced = false;
                for (int& ci = cur[u]; ci < static_cast<int>(adj[u].size()); ++ci) {
                    const int ai = adj[u][ci];
                    const auto& a = arcs[ai];
                    if (a.cap > kEps && level[a.to] == level[u] + 1) {
                        path.push_back(ai);
                        u = a.to;
                        advanced = true;
                        break;
                    }
                }
                if (advanced) continue;
                if (u == s) break;
                level[u] = -1;
                const int ai = path.back();
                path.pop_back();
                u = arcs[ai ^ 1].to;
            }
        }

        MaxFlowResult result;
        result.value = total;
        result.source_side.assign(n, false);
        queue.assign(1, s);
        result.source_side[s] = true;
        for (size_t head = 0; head < queue.size(); ++head) {
            const int u = queue[head];
            for (int ai : adj[u]) {
                const auto& a = arcs[ai];
                if (a.cap > kEps && !result.source_side[a.to]) {
                    result.source_side[a.to] = true;
                    queue.push_back(a.to);
                }
            }
        }
        return result;
    }
};

MaxFlowResult max_flow(FlowNetwork network) {
    MaxFlowRun run{std::move(network)};
    return run.solve();
}

}  // namespace flowseg
