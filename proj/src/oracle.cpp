#include "flowseg/oracle.hpp"

#include <algorithm>
#include <climits>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

namespace flowseg {

BruteForceResult brute_force_minimize(const CrfProblem& problem) {
    const int n = problem.num_nodes();
    const int k = problem.num_labels();
    constexpr long long kCap = 10'000'000;

    long long combos = 1;
    for (int i = 0; i < n; ++i) {
        if (combos > kCap / k)
            throw TooLarge("enumeration of " + std::to_string(k) + "^" + std::to_string(n) +
                           " labelings exceeds the 1e7 cap");
        combos *= k;
    }

    Labeling current(problem.width(), problem.height(), 0);
    Labeling best = current;
    double best_energy = problem.energy(current);

    // Odometer with the last node as the least significant digit walks the
    // labelings in lexicographic order; strict improvement keeps the
    // lexicographically smallest optimum.
    auto advance = [&]() {
        for (int i = n - 1; i >= 0; --i) {
            if (++current.at(i) < k) return true;
            current.at(i) = 0;
        }
        return false;
    };
    while (advance()) {
        const double e = problem.energy(current);
        if (e < best_energy) {
            best_energy = e;
            best = current;
        }
    }
    return {std::move(best), best_energy};
}

double brute_force_min_cut(const FlowNetwork& network) {
    std::vector<int> internal;
    for (int i = 0; i < network.node_count(); ++i)
        if (i != network.source() && i != network.sink()) internal.push_back(i);
    if (internal.size() > 25)
        throw TooLarge("cut enumeration capped at 25 non-terminal nodes, got " +
                       std::to_string(internal.size()));

    std::vector<char> in_source(network.node_count(), 0);
    double best = std::numeric_limits<double>::infinity();
    for (std::uint64_t mask = 0; mask < (1ull << internal.size()); ++mask) {
        std::fill(in_source.begin(), in_source.end(), 0);
        in_source[network.source()] = 1;
        for (size_t b = 0; b < internal.size(); ++b)
            if (mask & (1ull << b)) in_source[internal[b]] = 1;
        double value = 0.0;
        for (int ai = 0; ai < network.arc_count(); ++ai)
            if (in_source[network.arc_tail(ai)] && !in_source[network.arc(ai).to])
                value += network.arc(ai).cap;
        best = std::min(best, value);
    }
    return best;
}

long long brute_force_best_assignment(const std::vector<std::vector<long long>>& value) {
    if (value.empty() || value[0].empty()) return 0;
    const size_t rows = value.size(), cols = value[0].size();
    const bool transposed = rows > cols;
    const size_t n = transposed ? cols : rows;
    const size_t m = transposed ? rows : cols;
    if (m > 9) throw TooLarge("assignment enumeration capped at 9x9 matrices");

    auto at = [&](size_t i, size_t j) { return transposed ? value[j][i] : value[i][j]; };

    long long best = LLONG_MIN;
    std::vector<size_t> pick(n);
    // Choose an ordered selection of n columns out of m.
    auto recurse = [&](auto&& self, size_t row, std::vector<char>& used) -> void {
        if (row == n) {
            long long total = 0;
            for (size_t i = 0; i < n; ++i) total += at(i, pick[i]);
            best = std::max(best, total);
            return;
        }
        for (size_t j = 0; j < m; ++j) {
            if (used[j]) continue;
            used[j] = 1;
            pick[row] = j;
            self(self, row + 1, used);
            used[j] = 0;
        }
    };
    std::vector<char> used(m, 0);
    recurse(recurse, 0, used);
    return best;
}

}  // namespace flowseg
