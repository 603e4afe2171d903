#pragma once

#include <vector>

#include "flowseg/crf.hpp"
#include "flowseg/maxflow.hpp"

namespace flowseg {

struct BruteForceResult {
    Labeling labeling;
    double energy = 0.0;
};

// Exact global optimum by full enumeration in lexicographic label order
// (ties keep the lexicographically smallest labeling). Throws TooLarge when
// labels^nodes would exceed 1e7.
BruteForceResult brute_force_minimize(const CrfProblem& problem);

// Exhaustive minimum s-t cut over all 2^k partitions of the non-terminal
// nodes; capped at 25 such nodes.
double brute_force_min_cut(const FlowNetwork& network);

// Best one-to-one assignment value by permutation enumeration; matrices
// larger than 9x9 are rejected.
long long brute_force_best_assignment(const std::vector<std::vector<long long>>& value);

}  // namespace flowseg
