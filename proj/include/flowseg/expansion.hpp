#pragma once

#include <vector>

#include "flowseg/crf.hpp"

namespace flowseg {

struct SolverReport {
    Labeling labeling;
    double final_energy = 0.0;
    std::vector<double> sweep_energies;  // energy after each completed sweep
    int sweeps = 0;
    double wall_seconds = 0.0;
};

// One alpha-expansion move, solved exactly as a minimum s-t cut. Never
// returns a labeling with higher energy than `current`.
Labeling expansion_move(const CrfProblem& problem, const Labeling& current, int alpha);

// Cycles alpha over all labels in ascending order until a full sweep brings
// no energy decrease; hard cap of 20 sweeps. Starts from all-background.
SolverReport minimize(const CrfProblem& problem);
SolverReport minimize(const CrfProblem& problem, Labeling initial);

}  // namespace flowseg
