#pragma once

#include <span>
#include <vector>

#include "flowseg/crf.hpp"
#include "flowseg/expansion.hpp"

namespace flowseg {

// 4-connected component of nodes sharing one non-background label.
struct Segment {
    int id = 0;     // 1-based, row-major discovery order
    int label = 0;  // label index in the stage's label set
    std::vector<int> nodes;         // ascending node indices
    double mean_orientation = 0.0;  // circular mean of node orientations; NaN if degenerate
    int size() const noexcept { return static_cast<int>(nodes.size()); }
};

struct PipelineConfig {
    CrfParams crf;
    int size_thresh = 0;         // <= 0 selects max(16, 0.1% of grid nodes)
    double merge_thresh = 45.0;  // degrees
};

int effective_size_thresh(const PipelineConfig& config, int num_nodes);

// Solver diagnostics for one stage; sweep_energies is non-increasing.
struct SolverTrace {
    std::vector<double> sweep_energies;
    int sweeps = 0;
    double wall_seconds = 0.0;
};

struct StageResult {
    Labeling labeling;
    std::vector<Segment> segments;
    double energy = 0.0;
    SolverTrace solver;
};

struct FlowSegment {
    int id = 0;  // 1-based, ordered by smallest node index
    std::vector<int> nodes;
    double orientation = 0.0;  // circular mean over the mask
};

struct StageTimings {
    double coarse_s = 0.0;
    double refine_s = 0.0;
    double merge_s = 0.0;
    double total_s = 0.0;
};

struct FlowResult {
    std::vector<FlowSegment> flows;
    Labeling coarse_labeling;
    Labeling fine_labeling;
    Labeling flow_labeling;  // 0 background, 1..N flow ids
    int n_coarse_segments = 0;
    int n_fine_segments = 0;
    double coarse_energy = 0.0;
    double fine_energy = 0.0;
    SolverTrace coarse_solver;
    SolverTrace fine_solver;  // empty when refinement is skipped
    StageTimings timings;
};

// Connected components of the labeling; background is never part of a segment.
std::vector<Segment> decompose(const Labeling& labeling, const MotionField& field);

// Minimize over the fixed coarse label set, then decompose.
StageResult coarse_segment(const MotionField& field, const PipelineConfig& config);

// Circular mean of the field orientations over the segment's nodes.
double mean_orientation(const Segment& segment, const MotionField& field);

// Re-minimize over orientations taken from coarse segments that clear the
// size threshold (deduplicated within 1e-6 degrees).
StageResult refine(const MotionField& field, std::span<const Segment> coarse,
                   const PipelineConfig& config);

// Per node, the largest angular distance to any 4-neighbor's orientation.
std::vector<double> orientation_gradient(const MotionField& field);

// Greedily joins adjacent segments while the mean orientation gradient along
// their shared boundary stays below merge_thresh.
std::vector<FlowSegment> merge(std::span<const Segment> fine, const MotionField& field,
                               const PipelineConfig& config);

// Full pipeline: coarse, refine, merge. A field with no qualifying coarse
// segment yields an empty flow list.
FlowResult run(const MotionField& field, const PipelineConfig& config);

}  // namespace flowseg
