#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "flowseg/label_map.hpp"

namespace flowseg {

struct SegmentMatch {
    // (label in a, label in b), only pairs with positive overlap.
    std::vector<std::pair<int, int>> pairs;
    long long total_overlap = 0;
};

// One-to-one label correspondence maximizing total node overlap.
SegmentMatch match_segments(const LabelMap& a, const LabelMap& b);

// Jaccard index of the matched segmentations: matched overlap over the size
// of the union of both non-background supports. Two empty maps score 1.
double jaccard(const LabelMap& a, const LabelMap& b);

struct SequenceTiming {
    std::string name;
    double coarse_s = 0.0;
    double refine_s = 0.0;
    double merge_s = 0.0;
    double total_s = 0.0;
};

std::string timing_table_text(std::span<const SequenceTiming> rows);
std::string timing_table_csv(std::span<const SequenceTiming> rows);

}  // namespace flowseg
