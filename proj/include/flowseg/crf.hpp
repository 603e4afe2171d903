#pragma once

#include <span>
#include <vector>

#include "flowseg/label_map.hpp"
#include "flowseg/motion_field.hpp"

namespace flowseg {

struct CrfParams {
    double tau = 1.0;  // background magnitude threshold, pixels per frame
    double c1 = 90.0;  // cost of labeling a moving node background
    double c2 = 90.0;  // cost of giving a static node an orientation label
    double c3 = 0.25;  // pairwise weight
};

// Label 0 is background; each label >= 1 carries one support orientation.
class LabelSet {
public:
    LabelSet() = default;
    explicit LabelSet(std::vector<double> orientations);
    // 36 orientations, -170..180 in 10 degree steps.
    static LabelSet coarse();

    int count() const noexcept { return 1 + static_cast<int>(orientations_.size()); }
    double orientation(int label) const;
    std::span<const double> orientations() const noexcept { return orientations_; }

private:
    std::vector<double> orientations_;
};

// Grid CRF over the motion field with 4-connectivity.
class CrfProblem {
public:
    CrfProblem(MotionField field, LabelSet labels, CrfParams params);

    const MotionField& field() const noexcept { return field_; }
    const LabelSet& labels() const noexcept { return labels_; }
    const CrfParams& params() const noexcept { return params_; }
    int width() const noexcept { return field_.width(); }
    int height() const noexcept { return field_.height(); }
    int num_nodes() const noexcept { return field_.num_nodes(); }
    int num_labels() const noexcept { return labels_.count(); }

    double unary(int node, int label) const;
    // u and v must be 4-neighbors; zero for equal labels.
    double pairwise(int u, int v, int label_u, int label_v) const;
    // Cost any differing label pair pays on edge (u, v).
    double pairwise_weight(int u, int v) const;
    // Total energy; each undirected edge counted once.
    double energy(const Labeling& labeling) const;

    // Visits each undirected edge once: per node, right then down, row-major.
    template <class Fn>
    void for_each_edge(Fn&& fn) const {
        const int w = field_.width(), h = field_.height();
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const int u = y * w + x;
                if (x + 1 < w) fn(u, u + 1);
                if (y + 1 < h) fn(u, u + w);
            }
    }

private:
    MotionField field_;
    LabelSet labels_;
    CrfParams params_;
};

}  // namespace flowseg
