#include "flowseg/crf.hpp"

#include <string>

#include "flowseg/angles.hpp"

namespace flowseg {

LabelSet::LabelSet(std::vector<double> orientations) : orientations_(std::move(orientations)) {
    for (double& o : orientations_) o = wrap_degrees(o);
    for (size_t i = 0; i < orientations_.size(); ++i)
        for (size_t j = i + 1; j < orientations_.size(); ++j)
            if (orientations_[i] == orientations_[j])
                throw Error("label set repeats orientation " + std::to_string(orientations_[i]));
}

LabelSet LabelSet::coarse() {
    std::vector<double> orientations(36);
    for (int i = 1; i <= 36; ++i) orientations[i - 1] = -180.0 + 10.0 * i;
    return LabelSet(std::move(orientations));
}

double LabelSet::orientation(int label) const {
    if (label < 1 || label >= count())
        throw OutOfBounds("label " + std::to_string(label) + " has no orientation");
    return orientations_[label - 1];
}

CrfProblem::CrfProblem(MotionField field, LabelSet labels, CrfParams params)
    : field_(std::move(field)), labels_(std::move(labels)), params_(params) {
    if (params_.tau < 0.0 || params_.c1 < 0.0 || params_.c2 < 0.0 || params_.c3 < 0.0)
        throw Error("CRF parameters must be non-negative");
}

double CrfProblem::unary(int node, int label) const {
    const bool moving = field_.magnitude(node) >= params_.tau;
    if (label == 0) return moving ? params_.c1 : 0.0;
    if (!moving) return params_.c2;
    return angular_distance(field_.orientation(node), labels_.orientation(label));
}

double CrfProblem::pairwise(int u, int v, int label_u, int label_v) const {
    if (label_u == label_v) return 0.0;
    return pairwise_weight(u, v);
}

double CrfProblem::pairwise_weight(int u, int v) const {
    return params_.c3 * (360.0 - angular_distance(field_.orientation(u), field_.orientation(v)));
}

double CrfProblem::energy(const Labeling& labeling) const {
    if (labeling.width() != width() || labeling.height() != height())
        throw DimensionMismatch("labeling does not match the problem grid");
    double total = 0.0;
    for (int i = 0; i < num_nodes(); ++i) {
        const int label = labeling.at(i);
        if (label < 0 || label >= num_labels())
            throw OutOfBounds("labeling uses label " + std::to_string(label));
        total += unary(i, label);
    }
    for_each_edge([&](int u, int v) { total += pairwise(u, v, labeling.at(u), labeling.at(v)); });
    return total;
}

}  // namespace flowseg
