#pragma once

#include <algorithm>
#include <vector>

#include "flowseg/errors.hpp"

namespace flowseg {

// Dense row-major grid of integer labels; 0 is background.
class LabelMap {
public:
    LabelMap() = default;
    LabelMap(int width, int height, int fill = 0) : width_(width), height_(height) {
        if (width < 1 || height < 1)
            throw DimensionMismatch("label map dimensions must be positive");
        labels_.assign(static_cast<size_t>(width) * height, fill);
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int size() const noexcept { return static_cast<int>(labels_.size()); }

    int at(int index) const { return labels_[index]; }
    int& at(int index) { return labels_[index]; }
    int at(int x, int y) const { return labels_[static_cast<size_t>(y) * width_ + x]; }
    int& at(int x, int y) { return labels_[static_cast<size_t>(y) * width_ + x]; }

    const std::vector<int>& values() const noexcept { return labels_; }

    bool same_shape(const LabelMap& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_;
    }

    int max_label() const {
        return labels_.empty() ? 0 : *std::max_element(labels_.begin(), labels_.end());
    }

    friend bool operator==(const LabelMap&, const LabelMap&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<int> labels_;
};

// The CRF modules use the same grid-of-ints shape for label assignments.
using Labeling = LabelMap;

}  // namespace flowseg
