#pragma once

#include <span>
#include <string>
#include <vector>

#include "flowseg/errors.hpp"

namespace flowseg {

struct MotionVec {
    double dx = 0.0;
    double dy = 0.0;
    friend bool operator==(const MotionVec&, const MotionVec&) = default;
};

// One decoded motion vector covering a rectangle of 4x4-pixel blocks.
struct BlockMotionRecord {
    int frame = 0;
    int block_x = 0;
    int block_y = 0;
    int block_w = 1;  // extent in blocks, one of {1, 2, 4}
    int block_h = 1;
    double dx = 0.0;  // pixels per frame
    double dy = 0.0;
};

// One frame of per-cell vectors, row-major width*height.
using FrameGrid = std::vector<MotionVec>;

// Temporally averaged vector field on the block grid, with cached magnitude
// and orientation channels. Immutable after construction.
class MotionField {
public:
    MotionField(int width, int height, std::vector<MotionVec> vectors);
    static MotionField zero(int width, int height);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int num_nodes() const noexcept { return static_cast<int>(vectors_.size()); }

    const MotionVec& vec(int index) const { return vectors_[index]; }
    const MotionVec& vec(int x, int y) const {
        return vectors_[static_cast<size_t>(y) * width_ + x];
    }
    double magnitude(int index) const { return magnitude_[index]; }
    // Degrees in (-180, 180]; the exactly-zero vector reports 0.
    double orientation(int index) const { return orientation_[index]; }

    std::span<const MotionVec> vectors() const noexcept { return vectors_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<MotionVec> vectors_;
    std::vector<double> magnitude_;
    std::vector<double> orientation_;
};

// Expands block records onto per-frame cell grids. Cells no record covers
// stay (0, 0). A cell covered twice in one frame is an OverlapError.
std::vector<FrameGrid> replicate(std::span<const BlockMotionRecord> records, int width,
                                 int height, int frame_count);

// Componentwise arithmetic mean across frames.
MotionField temporal_mean(std::span<const FrameGrid> frames, int width, int height);

struct FrameRecords {
    int width = 0;
    int height = 0;
    int frame_count = 0;
    std::vector<BlockMotionRecord> records;
};

MotionField load_mean_field(const std::string& path);
void save_mean_field(const MotionField& field, const std::string& path);
FrameRecords load_frame_records(const std::string& path);

// replicate + temporal_mean in one step.
MotionField mean_field_from_records(const FrameRecords& input);

}  // namespace flowseg
