#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "flowseg/label_map.hpp"
#include "flowseg/motion_field.hpp"

namespace flowseg {

// mt19937_64 with hand-rolled value mappings so streams are identical across
// platforms (the standard distributions are not).
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t raw() { return engine_(); }
    // [0, 1), 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    // Inclusive on both ends.
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    // Box-Muller, two fresh uniforms per call.
    double gaussian(double stddev);

private:
    std::mt19937_64 engine_;
};

struct LanePrimitive {
    int x = 0, y = 0, w = 0, h = 0;
    double orientation = 0.0;  // degrees
    double magnitude = 0.0;    // pixels per frame
};

struct RingPrimitive {
    double cx = 0.0, cy = 0.0;
    double r_inner = 0.0, r_outer = 0.0;
    bool clockwise = false;
    double magnitude = 0.0;
};

struct SceneSpec {
    int width = 0, height = 0;
    std::uint64_t seed = 0;
    double noise_std = 0.0;
    double background_magnitude = 0.0;
    std::vector<LanePrimitive> lanes;
    std::vector<RingPrimitive> rings;
};

SceneSpec load_scene_spec(const std::string& path);

struct SynthScene {
    MotionField field;
    LabelMap ground_truth;  // primitive ids 1..P in spec order, 0 background
};

// Deterministic for a fixed spec: primitives first, then per-cell background
// direction draws and Gaussian component noise in row-major order.
SynthScene generate(const SceneSpec& spec);

}  // namespace flowseg
