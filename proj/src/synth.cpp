#include "flowseg/synth.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "flowseg/angles.hpp"

namespace flowseg {

double SeededRng::gaussian(double stddev) {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
    const double u2 = uniform();
    return stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

namespace {

[[noreturn]] void fail(int line_no, const std::string& what) {
    throw ParseError("line " + std::to_string(line_no) + ": " + what);
}

void validate(const SceneSpec& spec) {
    if (spec.width < 1 || spec.height < 1)
        throw DimensionMismatch("scene grid dimensions must be positive");
    if (spec.noise_std < 0.0) throw Error("noise std must be non-negative");
    if (spec.background_magnitude < 0.0) throw Error("background magnitude must be non-negative");
    for (const LanePrimitive& lane : spec.lanes) {
        if (lane.w < 1 || lane.h < 1) throw OutOfBounds("lane extent must be positive");
        if (lane.x < 0 || lane.y < 0 || lane.x + lane.w > spec.width ||
            lane.y + lane.h > spec.height)
            throw OutOfBounds("lane exceeds the scene grid");
        if (lane.magnitude < 0.0) throw Error("lane magnitude must be non-negative");
    }
    for (const RingPrimitive& ring : spec.rings) {
        if (!(ring.r_inner > 0.0) || !(ring.r_outer > ring.r_inner))
            throw Error("ring radii must satisfy 0 < r_inner < r_outer");
        if (ring.cx - ring.r_outer < 0.0 || ring.cx + ring.r_outer > spec.width - 1 ||
            ring.cy - ring.r_outer < 0.0 || ring.cy + ring.r_outer > spec.height - 1)
            throw OutOfBounds("ring exceeds the scene grid");
        if (ring.magnitude < 0.0) throw Error("ring magnitude must be non-negative");
    }
}

}  // namespace

SceneSpec load_scene_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");

    SceneSpec spec;
    bool saw_grid = false;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream is(line);
        std::string key;
        if (!(is >> key)) continue;

        auto want = [&](auto&... fields) {
            if (!((is >> fields) && ...)) fail(line_no, "malformed '" + key + "' entry");
        };
        if (key == "grid") {
            want(spec.width, spec.height);
            saw_grid = true;
        } else if (key == "seed") {
            want(spec.seed);
        } else if (key == "noise") {
            want(spec.noise_std);
        } else if (key == "background") {
            want(spec.background_magnitude);
        } else if (key == "lane") {
            LanePrimitive lane;
            want(lane.x, lane.y, lane.w, lane.h, lane.orientation, lane.magnitude);
            spec.lanes.push_back(lane);
        } else if (key == "ring") {
            RingPrimitive ring;
            std::string direction;
            want(ring.cx, ring.cy, ring.r_inner, ring.r_outer, direction, ring.magnitude);
            if (direction == "cw")
                ring.clockwise = true;
            else if (direction == "ccw")
                ring.clockwise = false;
            else
                fail(line_no, "ring direction must be 'cw' or 'ccw'");
            spec.rings.push_back(ring);
        } else {
            fail(line_no, "unknown key '" + key + "'");
        }
        std::string extra;
        if (is >> extra) fail(line_no, "trailing content '" + extra + "'");
    }
    if (!saw_grid) throw HeaderError("'" + path + "' has no 'grid <width> <height>' entry");
    validate(spec);
    return spec;
}

SynthScene generate(const SceneSpec& spec) {
    validate(spec);

    const int w = spec.width, h = spec.height;
    std::vector<MotionVec> vectors(static_cast<size_t>(w) * h);
    LabelMap gt(w, h, 0);

    int next_id = 0;
    auto claim = [&](int x, int y, int id, const MotionVec& v) {
        const int i = y * w + x;
        if (gt.at(i) != 0)
            throw OverlapError("primitives " + std::to_string(gt.at(i)) + " and " +
                               std::to_string(id) + " overlap at node (" + std::to_string(x) +
                               "," + std::to_string(y) + ")");
        gt.at(i) = id;
        vectors[i] = v;
    };

    for (const LanePrimitive& lane : spec.lanes) {
        const int id = ++next_id;
        const double rad = deg_to_rad(lane.orientation);
        const MotionVec v{lane.magnitude * std::cos(rad), lane.magnitude * std::sin(rad)};
        for (int y = lane.y; y < lane.y + lane.h; ++y)
            for (int x = lane.x; x < lane.x + lane.w; ++x) claim(x, y, id, v);
    }
    for (const RingPrimitive& ring : spec.rings) {
        const int id = ++next_id;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const double rx = x - ring.cx, ry = y - ring.cy;
                const double r = std::hypot(rx, ry);
                if (r < ring.r_inner || r > ring.r_outer) continue;
                // Unit tangent; cw/ccw in grid coordinates (y grows downward).
                const double tx = ring.clockwise ? ry / r : -ry / r;
                const double ty = ring.clockwise ? -rx / r : rx / r;
                claim(x, y, id, {ring.magnitude * tx, ring.magnitude * ty});
            }
    }

    SeededRng rng(spec.seed);
    for (size_t i = 0; i < vectors.size(); ++i) {
        if (gt.at(static_cast<int>(i)) == 0 && spec.background_magnitude > 0.0) {
            const double angle = rng.uniform(0.0, 2.0 * kPi);
            vectors[i] = {spec.background_magnitude * std::cos(angle),
                          spec.background_magnitude * std::sin(angle)};
        }
        if (spec.noise_std > 0.0) {
            vectors[i].dx += rng.gaussian(spec.noise_std);
            vectors[i].dy += rng.gaussian(spec.noise_std);
        }
    }

    return {MotionField(w, h, std::move(vectors)), std::move(gt)};
}

}  // namespace flowseg
