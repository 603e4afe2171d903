#include "flowseg/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>

#include "flowseg/angles.hpp"

namespace flowseg {

namespace {

double now_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

// NaN instead of a throw; decompose records degenerate means as-is.
double circular_mean_or_nan(std::span<const int> nodes, const MotionField& field) {
    double sx = 0.0, sy = 0.0;
    for (int u : nodes) {
        const double rad = deg_to_rad(field.orientation(u));
        sx += std::cos(rad);
        sy += std::sin(rad);
    }
    if (std::hypot(sx, sy) < 1e-9) return std::numeric_limits<double>::quiet_NaN();
    return wrap_degrees(rad_to_deg(std::atan2(sy, sx)));
}

}  // namespace

int effective_size_thresh(const PipelineConfig& config, int num_nodes) {
    if (config.size_thresh > 0) return config.size_thresh;
    return std::max(16, num_nodes / 1000);
}

std::vector<Segment> decompose(const Labeling& labeling, const MotionField& field) {
    if (labeling.width() != field.width() || labeling.height() != field.height())
        throw DimensionMismatch("labeling does not match the field grid");

    const int w = labeling.width(), h = labeling.height();
    std::vector<int> seg_of(labeling.size(), 0);
    std::vector<Segment> segments;
    std::vector<int> stack;

    for (int i = 0; i < labeling.size(); ++i) {
        if (labeling.at(i) == 0 || seg_of[i] != 0) continue;
        const int label = labeling.at(i);
        Segment seg;
        seg.id = static_cast<int>(segments.size()) + 1;
        seg.label = label;
        seg_of[i] = seg.id;
        stack.assign(1, i);
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            seg.nodes.push_back(u);
            const int x = u % w, y = u / w;
            auto visit = [&](int vx, int vy) {
                if (vx < 0 || vx >= w || vy < 0 || vy >= h) return;
                const int v = vy * w + vx;
                if (seg_of[v] == 0 && labeling.at(v) == label) {
                    seg_of[v] = seg.id;
                    stack.push_back(v);
                }
            };
            visit(x - 1, y);
            visit(x + 1, y);
            visit(x, y - 1);
            visit(x, y + 1);
        }
        std::sort(seg.nodes.begin(), seg.nodes.end());
        seg.mean_orientation = circular_mean_or_nan(seg.nodes, field);
        segments.push_back(std::move(seg));
    }
    return segments;
}

StageResult coarse_segment(const MotionField& field, const PipelineConfig& config) {
    CrfProblem problem(field, LabelSet::coarse(), config.crf);
    SolverReport solved = minimize(problem);
    std::vector<Segment> segments = decompose(solved.labeling, field);
    return {std::move(solved.labeling), std::move(segments), solved.final_energy,
            {std::move(solved.sweep_energies), solved.sweeps, solved.wall_seconds}};
}

double mean_orientation(const Segment& segment, const MotionField& field) {
    if (segment.nodes.empty()) throw DegenerateMean("segment has no nodes");
    std::vector<double> orientations;
    orientations.reserve(segment.nodes.size());
    for (int u : segment.nodes) orientations.push_back(field.orientation(u));
    return circular_mean(orientations);
}

StageResult refine(const MotionField& field, std::span<const Segment> coarse,
                   const PipelineConfig& config) {
    const int thresh = effective_size_thresh(config, field.num_nodes());
    std::vector<double> orientations;
    for (const Segment& s : coarse) {
        if (s.size() <= thresh) continue;
        const double mean = mean_orientation(s, field);
        bool duplicate = false;
        for (double o : orientations)
            if (angular_distance(o, mean) < 1e-6) {
                duplicate = true;
                break;
            }
        if (!duplicate) orientations.push_back(mean);
    }
    if (orientations.empty())
        throw NoQualifyingSegments("no coarse segment exceeds " + std::to_string(thresh) +
                                   " nodes");

    CrfProblem problem(field, LabelSet(std::move(orientations)), config.crf);
    SolverReport solved = minimize(problem);
    std::vector<Segment> segments = decompose(solved.labeling, field);
    return {std::move(solved.labeling), std::move(segments), solved.final_energy,
            {std::move(solved.sweep_energies), solved.sweeps, solved.wall_seconds}};
}

std::vector<double> orientation_gradient(const MotionField& field) {
    const int w = field.width(), h = field.height();
    std::vector<double> gradient(field.num_nodes(), 0.0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const int u = y * w + x;
            double g = 0.0;
            auto visit = [&](int vx, int vy) {
                if (vx < 0 || vx >= w || vy < 0 || vy >= h) return;
                g = std::max(g,
                             angular_distance(field.orientation(u),
                                              field.orientation(vy * w + vx)));
            };
            visit(x - 1, y);
            visit(x + 1, y);
            visit(x, y - 1);
            visit(x, y + 1);
            gradient[u] = g;
        }
    return gradient;
}

std::vector<FlowSegment> merge(std::span<const Segment> fine, const MotionField& field,
                               const PipelineConfig& config) {
    if (fine.empty()) return {};
    const int w = field.width(), h = field.height();

    // Canonical group ids by smallest node index, so the outcome does not
    // depend on how the caller numbered the segments.
    std::vector<size_t> order(fine.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return fine[a].nodes.front() < fine[b].nodes.front();
    });

    const int count = static_cast<int>(fine.size());
    std::vector<int> owner(field.num_nodes(), 0);
    std::vector<std::vector<int>> group_nodes(count + 1);
    std::vector<long long> group_size(count + 1, 0);
    std::vector<char> alive(count + 1, 0);
    for (int g = 1; g <= count; ++g) {
        const Segment& s = fine[order[g - 1]];
        if (s.nodes.empty()) throw Error("segment " + std::to_string(s.id) + " has no nodes");
        group_nodes[g] = s.nodes;
        group_size[g] = s.size();
        alive[g] = 1;
        for (int u : s.nodes) {
            if (owner[u] != 0) throw OverlapError("segments overlap at node " + std::to_string(u));
            owner[u] = g;
        }
    }

    struct Boundary {
        double sum = 0.0;
        long long count = 0;
    };

    while (true) {
        std::map<std::pair<int, int>, Boundary> boundaries;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const int u = y * w + x;
                const int a = owner[u];
                if (a == 0) continue;
                auto touch = [&](int v) {
                    const int b = owner[v];
                    if (b == 0 || b == a) return;
                    auto& edge = boundaries[{std::min(a, b), std::max(a, b)}];
                    edge.sum += angular_distance(field.orientation(u), field.orientation(v));
                    edge.count += 1;
                };
                if (x + 1 < w) touch(u + 1);
                if (y + 1 < h) touch(u + w);
            }
        if (boundaries.empty()) break;

        std::pair<int, int> best{0, 0};
        double best_mean = std::numeric_limits<double>::infinity();
        long long best_size = 0;
        for (const auto& [key, edge] : boundaries) {
            const double mean = edge.sum / static_cast<double>(edge.count);
            const long long size = group_size[key.first] + group_size[key.second];
            if (mean < best_mean || (mean == best_mean && size < best_size)) {
                best = key;
                best_mean = mean;
                best_size = size;
            }
        }
        if (best_mean >= config.merge_thresh) break;

        const auto [keep, gone] = best;
        for (int u : group_nodes[gone]) owner[u] = keep;
        group_nodes[keep].insert(group_nodes[keep].end(), group_nodes[gone].begin(),
                                 group_nodes[gone].end());
        group_nodes[gone].clear();
        group_size[keep] += group_size[gone];
        alive[gone] = 0;
    }

    std::vector<int> remaining;
    for (int g = 1; g <= count; ++g)
        if (alive[g]) remaining.push_back(g);
    for (int g : remaining) std::sort(group_nodes[g].begin(), group_nodes[g].end());
    std::sort(remaining.begin(), remaining.end(),
              [&](int a, int b) { return group_nodes[a].front() < group_nodes[b].front(); });

    std::vector<FlowSegment> flows;
    flows.reserve(remaining.size());
    for (int g : remaining) {
        FlowSegment flow;
        flow.id = static_cast<int>(flows.size()) + 1;
        flow.nodes = std::move(group_nodes[g]);
        const double mean = circular_mean_or_nan(flow.nodes, field);
        flow.orientation = std::isnan(mean) ? field.orientation(flow.nodes.front()) : mean;
        flows.push_back(std::move(flow));
    }
    return flows;
}

FlowResult run(const MotionField& field, const PipelineConfig& config) {
    FlowResult result;
    const double t0 = now_seconds();

    StageResult coarse = coarse_segment(field, config);
    const double t1 = now_seconds();
    result.coarse_labeling = coarse.labeling;
    result.coarse_energy = coarse.energy;
    result.coarse_solver = std::move(coarse.solver);
    result.n_coarse_segments = static_cast<int>(coarse.segments.size());
    result.timings.coarse_s = t1 - t0;

    const int thresh = effective_size_thresh(config, field.num_nodes());
    const bool any_qualifying = std::any_of(coarse.segments.begin(), coarse.segments.end(),
                                            [&](const Segment& s) { return s.size() > thresh; });
    if (!any_qualifying) {
        result.fine_labeling = Labeling(field.width(), field.height(), 0);
        result.flow_labeling = Labeling(field.width(), field.height(), 0);
        result.timings.total_s = now_seconds() - t0;
        return result;
    }

    StageResult fine = refine(field, coarse.segments, config);
    const double t2 = now_seconds();
    result.fine_labeling = fine.labeling;
    result.fine_energy = fine.energy;
    result.fine_solver = std::move(fine.solver);
    result.n_fine_segments = static_cast<int>(fine.segments.size());
    result.timings.refine_s = t2 - t1;

    if (!fine.segments.empty()) result.flows = merge(fine.segments, field, config);
    const double t3 = now_seconds();
    result.timings.merge_s = t3 - t2;

    result.flow_labeling = Labeling(field.width(), field.height(), 0);
    for (const FlowSegment& flow : result.flows)
        for (int u : flow.nodes) result.flow_labeling.at(u) = flow.id;
    result.timings.total_s = t3 - t0;
    return result;
}

}  // namespace flowseg
