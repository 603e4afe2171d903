#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "flowseg/eval.hpp"
#include "flowseg/motion_field.hpp"
#include "flowseg/pgm.hpp"
#include "flowseg/pipeline.hpp"
#include "flowseg/synth.hpp"

namespace fs = std::filesystem;
using namespace flowseg;

namespace {

struct SegmentOptions {
    std::vector<std::string> inputs;
    std::string out_dir;
    PipelineConfig config;
    bool dump_intermediates = false;
    bool dump_solver = false;
};

struct EvalOptions {
    std::string pred_path;
    std::string gt_path;
    std::string csv_path;
    std::string name;
    double time_total = -1.0;
};

struct SynthOptions {
    std::string spec_path;
    std::string out_field;
    std::string out_gt;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

struct MeanOptions {
    std::string in_path;
    std::string out_path;
};

std::string fmt(const char* format, ...) {
    char buf[256];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

// Input files identify themselves by their magic token.
MotionField load_field_any(const std::string& path) {
    std::ifstream probe(path);
    if (!probe) throw IoError("cannot open '" + path + "'");
    std::string magic;
    probe >> magic;
    probe.close();
    if (magic == "MVF1") return load_mean_field(path);
    if (magic == "FMV1") return mean_field_from_records(load_frame_records(path));
    throw HeaderError("'" + path + "': unknown input format '" + magic +
                      "' (expected MVF1 or FMV1)");
}

int count_nonzero_labels(const LabelMap& map) {
    std::vector<int> labels(map.values());
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    return static_cast<int>(labels.size()) - (!labels.empty() && labels.front() == 0 ? 1 : 0);
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string flows_csv(const FlowResult& result) {
    std::string csv = "flow_id,size,orientation_deg\n";
    for (const FlowSegment& flow : result.flows)
        csv += fmt("%d,%zu,%.6f\n", flow.id, flow.nodes.size(), flow.orientation);
    return csv;
}

std::string report_text(const std::string& input, const MotionField& field,
                        const PipelineConfig& config, const FlowResult& result) {
    std::string text;
    text += "input: " + input + "\n";
    text += fmt("grid: %d x %d\n", field.width(), field.height());
    text += fmt("tau: %g\n", config.crf.tau);
    text += fmt("c1: %g\n", config.crf.c1);
    text += fmt("c2: %g\n", config.crf.c2);
    text += fmt("c3: %g\n", config.crf.c3);
    text += fmt("size_thresh: %d\n", effective_size_thresh(config, field.num_nodes()));
    text += fmt("merge_thresh: %g\n", config.merge_thresh);
    text += fmt("coarse_segments: %d\n", result.n_coarse_segments);
    text += fmt("fine_segments: %d\n", result.n_fine_segments);
    text += fmt("coarse_energy: %.9f\n", result.coarse_energy);
    text += fmt("fine_energy: %.9f\n", result.fine_energy);
    text += fmt("flows: %zu\n", result.flows.size());
    for (const FlowSegment& flow : result.flows)
        text += fmt("flow %d: size=%zu orientation=%.6f\n", flow.id, flow.nodes.size(),
                    flow.orientation);
    text += fmt("time_coarse_s: %.6f\n", result.timings.coarse_s);
    text += fmt("time_refine_s: %.6f\n", result.timings.refine_s);
    text += fmt("time_merge_s: %.6f\n", result.timings.merge_s);
    text += fmt("time_total_s: %.6f\n", result.timings.total_s);
    return text;
}

std::string solver_table(const FlowResult& result) {
    std::string text = fmt("%-6s %5s %18s\n", "stage", "sweep", "energy");
    auto stage_rows = [&](const char* stage, const SolverTrace& trace) {
        for (std::size_t i = 0; i < trace.sweep_energies.size(); ++i)
            text += fmt("%-6s %5zu %18.9f\n", stage, i + 1, trace.sweep_energies[i]);
    };
    stage_rows("coarse", result.coarse_solver);
    stage_rows("fine", result.fine_solver);
    text += fmt("coarse: sweeps=%d final_energy=%.9f wall_s=%.6f\n", result.coarse_solver.sweeps,
                result.coarse_energy, result.coarse_solver.wall_seconds);
    if (result.fine_solver.sweeps > 0)
        text += fmt("fine: sweeps=%d final_energy=%.9f wall_s=%.6f\n", result.fine_solver.sweeps,
                    result.fine_energy, result.fine_solver.wall_seconds);
    return text;
}

int cmd_segment(const SegmentOptions& options) {
    const bool batch = options.inputs.size() > 1;
    fs::create_directories(options.out_dir);

    std::vector<SequenceTiming> timings;
    for (const std::string& input : options.inputs) {
        const MotionField field = load_field_any(input);
        const FlowResult result = run(field, options.config);

        fs::path dir = options.out_dir;
        const std::string stem = fs::path(input).stem().string();
        if (batch) {
            dir /= stem;
            fs::create_directories(dir);
        }
        write_pgm(result.flow_labeling, (dir / "labels.pgm").string());
        write_text(dir / "flows.csv", flows_csv(result));
        write_text(dir / "report.txt", report_text(input, field, options.config, result));
        if (options.dump_intermediates) {
            write_pgm(result.coarse_labeling, (dir / "coarse.pgm").string());
            write_pgm(result.fine_labeling, (dir / "fine.pgm").string());
        }
        if (options.dump_solver) write_text(dir / "solver.txt", solver_table(result));
        timings.push_back({stem, result.timings.coarse_s, result.timings.refine_s,
                           result.timings.merge_s, result.timings.total_s});
        std::cout << input << ": " << result.flows.size() << " flow(s)\n";
    }
    if (batch) {
        write_text(fs::path(options.out_dir) / "timings.txt", timing_table_text(timings));
        write_text(fs::path(options.out_dir) / "timings.csv", timing_table_csv(timings));
    }
    return 0;
}

int cmd_eval(const EvalOptions& options) {
    const LabelMap pred = read_pgm(options.pred_path);
    const LabelMap gt = read_pgm(options.gt_path);
    double score = 0.0;
    try {
        score = jaccard(pred, gt);
    } catch (const DimensionMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::cout << fmt("%.6f\n", score);

    if (!options.csv_path.empty()) {
        const bool fresh = !fs::exists(options.csv_path) || fs::file_size(options.csv_path) == 0;
        std::ofstream csv(options.csv_path, std::ios::app);
        if (!csv) throw IoError("cannot write '" + options.csv_path + "'");
        if (fresh) csv << "sequence,jaccard,n_flows_pred,n_flows_gt,time_total_s\n";
        const std::string name =
            options.name.empty() ? fs::path(options.pred_path).stem().string() : options.name;
        csv << name << fmt(",%.6f,%d,%d,", score, count_nonzero_labels(pred),
                           count_nonzero_labels(gt));
        if (options.time_total >= 0.0) csv << fmt("%.6f", options.time_total);
        csv << "\n";
    }
    return 0;
}

int cmd_synth(const SynthOptions& options) {
    SceneSpec spec = load_scene_spec(options.spec_path);
    if (options.seed_given) spec.seed = options.seed;
    const SynthScene scene = generate(spec);
    save_mean_field(scene.field, options.out_field);
    write_pgm(scene.ground_truth, options.out_gt);
    std::cout << options.out_field << " + " << options.out_gt << ": " << spec.width << "x"
              << spec.height << ", " << (spec.lanes.size() + spec.rings.size())
              << " primitive(s)\n";
    return 0;
}

int cmd_mean(const MeanOptions& options) {
    const FrameRecords records = load_frame_records(options.in_path);
    save_mean_field(mean_field_from_records(records), options.out_path);
    std::cout << options.out_path << ": " << records.width << "x" << records.height << " from "
              << records.frame_count << " frame(s)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dominant crowd flow segmentation from block motion-vector fields"};
    app.require_subcommand(1);
    // Config files live on the root app (subcommand config options are never
    // processed); fallthrough lets --config follow the subcommand name.
    app.set_config("--config", "",
                   "read options from a config file with [segment]/[eval]/[synth]/[mean] sections");
    app.allow_config_extras(CLI::config_extras_mode::error);

    SegmentOptions segment_options;
    CLI::App* segment = app.add_subcommand(
        "segment", "segment a motion-vector field into dominant flows");
    segment->fallthrough();
    segment->add_option("--in", segment_options.inputs, "input field(s), MVF1 or FMV1")
        ->required();
    segment->add_option("--out", segment_options.out_dir, "output directory")->required();
    segment
        ->add_option("--tau", segment_options.config.crf.tau,
                     "background magnitude threshold (pixels/frame)")
        ->capture_default_str();
    segment
        ->add_option("--c1", segment_options.config.crf.c1,
                     "cost of labeling a moving node background")
        ->capture_default_str();
    segment
        ->add_option("--c2", segment_options.config.crf.c2,
                     "cost of an orientation label on a static node")
        ->capture_default_str();
    segment->add_option("--c3", segment_options.config.crf.c3, "pairwise weight")
        ->capture_default_str();
    segment
        ->add_option("--size-thresh", segment_options.config.size_thresh,
                     "fine-stage segment size threshold; 0 = max(16, 0.1% of nodes)")
        ->capture_default_str();
    segment
        ->add_option("--merge-thresh", segment_options.config.merge_thresh,
                     "boundary gradient merge threshold (degrees)")
        ->capture_default_str();
    segment->add_flag("--dump-intermediates", segment_options.dump_intermediates,
                      "also write coarse.pgm and fine.pgm");
    segment->add_flag("--dump-solver", segment_options.dump_solver,
                      "also write solver.txt with per-sweep solver energies");

    EvalOptions eval_options;
    CLI::App* evalcmd =
        app.add_subcommand("eval", "Jaccard score of a predicted label map against ground truth");
    evalcmd->fallthrough();
    evalcmd->add_option("--pred", eval_options.pred_path, "predicted label map (PGM)")->required();
    evalcmd->add_option("--gt", eval_options.gt_path, "ground-truth label map (PGM)")->required();
    evalcmd->add_option("--csv", eval_options.csv_path, "append a row to this metrics CSV");
    evalcmd->add_option("--name", eval_options.name, "sequence name for the CSV row");
    evalcmd->add_option("--time-total", eval_options.time_total,
                        "total pipeline seconds for the CSV row");

    SynthOptions synth_options;
    CLI::App* synth =
        app.add_subcommand("synth", "generate a synthetic field and its ground truth");
    synth->fallthrough();
    synth->add_option("--spec", synth_options.spec_path, "scene description file")->required();
    synth->add_option("--out-field", synth_options.out_field, "output MVF1 path")->required();
    synth->add_option("--out-gt", synth_options.out_gt, "output ground-truth PGM path")
        ->required();
    CLI::Option* seed_option =
        synth->add_option("--seed", synth_options.seed, "override the seed in the spec");

    MeanOptions mean_options;
    CLI::App* mean =
        app.add_subcommand("mean", "collapse FMV1 frame records into a mean MVF1 field");
    mean->fallthrough();
    mean->add_option("--in", mean_options.in_path, "input FMV1 path")->required();
    mean->add_option("--out", mean_options.out_path, "output MVF1 path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        synth_options.seed_given = seed_option->count() > 0;
        if (segment->parsed()) return cmd_segment(segment_options);
        if (evalcmd->parsed()) return cmd_eval(eval_options);
        if (synth->parsed()) return cmd_synth(synth_options);
        if (mean->parsed()) return cmd_mean(mean_options);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const HeaderError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const CountMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const OutOfBounds& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const OverlapError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
