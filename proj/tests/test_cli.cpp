#include "doctest.h"

#include <filesystem>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "flowseg/motion_field.hpp"
#include "flowseg/pgm.hpp"
#include "flowseg/pipeline.hpp"
#include "flowseg/synth.hpp"
#include "support/subprocess.hpp"

namespace fs = std::filesystem;
using namespace flowseg;
using namespace testsupport;

namespace {

SceneSpec two_lane_spec() {
    SceneSpec spec;
    spec.width = 20;
    spec.height = 12;
    spec.seed = 5;
    spec.noise_std = 0.3;
    spec.lanes.push_back({0, 1, 20, 4, 0.0, 3.0});
    spec.lanes.push_back({0, 7, 20, 4, 180.0, 3.0});
    return spec;
}

std::string two_lane_spec_text() {
    return "grid 20 12\n"
           "seed 5\n"
           "noise 0.3\n"
           "lane 0 1 20 4 0 3\n"
           "lane 0 7 20 4 180 3\n";
}

}  // namespace

TEST_CASE("segment command matches the library and writes its artifacts") {
    const std::string bin = cli_binary_from_env();
    REQUIRE(!bin.empty());
    const auto dir = make_temp_dir("cli-seg");

    const SynthScene scene = generate(two_lane_spec());
    const std::string field_path = (dir / "field.mvf").string();
    save_mean_field(scene.field, field_path);

    const auto out = dir / "out";
    const CommandResult run_result =
        run_command(bin + " segment --in " + field_path + " --out " + out.string());
    INFO(run_result.output);
    REQUIRE(run_result.exit_code == 0);

    REQUIRE(fs::exists(out / "labels.pgm"));
    REQUIRE(fs::exists(out / "flows.csv"));
    REQUIRE(fs::exists(out / "report.txt"));
    CHECK(!fs::exists(out / "coarse.pgm"));
    CHECK(!fs::exists(out / "solver.txt"));

    const FlowResult expected = run(scene.field, PipelineConfig{});
    CHECK(read_pgm((out / "labels.pgm").string()) == expected.flow_labeling);

    const std::string csv = read_file(out / "flows.csv");
    CHECK(csv.rfind("flow_id,size,orientation_deg\n", 0) == 0);
    size_t rows = 0;
    for (char c : csv)
        if (c == '\n') ++rows;
    CHECK(rows == 1 + expected.flows.size());

    const std::string report = read_file(out / "report.txt");
    CHECK(report.find("grid: 20 x 12") != std::string::npos);
    CHECK(report.find("tau: 1") != std::string::npos);
    CHECK(report.find("flows: " + std::to_string(expected.flows.size())) != std::string::npos);

    SUBCASE("--dump-intermediates adds the stage label maps") {
        const auto out2 = dir / "out2";
        const CommandResult r = run_command(bin + " segment --in " + field_path + " --out " +
                                            out2.string() + " --dump-intermediates");
        REQUIRE(r.exit_code == 0);
        CHECK(read_pgm((out2 / "coarse.pgm").string()) == expected.coarse_labeling);
        CHECK(read_pgm((out2 / "fine.pgm").string()) == expected.fine_labeling);
    }
    SUBCASE("--dump-solver writes the per-sweep energy table") {
        const auto out3 = dir / "out3";
        const CommandResult r = run_command(bin + " segment --in " + field_path + " --out " +
                                            out3.string() + " --dump-solver");
        REQUIRE(r.exit_code == 0);
        const std::string table = read_file(out3 / "solver.txt");
        INFO(table);

        std::vector<double> coarse_rows, fine_rows;
        std::istringstream lines(table);
        std::string line;
        while (std::getline(lines, line)) {
            std::istringstream row(line);
            std::string stage;
            int sweep = 0;
            double energy = 0.0;
            if (!(row >> stage >> sweep >> energy)) continue;
            if (stage == "coarse") coarse_rows.push_back(energy);
            if (stage == "fine") fine_rows.push_back(energy);
        }
        CHECK(static_cast<int>(coarse_rows.size()) == expected.coarse_solver.sweeps);
        CHECK(static_cast<int>(fine_rows.size()) == expected.fine_solver.sweeps);
        REQUIRE(!coarse_rows.empty());
        CHECK(coarse_rows.back() == doctest::Approx(expected.coarse_energy));
        for (size_t i = 1; i < coarse_rows.size(); ++i)
            CHECK(coarse_rows[i] <= coarse_rows[i - 1] + 1e-9);
        CHECK(table.find("coarse: sweeps=") != std::string::npos);
        CHECK(table.find("wall_s=") != std::string::npos);
    }
    fs::remove_all(dir);
}

TEST_CASE("segment batch mode writes per-sequence directories and a timing table") {
    const std::string bin = cli_binary_from_env();
    REQUIRE(!bin.empty());
    const auto dir = make_temp_dir("cli-batch");

    const SynthScene scene = generate(two_lane_spec());
    save_mean_field(scene.field, (dir / "seq_a.mvf").string());
    save_mean_field(scene.field, (dir / "seq_b.mvf").string());

    const auto out = dir / "out";
    const CommandResult r =
        run_command(bin + " segment --in " + (dir / "seq_a.mvf").string() + " --in " +
                    (dir / "seq_b.mvf").string() + " --out " + out.string());
    INFO(r.output);
    REQUIRE(r.exit_code == 0);

    CHECK(fs::exists(out / "seq_a" / "labels.pgm"));
    CHECK(fs::exists(out / "seq_b" / "report.txt"));
    CHECK(read_file(out / "timings.csv").rfind("sequence,coarse_s,refine_s,merge_s,total_s\n", 0) ==
          0);
    const std::string table = read_file(out / "timings.txt");
    CHECK(table.find("seq_a") != std::string::npos);
    CHECK(table.find("seq_b") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("cli exit codes") {
    const std::string bin = cli_binary_from_env();
    REQUIRE(!bin.empty());
    const auto dir = make_temp_dir("cli-exit");

    SUBCASE("help exits cleanly") {
        CHECK(run_command(bin + " --help").exit_code == 0);
        CHECK(run_command(bin + " segment --help").exit_code == 0);
    }
    SUBCASE("a subcommand is required") {
        CHECK(run_command(bin).exit_code == 2);
    }
    SUBCASE("unknown flags are parse errors") {
        CHECK(run_command(bin + " segment --in x --out y --frobnicate").exit_code == 2);
    }
    SUBCASE("missing input file") {
        const CommandResult r =
            run_command(bin + " segment --in " + (dir / "absent.mvf").string() + " --out " +
                        (dir / "out").string());
        CHECK(r.exit_code == 2);
        CHECK(r.output.find("error:") != std::string::npos);
    }
    SUBCASE("unrecognized input magic") {
        write_file(dir / "junk.mvf", "JUNK 2 2\n");
        const CommandResult r = run_command(bin + " segment --in " + (dir / "junk.mvf").string() +
                                            " --out " + (dir / "out").string());
        CHECK(r.exit_code == 2);
    }
    SUBCASE("truncated field file") {
        write_file(dir / "short.mvf", "MVF1 2 2\n1 0\n");
        const CommandResult r = run_command(bin + " segment --in " + (dir / "short.mvf").string() +
                                            " --out " + (dir / "out").string());
        CHECK(r.exit_code == 2);
    }
    fs::remove_all(dir);
}

TEST_CASE("eval command scores label maps") {
    const std::string bin = cli_binary_from_env();
    REQUIRE(!bin.empty());
    const auto dir = make_temp_dir("cli-eval");

    LabelMap pred(13, 1, 0), gt(13, 1, 0);
    for (int i = 0; i < 8; ++i) pred.at(i) = 1;
    for (int i = 4; i < 12; ++i) gt.at(i) = 1;
    write_pgm(pred, (dir / "pred.pgm").string());
    write_pgm(gt, (dir / "gt.pgm").string());
    write_pgm(pred, (dir / "pred2.pgm").string());

    SUBCASE("identical maps score a full 1") {
        const CommandResult r = run_command(bin + " eval --pred " + (dir / "pred.pgm").string() +
                                            " --gt " + (dir / "pred2.pgm").string());
        CHECK(r.exit_code == 0);
        CHECK(r.output == "1.000000\n");
    }
    SUBCASE("partial overlap") {
        const CommandResult r = run_command(bin + " eval --pred " + (dir / "pred.pgm").string() +
                                            " --gt " + (dir / "gt.pgm").string());
        CHECK(r.exit_code == 0);
        CHECK(r.output == "0.333333\n");
    }
    SUBCASE("disjoint supports score 0") {
        LabelMap left(4, 1, 0), right(4, 1, 0);
        left.at(0) = 1;
        right.at(3) = 2;
        write_pgm(left, (dir / "left.pgm").string());
        write_pgm(right, (dir / "right.pgm").string());
        const CommandResult r = run_command(bin + " eval --pred " + (dir / "left.pgm").string() +
                                            " --gt " + (dir / "right.pgm").string());
        CHECK(r.exit_code == 0);
        CHECK(r.output == "0.000000\n");
    }
    SUBCASE("dimension mismatch is an input error") {
        write_pgm(LabelMap(4, 4, 0), (dir / "square.pgm").string());
        const CommandResult r = run_command(bin + " eval --pred " + (dir / "pred.pgm").string() +
                                            " --gt " + (dir / "square.pgm").string());
        CHECK(r.exit_code == 2);
    }
    SUBCASE("csv rows accumulate with one header") {
        const std::string csv = (dir / "metrics.csv").string();
        CHECK(run_command(bin + " eval --pred " + (dir / "pred.pgm").string() + " --gt " +
                          (dir / "pred2.pgm").string() + " --csv " + csv +
                          " --name seq1 --time-total 0.25")
                  .exit_code == 0);
        CHECK(run_command(bin + " eval --pred " + (dir / "pred.pgm").string() + " --gt " +
                          (dir / "gt.pgm").string() + " --csv " + csv + " --name seq2")
                  .exit_code == 0);
        CHECK(read_file(fs::path(csv)) ==
              "sequence,jaccard,n_flows_pred,n_flows_gt,time_total_s\n"
              "seq1,1.000000,1,1,0.250000\n"
              "seq2,0.333333,1,1,\n");
    }
    fs::remove_all(dir);
}

TEST_CASE("synth command is deterministic and honors seed overrides") {
    const std::string bin = cli_binary_from_env();
    REQUIRE(!bin.empty());
    const auto dir = make_temp_dir("cli-synth");
    write_file(dir / "scene.txt", two_lane_spec_text());

    auto synth_to = [&](const char* tag, const std::string& extra) {
        const std::string field = (dir / (std::string(tag) + ".mvf")).string();
        const std::string gt = (dir / (std::string(tag) + ".pgm")).string();
        const CommandResult r =
            run_command(bin + " synth --spec " + (dir / "scene.txt").string() + " --out-field " +
                        field + " --out-gt " + gt + extra);
        REQUIRE(r.exit_code == 0);
        return std::pair{read_file(fs::path(field)), read_file(fs::path(gt))};
    };

    const auto [field_a, gt_a] = synth_to("a", "");
    const auto [field_b, gt_b] = synth_to("b", "");
    CHECK(field_a == field_b);
    CHECK(gt_a == gt_b);

    const auto [field_c, gt_c] = synth_to("c", " --seed 99");
    CHECK(gt_c == gt_a);      // primitives are seed-independent
    CHECK(field_c != field_a);  // noise is not

    SUBCASE("ground truth matches the lane geometry") {
        const LabelMap gt = read_pgm((dir / "a.pgm").string());
        int lane1 = 0, lane2 = 0;
        for (int v : gt.values()) {
            if (v == 1) ++lane1;
            if (v == 2) ++lane2;
        }
        CHECK(lane1 == 80);
        CHECK(lane2 == 80);
    }
    SUBCASE("overlapping primitives are rejected") {
        write_file(dir / "overlap.txt",
                   "grid 10 10\nlane 0 0 6 6 0 1\nlane 4 4 4 4 90 1\n");
        const CommandResult r =
            run_command(bin + " synth --spec " + (dir / "overlap.txt").string() + " --out-field " +
                        (dir / "x.mvf").string() + " --out-gt " + (dir / "x.pgm").string());
        CHECK(r.exit_code == 2);
        CHECK(r.output.find("overlap") != std::string::npos);
    }
    fs::remove_all(dir);
}

TEST_CASE("mean command collapses frame records") {
    const std::string bin = cli_binary_from_env();
    REQUIRE(!bin.empty());
    const auto dir = make_temp_dir("cli-mean");

    const std::string fmv =
        "FMV1 3 2 2\n"
        "0 0 0 2 2 4 0\n"
        "1 0 0 2 2 0 2\n";
    write_file(dir / "frames.fmv", fmv);

    const CommandResult r = run_command(bin + " mean --in " + (dir / "frames.fmv").string() +
                                        " --out " + (dir / "mean.mvf").string());
    INFO(r.output);
    REQUIRE(r.exit_code == 0);

    const MotionField converted = load_mean_field((dir / "mean.mvf").string());
    CHECK(converted.width() == 3);
    CHECK(converted.height() == 2);
    CHECK(converted.vec(0, 0) == MotionVec{2.0, 1.0});
    CHECK(converted.vec(1, 1) == MotionVec{2.0, 1.0});
    CHECK(converted.vec(2, 0) == MotionVec{0.0, 0.0});

    SUBCASE("segment accepts the frame format directly") {
        const CommandResult seg = run_command(bin + " segment --in " +
                                              (dir / "frames.fmv").string() + " --out " +
                                              (dir / "out").string());
        CHECK(seg.exit_code == 0);
        CHECK(fs::exists(dir / "out" / "report.txt"));
    }
    fs::remove_all(dir);
}

TEST_CASE("config files feed segment options and the command line wins") {
    const std::string bin = cli_binary_from_env();
    REQUIRE(!bin.empty());
    const auto dir = make_temp_dir("cli-config");

    const SynthScene scene = generate(two_lane_spec());
    const std::string field_path = (dir / "field.mvf").string();
    save_mean_field(scene.field, field_path);
    write_file(dir / "opts.toml", "[segment]\ntau=2.5\nmerge-thresh=30\n");

    const auto out1 = dir / "out1";
    REQUIRE(run_command(bin + " segment --in " + field_path + " --out " + out1.string() +
                        " --config " + (dir / "opts.toml").string())
                .exit_code == 0);
    const std::string report1 = read_file(out1 / "report.txt");
    CHECK(report1.find("tau: 2.5") != std::string::npos);
    CHECK(report1.find("merge_thresh: 30") != std::string::npos);

    const auto out2 = dir / "out2";
    REQUIRE(run_command(bin + " segment --in " + field_path + " --out " + out2.string() +
                        " --config " + (dir / "opts.toml").string() + " --tau 3.25")
                .exit_code == 0);
    const std::string report2 = read_file(out2 / "report.txt");
    CHECK(report2.find("tau: 3.25") != std::string::npos);
    CHECK(report2.find("merge_thresh: 30") != std::string::npos);

    SUBCASE("unknown config keys are rejected") {
        write_file(dir / "typo.toml", "[segment]\ntua=2.5\n");
        const CommandResult r =
            run_command(bin + " segment --in " + field_path + " --out " + (dir / "out3").string() +
                        " --config " + (dir / "typo.toml").string());
        CHECK(r.exit_code == 2);
    }
    fs::remove_all(dir);
}

TEST_CASE("repeated segment runs are byte-identical") {
    const std::string bin = cli_binary_from_env();
    REQUIRE(!bin.empty());
    const auto dir = make_temp_dir("cli-repeat");

    const SynthScene scene = generate(two_lane_spec());
    const std::string field_path = (dir / "field.mvf").string();
    save_mean_field(scene.field, field_path);

    const auto out1 = dir / "r1";
    const auto out2 = dir / "r2";
    REQUIRE(run_command(bin + " segment --in " + field_path + " --out " + out1.string())
                .exit_code == 0);
    REQUIRE(run_command(bin + " segment --in " + field_path + " --out " + out2.string())
                .exit_code == 0);

    CHECK(read_file(out1 / "labels.pgm") == read_file(out2 / "labels.pgm"));
    CHECK(read_file(out1 / "flows.csv") == read_file(out2 / "flows.csv"));
    CHECK(strip_timing_lines(read_file(out1 / "report.txt")) ==
          strip_timing_lines(read_file(out2 / "report.txt")));
    fs::remove_all(dir);
}
