// moact command-line front end: motion estimation, activity timelines,
// shot boundary detection, and detection scoring over uncompressed video.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "moact/moact.hpp"

namespace {

using nlohmann::json;

struct InputOpts {
    std::string input;
    std::string format;
    int width = 0;
    int height = 0;
};

struct GridOpts {
    int block_size = 16;
    int search_range = 7;
};

struct PipelineOpts {
    int step = 2;
    int stride = 0; // 0 -> same as step
    bool filter_low_activity = false;
    std::string algo = "arps";
};

struct OutputOpts {
    std::string output = "json";
    std::string out_path;
};

void add_input_options(CLI::App* cmd, InputOpts& opts) {
    cmd->add_option("--input", opts.input, "video source: Y4M file, raw YUV 4:2:0 file, "
                                           ".pgm file, or directory of .pgm frames")
        ->required();
    cmd->add_option("--format", opts.format, "force the input format instead of sniffing it")
        ->check(CLI::IsMember({"y4m", "yuv420", "pgm"}));
    cmd->add_option("--width", opts.width, "frame width (required for raw YUV)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--height", opts.height, "frame height (required for raw YUV)")
        ->check(CLI::PositiveNumber);
}

void add_grid_options(CLI::App* cmd, GridOpts& opts) {
    cmd->add_option("--block-size", opts.block_size, "macroblock side in pixels")
        ->check(CLI::Range(4, 256))
        ->capture_default_str();
    cmd->add_option("--search-range", opts.search_range, "max displacement per axis")
        ->check(CLI::Range(1, 64))
        ->capture_default_str();
}

void add_pipeline_options(CLI::App* cmd, PipelineOpts& opts) {
    cmd->add_option("--step", opts.step, "frame skip between the two frames of a pair")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--stride", opts.stride,
                    "frames between successive pairs (default: same as --step)")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--filter-low-activity", opts.filter_low_activity,
                  "zero blocks below the mean magnitude before computing the intensity");
    cmd->add_option("--algo", opts.algo, "motion search algorithm")
        ->check(CLI::IsMember({"arps", "es"}))
        ->capture_default_str();
}

void add_output_options(CLI::App* cmd, OutputOpts& opts,
                        const std::vector<std::string>& formats) {
    cmd->add_option("--output", opts.output, "output format")
        ->check(CLI::IsMember(formats))
        ->capture_default_str();
    cmd->add_option("--out", opts.out_path, "write to this file instead of stdout");
}

moact::SourceDescriptor open_input(const InputOpts& opts) {
    moact::OpenHints hints;
    if (opts.width > 0)
        hints.width = opts.width;
    if (opts.height > 0)
        hints.height = opts.height;
    if (opts.format == "y4m")
        hints.format = moact::SourceFormat::y4m;
    else if (opts.format == "yuv420")
        hints.format = moact::SourceFormat::raw_yuv420;
    else if (opts.format == "pgm")
        hints.format = moact::SourceFormat::pgm_sequence;
    return moact::open_source(opts.input, hints);
}

moact::SearchAlgo parse_algo(const std::string& name) {
    return name == "es" ? moact::SearchAlgo::exhaustive : moact::SearchAlgo::arps;
}

void emit(const OutputOpts& opts, const std::string& text) {
    if (opts.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(opts.out_path, std::ios::binary);
    if (!out)
        moact::raise(moact::Errc::io_failure, "cannot create " + opts.out_path);
    out << text;
    if (!out)
        moact::raise(moact::Errc::io_failure, "write failed for " + opts.out_path);
}

json source_config(const moact::SourceDescriptor& src, const InputOpts& in) {
    return json{{"input", in.input},
                {"format", moact::source_format_name(src.format)},
                {"width", src.width},
                {"height", src.height},
                {"frame_count", src.frame_count}};
}

// ---- motion -------------------------------------------------------------

struct MotionArgs {
    InputOpts input;
    GridOpts grid;
    OutputOpts output;
    std::string algo = "arps";
    int frame_a = 0;
    int frame_b = 0;
};

int run_motion(const MotionArgs& args) {
    auto src = open_input(args.input);
    auto spec = moact::BlockGridSpec::fit(src.width, src.height, args.grid.block_size,
                                          args.grid.search_range);
    moact::Frame reference = moact::read_frame(src, args.frame_a);
    moact::Frame current = moact::read_frame(src, args.frame_b);
    moact::MotionVectorField field = parse_algo(args.algo) == moact::SearchAlgo::exhaustive
                                         ? moact::exhaustive_search(current, reference, spec)
                                         : moact::arps_search(current, reference, spec);
    moact::SearchStats stats = moact::search_stats(field);

    if (args.output.output == "csv") {
        std::ostringstream out;
        moact::write_motion_csv(out, field);
        emit(args.output, out.str());
    } else if (args.output.output == "text") {
        std::ostringstream out;
        out << "frames " << args.frame_a << " -> " << args.frame_b << ", grid " << spec.cols
            << "x" << spec.rows << " of " << spec.block_size << "px blocks, algo " << args.algo
            << "\n";
        out << "avg_search_points " << moact::format_double(stats.avg_search_points) << "\n";
        out << "total_sad " << stats.total_sad << "\n";
        emit(args.output, out.str());
    } else {
        json config = source_config(src, args.input);
        config["algo"] = args.algo;
        config["frame_a"] = args.frame_a;
        config["frame_b"] = args.frame_b;
        json doc{{"config", std::move(config)}, {"field", field}, {"stats", stats}};
        emit(args.output, doc.dump(2) + "\n");
    }
    return 0;
}

// ---- activity -----------------------------------------------------------

struct ActivityArgs {
    InputOpts input;
    GridOpts grid;
    PipelineOpts pipeline;
    OutputOpts output;
};

moact::IntensityTimeline compute_timeline(const moact::SourceDescriptor& src,
                                          const GridOpts& grid, const PipelineOpts& pipeline) {
    auto spec = moact::BlockGridSpec::fit(src.width, src.height, grid.block_size,
                                          grid.search_range);
    return moact::build_timeline(src, spec, pipeline.step, pipeline.stride,
                                 pipeline.filter_low_activity, parse_algo(pipeline.algo));
}

json pipeline_config(const PipelineOpts& pipeline, const GridOpts& grid) {
    return json{{"block_size", grid.block_size},
                {"search_range", grid.search_range},
                {"step", pipeline.step},
                {"stride", pipeline.stride == 0 ? pipeline.step : pipeline.stride},
                {"filter_low_activity", pipeline.filter_low_activity},
                {"algo", pipeline.algo}};
}

int run_activity(const ActivityArgs& args) {
    auto src = open_input(args.input);
    auto timeline = compute_timeline(src, args.grid, args.pipeline);

    if (args.output.output == "csv") {
        std::ostringstream out;
        moact::write_timeline_csv(out, timeline);
        emit(args.output, out.str());
    } else {
        json config = source_config(src, args.input);
        config.update(pipeline_config(args.pipeline, args.grid));
        json doc{{"config", std::move(config)}, {"timeline", timeline}};
        emit(args.output, doc.dump(2) + "\n");
    }
    return 0;
}

// ---- detect -------------------------------------------------------------

struct DetectArgs {
    InputOpts input;
    GridOpts grid;
    PipelineOpts pipeline;
    OutputOpts output;
    std::optional<double> threshold;
    std::optional<double> adaptive_alpha;
    int min_shot_gap = 8;
    std::string emit_signal_path;
};

int run_detect(const DetectArgs& args) {
    if (args.min_shot_gap < args.pipeline.step)
        moact::raise(moact::Errc::invalid_argument,
                     "--min-shot-gap must be at least the pair step (" +
                         std::to_string(args.pipeline.step) + ")");
    auto src = open_input(args.input);
    auto timeline = compute_timeline(src, args.grid, args.pipeline);
    auto signal = moact::diff_signal(timeline);

    moact::ThresholdPolicy policy =
        args.threshold ? moact::ThresholdPolicy::fixed(*args.threshold, args.min_shot_gap)
                       : moact::ThresholdPolicy::adaptive(args.adaptive_alpha.value_or(3.0),
                                                          args.min_shot_gap);
    double threshold = moact::resolve_threshold(signal, policy);
    moact::ShotList shots = moact::detect_shots(signal, threshold, policy, src.frame_count);

    if (!args.emit_signal_path.empty()) {
        std::ofstream sig(args.emit_signal_path, std::ios::binary);
        if (!sig)
            moact::raise(moact::Errc::io_failure, "cannot create " + args.emit_signal_path);
        moact::write_signal_csv(sig, signal);
    }

    if (args.output.output == "text") {
        std::ostringstream out;
        moact::write_boundaries_text(out, shots);
        emit(args.output, out.str());
    } else {
        json config = source_config(src, args.input);
        config.update(pipeline_config(args.pipeline, args.grid));
        config["threshold_mode"] = args.threshold ? "fixed" : "adaptive";
        if (args.threshold)
            config["threshold"] = *args.threshold;
        else
            config["adaptive_alpha"] = args.adaptive_alpha.value_or(3.0);
        config["min_shot_gap"] = args.min_shot_gap;
        json doc = shots; // boundaries, shots, threshold_used at the top level
        doc["config"] = std::move(config);
        emit(args.output, doc.dump(2) + "\n");
    }
    return 0;
}

// ---- eval ---------------------------------------------------------------

struct EvalArgs {
    std::string detected_path;
    std::string truth_path;
    int tolerance = 4;
    OutputOpts output;
};

int run_eval(const EvalArgs& args) {
    moact::GroundTruth detected = moact::load_ground_truth(args.detected_path);
    moact::GroundTruth truth = moact::load_ground_truth(args.truth_path);
    moact::EvalReport report = moact::score(detected.boundaries, truth, args.tolerance);

    if (args.output.output == "text") {
        std::ostringstream out;
        moact::write_eval_text(out, report);
        emit(args.output, out.str());
    } else {
        json doc = report;
        doc["config"] = json{{"detected", args.detected_path},
                             {"truth", args.truth_path},
                             {"tolerance", args.tolerance}};
        emit(args.output, doc.dump(2) + "\n");
    }
    return 0;
}

// ---- psnr-bench ---------------------------------------------------------

struct PsnrBenchArgs {
    InputOpts input;
    GridOpts grid;
    OutputOpts output;
    int frame_distance = 2;
};

int run_psnr_bench(const PsnrBenchArgs& args) {
    auto src = open_input(args.input);
    if (src.frame_count <= args.frame_distance)
        moact::raise(moact::Errc::too_few_frames,
                     "need more than " + std::to_string(args.frame_distance) +
                         " frames, source has " + std::to_string(src.frame_count));
    auto spec = moact::BlockGridSpec::fit(src.width, src.height, args.grid.block_size,
                                          args.grid.search_range);

    std::ostringstream out;
    out << "frame,algo,psnr,avg_search_points\n";
    std::optional<moact::Frame> cached;
    for (int t = 0; t + args.frame_distance < src.frame_count; ++t) {
        moact::Frame reference = (cached && cached->index() == t) ? std::move(*cached)
                                                                  : moact::read_frame(src, t);
        moact::Frame current = moact::read_frame(src, t + args.frame_distance);

        auto report = [&](const char* name, const moact::MotionVectorField& field) {
            moact::Frame compensated = moact::motion_compensate(reference, field);
            double db = moact::psnr(compensated, current);
            moact::SearchStats stats = moact::search_stats(field);
            out << current.index() << ',' << name << ',' << moact::format_double(db) << ','
                << moact::format_double(stats.avg_search_points) << '\n';
        };
        report("es", moact::exhaustive_search(current, reference, spec));
        report("arps", moact::arps_search(current, reference, spec));

        if (args.frame_distance == 1)
            cached = std::move(current);
    }
    emit(args.output, out.str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"shot boundary detection from block-matching motion activity"};
    app.require_subcommand(1);

    MotionArgs motion;
    auto* motion_cmd = app.add_subcommand(
        "motion", "estimate motion vectors between two frames of a source");
    add_input_options(motion_cmd, motion.input);
    add_grid_options(motion_cmd, motion.grid);
    motion_cmd->add_option("--frame-a", motion.frame_a, "reference frame index")->required();
    motion_cmd->add_option("--frame-b", motion.frame_b, "current frame index")->required();
    motion_cmd->add_option("--algo", motion.algo, "motion search algorithm")
        ->check(CLI::IsMember({"arps", "es"}))
        ->capture_default_str();
    add_output_options(motion_cmd, motion.output, {"json", "csv", "text"});

    ActivityArgs activity;
    auto* activity_cmd = app.add_subcommand(
        "activity", "compute the motion-intensity timeline of a source");
    add_input_options(activity_cmd, activity.input);
    add_grid_options(activity_cmd, activity.grid);
    add_pipeline_options(activity_cmd, activity.pipeline);
    add_output_options(activity_cmd, activity.output, {"json", "csv"});

    DetectArgs detect;
    auto* detect_cmd = app.add_subcommand(
        "detect", "detect shot boundaries and key frames from the intensity signal");
    add_input_options(detect_cmd, detect.input);
    add_grid_options(detect_cmd, detect.grid);
    add_pipeline_options(detect_cmd, detect.pipeline);
    auto* thr = detect_cmd->add_option("--threshold", detect.threshold,
                                       "fixed detection threshold");
    detect_cmd
        ->add_option("--adaptive-alpha", detect.adaptive_alpha,
                     "adaptive threshold: mean(d) + alpha * stddev(d); default alpha 3")
        ->excludes(thr);
    detect_cmd->add_option("--min-shot-gap", detect.min_shot_gap,
                           "merge boundary proposals closer than this many frames")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    detect_cmd->add_option("--emit-signal", detect.emit_signal_path,
                           "also write the diff signal as CSV to this path");
    add_output_options(detect_cmd, detect.output, {"json", "text"});

    EvalArgs eval;
    auto* eval_cmd = app.add_subcommand(
        "eval", "score a detected boundary list against reference annotations");
    eval_cmd->add_option("--detected", eval.detected_path, "detected boundary list file")
        ->required();
    eval_cmd->add_option("--truth", eval.truth_path, "reference boundary list file")
        ->required();
    eval_cmd->add_option("--tolerance", eval.tolerance, "matching window in frames")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    add_output_options(eval_cmd, eval.output, {"json", "text"});

    PsnrBenchArgs bench;
    auto* bench_cmd = app.add_subcommand(
        "psnr-bench", "compare ES and ARPS compensation quality over a source (CSV)");
    add_input_options(bench_cmd, bench.input);
    add_grid_options(bench_cmd, bench.grid);
    bench_cmd->add_option("--frame-distance", bench.frame_distance,
                          "temporal distance between compared frames")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_output_options(bench_cmd, bench.output, {"csv"});

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (motion_cmd->parsed())
            return run_motion(motion);
        if (activity_cmd->parsed())
            return run_activity(activity);
        if (detect_cmd->parsed())
            return run_detect(detect);
        if (eval_cmd->parsed())
            return run_eval(eval);
        if (bench_cmd->parsed())
            return run_psnr_bench(bench);
        return 2;
    } catch (const moact::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
}
