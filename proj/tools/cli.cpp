#include "cli.hpp"

#include <CLI11.hpp>

#include "codbench/curation.hpp"
#include "codbench/detections.hpp"
#include "codbench/errors.hpp"
#include "codbench/evaluation.hpp"
#include "codbench/file_util.hpp"
#include "codbench/harness/protocol.hpp"
#include "codbench/harness/registry.hpp"
#include "codbench/harness/sampling.hpp"
#include "codbench/harness/statistics.hpp"
#include "codbench/harness/summary.hpp"
#include "codbench/image_io.hpp"
#include "codbench/inpaint.hpp"
#include "codbench/parallel.hpp"

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace codbench::cli {

namespace fs = std::filesystem;

namespace {

struct GlobalOptions {
    double threshold = 0.5;
    double em_threshold = -1.0; // negative: adaptive
    double epsilon = kDefaultEpsilon;
    unsigned workers = 0;       // 0: COD_BENCH_WORKERS or hardware concurrency
    std::uint64_t seed = 0;

    EvalConfig eval_config() const {
        EvalConfig c;
        c.binarize_threshold = threshold;
        c.metric.epsilon = epsilon;
        if (em_threshold >= 0.0)
            c.metric.em_threshold = em_threshold;
        c.workers = resolved_workers();
        return c;
    }

    unsigned resolved_workers() const { return workers > 0 ? workers : default_workers(); }
};

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings)
        std::cerr << "warning: " << w << '\n';
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
    std::string pred_dir;
    std::string gt_dir;
    std::string out_dir;
};

int cmd_eval(const GlobalOptions& g, const EvalArgs& a) {
    const MetricReport report = evaluate_directories(a.pred_dir, a.gt_dir, g.eval_config());
    write_report(a.out_dir, report);
    print_warnings(report.warnings);
    const auto& m = report.aggregate;
    std::cout << "evaluated " << report.per_image.size() << " images | mae " << format_fixed(m.mae) << " | S "
              << format_fixed(m.s_measure) << " | Ephi " << format_fixed(m.e_phi) << " | Fbw "
              << format_fixed(m.f_beta_w) << '\n';
    return 0;
}

struct EvalBgArgs {
    std::string pred_dir;
    std::string out_dir;
};

int cmd_eval_bg(const GlobalOptions& g, const EvalBgArgs& a) {
    const BackgroundReport report = evaluate_background_directory(a.pred_dir, g.eval_config());
    write_report(a.out_dir, report);
    print_warnings(report.warnings);
    std::cout << "evaluated " << report.per_image.size() << " background images | FPR "
              << format_fixed(report.aggregate.fpr) << " | TNR " << format_fixed(report.aggregate.tnr) << '\n';
    return 0;
}

// ---------------------------------------------------------------- curate

struct CurateArgs {
    std::string detections;
    std::string masks_dir;
    double t_c = -1.0;
    double t_f = -1.0;
    bool reweight = false;
    std::string scale_scope = "survivors";
    std::string out;
};

int cmd_curate(const CurateArgs& a) {
    CurationConfig config;
    if (a.t_c >= 0.0)
        config.t_c = a.t_c;
    if (a.t_f >= 0.0)
        config.t_f = a.t_f;
    config.reweight = a.reweight;
    config.scale_scope = parse_scale_scope(a.scale_scope);

    const auto records = load_detections(a.detections, a.masks_dir);
    CurationOptions options;
    options.mask_root = a.masks_dir;
    const TrainingManifest manifest = build_manifest(records, config, options);
    save_manifest(a.out, manifest);

    for (const auto& r : manifest.rejected)
        if (r.reason == RejectReason::io_error)
            std::cerr << "warning: " << r.image_id << ": " << r.detail << '\n';
    std::cout << format_summary(summarize(manifest)) << '\n';
    if (manifest.accepted.empty()) {
        std::cerr << "error: no pseudo-label survived curation\n";
        return kExitEmptyManifest;
    }
    return 0;
}

// ---------------------------------------------------------------- split / sample

struct SplitArgs {
    std::string ids;
    std::vector<double> fractions{0.48, 0.12, 0.40};
    std::string out_dir;
};

int cmd_split(const GlobalOptions& g, const SplitArgs& a) {
    const auto ids = read_id_list(a.ids);
    const auto split = harness::split_dataset(ids, {a.fractions[0], a.fractions[1], a.fractions[2]}, g.seed);
    auto write = [&](const char* name, const std::vector<std::string>& part) {
        std::string text;
        for (const auto& id : part)
            text += id + "\n";
        write_file_atomic(fs::path(a.out_dir) / name, text);
    };
    write("train.txt", split.train);
    write("val.txt", split.val);
    write("test.txt", split.test);
    std::cout << "train " << split.train.size() << " | val " << split.val.size() << " | test "
              << split.test.size() << '\n';
    return 0;
}

struct SampleArgs {
    std::string pool;
    std::vector<int> ks;
    int runs = 30;
    std::string out_dir;
};

int cmd_sample(const GlobalOptions& g, const SampleArgs& a) {
    const auto pool = read_id_list(a.pool);
    for (int k : a.ks) {
        harness::SamplePlan plan{k, a.runs, g.seed, pool};
        const auto samples = harness::draw_samples(plan);
        const auto paths = harness::write_sample_manifests(plan, samples, a.out_dir);
        std::cout << "k=" << k << ": wrote " << paths.size() << " sample manifests\n";
    }
    return 0;
}

// ---------------------------------------------------------------- stats / report

struct StatsArgs {
    std::string registry;
    std::string values;
    std::string metric = "f_beta_w";
    double confidence = 0.95;
    std::string out;
};

int cmd_stats(const StatsArgs& a) {
    std::vector<harness::RunSeries> series;
    if (!a.values.empty()) {
        harness::RunSeries s{fs::path(a.values).stem().string(), {}};
        for (const auto& line : read_id_list(a.values)) {
            std::size_t used = 0;
            double v = std::stod(line, &used);
            if (used != line.size())
                throw SchemaError("not a number in " + a.values + ": '" + line + "'");
            s.values.push_back(v);
        }
        series.push_back(std::move(s));
    } else {
        std::map<harness::CellKey, harness::RunSeries, harness::CellKeyLess> cells;
        for (const auto& r : harness::load_registry(a.registry)) {
            if (r.status != harness::RunStatus::ok)
                continue;
            auto it = r.metrics.find(a.metric);
            if (it == r.metrics.end())
                throw SchemaError("registry run " + r.method + "/" + r.cell + "/" + std::to_string(r.run) +
                                  " has no metric '" + a.metric + "'");
            auto& s = cells[{r.method, r.cell}];
            s.label = r.method + "/" + harness::cell_title(r.cell);
            s.values.push_back(it->second);
        }
        for (auto& [key, s] : cells)
            series.push_back(std::move(s));
    }
    if (series.empty())
        throw InvalidArgument("no successful runs to summarize");

    std::string csv = "# metric=" + a.metric + "\n# confidence=" + format_fixed(a.confidence, 4) +
                      "\n# interval=student-t\n" + harness::stats_csv_header();
    for (const auto& s : series)
        csv += harness::stats_to_csv_rows(s.label, harness::cumulative_stats(s, a.confidence));
    if (a.out.empty())
        std::cout << csv;
    else
        write_file_atomic(a.out, csv);
    return 0;
}

struct ReportArgs {
    std::string registry;
    harness::SummaryOptions options;
    std::string out_dir;
};

int cmd_report(const ReportArgs& a) {
    const auto table = harness::summarize_cells(harness::load_registry(a.registry), a.options);
    write_file_atomic(fs::path(a.out_dir) / "report.md", harness::render_markdown(table));
    write_file_atomic(fs::path(a.out_dir) / "report.csv", harness::render_csv(table));
    print_warnings(table.failures);
    std::cout << "summarized " << table.summaries.size() << " cells for " << table.methods.size() << " methods\n";
    return 0;
}

// ---------------------------------------------------------------- protocol

struct ProtocolArgs {
    std::string method;
    int k = 1;
    int runs = 30;
    std::string cell;
    std::string pool;
    std::string gt_dir;
    std::string work_dir;
    std::string registry;
    std::string hook;
    std::string predictions;
    bool retry_failed = false;
};

int cmd_protocol(const GlobalOptions& g, const ProtocolArgs& a) {
    harness::ProtocolConfig cfg;
    cfg.method = a.method;
    cfg.plan = {a.k, a.runs, g.seed, read_id_list(a.pool)};
    if (!a.cell.empty())
        cfg.cell = a.cell;
    cfg.gt_dir = a.gt_dir;
    cfg.work_dir = a.work_dir;
    if (!a.hook.empty())
        cfg.hook_command = a.hook;
    if (!a.predictions.empty())
        cfg.predictions_root = a.predictions;
    cfg.eval = g.eval_config();
    cfg.workers = g.resolved_workers();
    cfg.retry_failed = a.retry_failed;

    harness::Registry registry(a.registry.empty() ? fs::path(a.work_dir) / "registry.jsonl" : fs::path(a.registry));
    const auto result = harness::run_protocol(cfg, registry);
    std::cout << "executed " << result.executed << " | skipped " << result.skipped << " | failed " << result.failed
              << '\n';
    return 0;
}

// ---------------------------------------------------------------- inpaint

struct GridArgs {
    std::vector<int> tiles{128, 64, 32};
    int stride = 0;
};

fs::path tile_dir(const fs::path& root, int tile) { return root / ("tile" + std::to_string(tile)); }

struct EmitArgs {
    GridArgs grid;
    int width = 512;
    int height = 512;
    std::string image;
    std::string out_dir;
};

int cmd_emit_masks(const EmitArgs& a) {
    int w = a.width;
    int h = a.height;
    if (!a.image.empty()) {
        const auto img = load_probability_map(a.image);
        w = img.width();
        h = img.height();
    }
    for (int tile : a.grid.tiles) {
        const auto grid = inpaint::make_tile_grid(w, h, tile, a.grid.stride);
        const auto paths = inpaint::emit_tile_masks(grid, tile_dir(a.out_dir, tile));
        std::cout << "tile " << tile << ": " << grid.rows << "x" << grid.cols << " grid, " << paths.size()
                  << " masks\n";
    }
    return 0;
}

struct ScoreArgs {
    GridArgs grid;
    std::string original;
    std::string inpainted;
    std::string inpainted_dir;
    int resize = 0;
    std::string out_dir;
};

int cmd_score(const ScoreArgs& a) {
    if (a.inpainted.empty() == a.inpainted_dir.empty())
        throw InvalidArgument("inpaint score: pass exactly one of --inpainted and --inpainted-dir");
    auto load = [&](const fs::path& p) {
        auto img = load_probability_map(p);
        return a.resize > 0 ? resize_to(img, a.resize, a.resize) : img;
    };
    const GrayImage original = load(a.original);

    for (int tile : a.grid.tiles) {
        const auto grid = inpaint::make_tile_grid(original.width(), original.height(), tile, a.grid.stride);
        inpaint::TileSimilarityMap scores;
        if (!a.inpainted.empty()) {
            scores = inpaint::score_tiles(original, load(a.inpainted), grid);
        } else {
            std::optional<GrayImage> current;
            scores = inpaint::score_tiles(
                original,
                [&](const inpaint::Tile& t) -> const GrayImage& {
                    current = load(tile_dir(a.inpainted_dir, tile) / inpaint::tile_mask_name(t.row, t.col));
                    return *current;
                },
                grid);
        }
        const fs::path dir = tile_dir(a.out_dir, tile);
        write_file_atomic(dir / "scores.csv", inpaint::to_csv(scores));
        for (auto metric : {inpaint::SimilarityMetric::pixel, inpaint::SimilarityMetric::region,
                            inpaint::SimilarityMetric::ssim})
            save_map(dir / ("heat_" + std::string(inpaint::to_string(metric)) + ".png"),
                     inpaint::similarity_to_heatmap(scores, metric));
        std::cout << "tile " << tile << ": scored " << scores.scores.size() << " tiles\n";
    }
    return 0;
}

void add_grid_options(CLI::App* cmd, GridArgs& g) {
    cmd->add_option("--tile", g.tiles, "Tile size(s) in pixels; repeat for several grids")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--stride", g.stride, "Window stride in pixels (0 = tile size, non-overlapping)")
        ->check(CLI::NonNegativeNumber);
}

} // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"cod-bench: camouflaged-object-detection evaluation, pseudo-label curation and k-shot protocol tooling",
                 "cod-bench"};
    app.option_defaults()->always_capture_default();
    app.set_config("--config", "", "TOML file setting any option; command-line values take precedence");
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--threshold", g.threshold, "Binarization threshold for predictions (pixel > t is foreground)")
        ->check(CLI::Range(0.0, 1.0));
    app.add_option("--em-threshold", g.em_threshold,
                   "Fixed E-measure threshold in [0,1]; negative selects the adaptive min(1, 2*mean) rule");
    app.add_option("--epsilon", g.epsilon, "Guard added to E-measure and weighted-F denominators")->check(CLI::PositiveNumber);
    app.add_option("--workers", g.workers, "Worker threads (0 = COD_BENCH_WORKERS or all cores)")
        ->envname("COD_BENCH_WORKERS")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--seed", g.seed, "Seed for sampling and splitting");

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "Score prediction maps against ground-truth masks");
    eval->add_option("--pred", eval_args.pred_dir, "Directory of prediction maps")->required();
    eval->add_option("--gt", eval_args.gt_dir, "Directory of ground-truth masks")->required();
    eval->add_option("--out", eval_args.out_dir, "Output directory for metrics.json / metrics.csv")->required();

    EvalBgArgs bg_args;
    auto* eval_bg = app.add_subcommand("eval-bg", "FPR/TNR of predictions on object-free background images");
    eval_bg->add_option("--pred", bg_args.pred_dir, "Directory of prediction maps")->required();
    eval_bg->add_option("--out", bg_args.out_dir, "Output directory for background.json / background.csv")
        ->required();

    CurateArgs curate_args;
    auto* curate = app.add_subcommand("curate", "Filter and weight pseudo-labels into a training manifest");
    curate->add_option("--detections", curate_args.detections, "Detections JSON file")->required();
    curate->add_option("--masks", curate_args.masks_dir, "Directory holding the pseudo-label masks")->required();
    curate->add_option("--t-c", curate_args.t_c, "Confidence threshold (keep confidence >= t_c); negative = off");
    curate->add_option("--t-f", curate_args.t_f, "Foreground-ratio threshold (keep ratio <= t_f); negative = off");
    curate->add_flag("--reweight", curate_args.reweight, "Weight samples by min-max scaled confidence");
    curate->add_option("--scale-scope", curate_args.scale_scope, "Confidences the scaling runs over")
        ->check(CLI::IsMember({"survivors", "all"}));
    curate->add_option("--out", curate_args.out, "Output manifest JSON")->required();

    SplitArgs split_args;
    auto* split = app.add_subcommand("split", "Seeded train/val/test split of an id list");
    split->add_option("--ids", split_args.ids, "File with one image id per line")->required();
    split->add_option("--fractions", split_args.fractions, "Train, val and test fractions")->expected(3);
    split->add_option("--out", split_args.out_dir, "Output directory for train.txt / val.txt / test.txt")
        ->required();

    SampleArgs sample_args;
    auto* sample = app.add_subcommand("sample", "Draw k-shot training samples for repeated runs");
    sample->add_option("--pool", sample_args.pool, "Training pool, one id per line")->required();
    sample->add_option("--k", sample_args.ks, "Shots per run; repeat for several k")->required()->check(
        CLI::PositiveNumber);
    sample->add_option("--runs", sample_args.runs, "Repetitions per k")->check(CLI::PositiveNumber);
    sample->add_option("--out", sample_args.out_dir, "Output directory for k{K}_run{R}.txt")->required();

    StatsArgs stats_args;
    auto* stats = app.add_subcommand("stats", "Cumulative means and Student-t confidence intervals per run index");
    auto* reg_opt = stats->add_option("--registry", stats_args.registry, "Run registry (JSON lines)");
    auto* val_opt = stats->add_option("--values", stats_args.values, "Plain series, one value per line");
    reg_opt->excludes(val_opt);
    stats->add_option("--metric", stats_args.metric, "Registry metric to track");
    stats->add_option("--confidence", stats_args.confidence, "Interval confidence level")
        ->check(CLI::Range(0.0, 1.0));
    stats->add_option("--out", stats_args.out, "Output CSV (stdout when omitted)");

    ReportArgs report_args;
    auto* report = app.add_subcommand("report", "Render the k-shot summary tables from a run registry");
    report->add_option("--registry", report_args.registry, "Run registry (JSON lines)")->required();
    report->add_option("--metric", report_args.options.metric, "Metric for the k-shot layout");
    report->add_option("--base-cell", report_args.options.base_cell, "Cell used as the improvement baseline");
    report->add_option("--full-cell", report_args.options.full_cell, "Cell used as the full-data reference");
    report->add_option("--out", report_args.out_dir, "Output directory for report.md / report.csv")->required();

    ProtocolArgs proto_args;
    auto* protocol = app.add_subcommand("protocol", "Run (or resume) the k-shot sample/train/evaluate loop");
    protocol->add_option("--method", proto_args.method, "Method name recorded in the registry")->required();
    protocol->add_option("--k", proto_args.k, "Shots per run")->check(CLI::PositiveNumber);
    protocol->add_option("--runs", proto_args.runs, "Repetitions")->check(CLI::PositiveNumber);
    protocol->add_option("--cell", proto_args.cell, "Registry cell label (defaults to k; e.g. base, full)");
    protocol->add_option("--pool", proto_args.pool, "Training pool, one id per line")->required();
    protocol->add_option("--gt", proto_args.gt_dir, "Test ground-truth directory")->required();
    protocol->add_option("--work", proto_args.work_dir, "Working directory (samples/, runs/)")->required();
    protocol->add_option("--registry", proto_args.registry, "Registry path (default <work>/registry.jsonl)");
    auto* hook_opt = protocol->add_option("--hook", proto_args.hook,
                                          "Trainer command with {manifest} {out_dir} {k} {run} placeholders");
    auto* pred_opt = protocol->add_option("--predictions", proto_args.predictions,
                                          "Precomputed predictions root holding k{K}_run{R}/ directories");
    hook_opt->excludes(pred_opt);
    protocol->add_flag("--retry-failed", proto_args.retry_failed, "Re-run runs recorded as failed");

    auto* inpaint_cmd = app.add_subcommand("inpaint", "Sliding-window inpainting probe");
    inpaint_cmd->require_subcommand(1);
    EmitArgs emit_args;
    auto* emit = inpaint_cmd->add_subcommand("emit-masks", "Write one hole mask per tile for an external inpainter");
    add_grid_options(emit, emit_args.grid);
    emit->add_option("--width", emit_args.width, "Image width")->check(CLI::PositiveNumber);
    emit->add_option("--height", emit_args.height, "Image height")->check(CLI::PositiveNumber);
    emit->add_option("--image", emit_args.image, "Take width/height from this image instead");
    emit->add_option("--out", emit_args.out_dir, "Output root; masks go to <out>/tile{N}/")->required();

    ScoreArgs score_args;
    auto* score = inpaint_cmd->add_subcommand("score", "Compare original and inpainted tiles");
    add_grid_options(score, score_args.grid);
    score->add_option("--original", score_args.original, "Original image")->required();
    score->add_option("--inpainted", score_args.inpainted, "Single inpainted image scored against every tile");
    score->add_option("--inpainted-dir", score_args.inpainted_dir,
                      "Per-tile results laid out as <dir>/tile{N}/tile_{row}_{col}.png");
    score->add_option("--resize", score_args.resize, "Resize both images to NxN first (0 = keep)")
        ->check(CLI::NonNegativeNumber);
    score->add_option("--out", score_args.out_dir, "Output root; results go to <out>/tile{N}/")->required();

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& s : args)
        argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }

    try {
        if (*eval)
            return cmd_eval(g, eval_args);
        if (*eval_bg)
            return cmd_eval_bg(g, bg_args);
        if (*curate)
            return cmd_curate(curate_args);
        if (*split)
            return cmd_split(g, split_args);
        if (*sample)
            return cmd_sample(g, sample_args);
        if (*stats) {
            if (stats_args.registry.empty() && stats_args.values.empty())
                throw InvalidArgument("stats: pass --registry or --values");
            return cmd_stats(stats_args);
        }
        if (*report)
            return cmd_report(report_args);
        if (*protocol) {
            if (proto_args.hook.empty() && proto_args.predictions.empty())
                throw InvalidArgument("protocol: pass --hook or --predictions");
            return cmd_protocol(g, proto_args);
        }
        if (*emit)
            return cmd_emit_masks(emit_args);
        if (*score)
            return cmd_score(score_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}

} // namespace codbench::cli
