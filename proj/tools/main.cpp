// maskprompt: coarse mask -> point prompts -> refined mask -> metrics.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "maskprompt/config.hpp"
#include "maskprompt/error.hpp"
#include "maskprompt/metrics.hpp"
#include "maskprompt/phantom.hpp"
#include "maskprompt/pipeline.hpp"
#include "maskprompt/prompting.hpp"
#include "maskprompt/raster.hpp"
#include "maskprompt/refiner.hpp"

namespace fs = std::filesystem;
using namespace maskprompt;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailures = 1;
constexpr int kExitConfig = 2;

// Config-file path plus flag overrides. Flags are applied after the file, so
// they win.
struct ConfigOptions {
    std::string config_path;
    std::vector<std::string> sets;
    std::map<std::string, std::string> flags;

    void add_to(CLI::App* cmd, bool with_paths) {
        cmd->add_option("-c,--config", config_path, "key = value config file");
        cmd->add_option("--set", sets, "override any config key, e.g. --set prune.min_area=500");
        add(cmd, "--connectivity", "connectivity", "four or eight");
        add(cmd, "--min-area", "prune.min_area", "prune components smaller than this many pixels");
        add(cmd, "--min-extent", "prune.min_extent", "prune components narrower or shorter than this");
        add(cmd, "--n-positive", "prompt.n_positive", "positive prompts per image");
        add(cmd, "--n-negative", "prompt.n_negative", "negative prompts per image");
        add(cmd, "--negative-source", "prompt.negative_source", "background_margin, low_confidence or both");
        add(cmd, "--margin-radius", "prompt.margin_radius", "negatives keep this distance from clean foreground");
        add(cmd, "--tolerance", "refine.intensity_tolerance", "oracle refiner gray-level tolerance");
        add(cmd, "--block-radius", "refine.negative_block_radius", "oracle refiner negative disk radius");
        add(cmd, "--refine-connectivity", "refine.connectivity", "oracle refiner connectivity");
        if (with_paths) {
            add(cmd, "--images", "paths.images", "directory of grayscale images");
            add(cmd, "--coarse", "paths.coarse", "directory of coarse masks");
            add(cmd, "--gt", "paths.ground_truth", "directory of ground-truth masks");
            add(cmd, "--output", "paths.output", "output directory");
            add(cmd, "--refine-mode", "refine.mode", "oracle, external or export");
            add(cmd, "--external-command", "refine.external_command", "adapter executable for external mode");
            add(cmd, "--runs", "runs", "number of runs (coarse masks in run_<k>/ when > 1)");
            add(cmd, "--workers", "workers", "worker threads");
        }
    }

    PipelineConfig build() const {
        PipelineConfig cfg = config_path.empty() ? PipelineConfig{} : load_config(config_path);
        for (const auto& kv : sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw Error(ErrorKind::Config, "--set expects key=value, got '" + kv + "'");
            cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
        }
        for (const auto& [key, value] : flags) cfg.set(key, value);
        cfg.validate();
        return cfg;
    }

private:
    void add(CLI::App* cmd, const std::string& flag, const std::string& key, const std::string& help) {
        cmd->add_option_function<std::string>(flag, [this, key](const std::string& v) { flags[key] = v; }, help);
    }
};

void print_warnings(const std::string& id, const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning [" << id << "]: " << w << '\n';
}

int cmd_prompts(const ConfigOptions& opts, const std::string& mask_path, const std::string& out, std::string image_id) {
    const PipelineConfig cfg = opts.build();
    const Mask coarse = binarize(load_grayscale(mask_path));
    if (image_id.empty()) image_id = fs::path(mask_path).stem().string();
    const PromptStage stage = run_prompt_stage(coarse, image_id, cfg);
    print_warnings(image_id, stage.prompts.warnings);
    if (out.empty() || out == "-") std::cout << to_json(stage.prompts);
    else save_prompt_set(stage.prompts, out);
    return kExitOk;
}

int cmd_refine(const ConfigOptions& opts, const std::string& image_path, const std::string& prompts_path,
               const std::string& out) {
    const PipelineConfig cfg = opts.build();
    const Raster image = load_grayscale(image_path);
    const PromptSet prompts = load_prompt_set(prompts_path);
    save_mask(refine(image, prompts, cfg.refine), out);
    return kExitOk;
}

int cmd_eval(const std::string& pred_path, const std::string& gt_path, bool json) {
    const Mask pred = binarize(load_grayscale(pred_path));
    const Mask gt = binarize(load_grayscale(gt_path));
    const MetricsReport report = evaluate(pred, gt, fs::path(pred_path).stem().string());
    if (json) {
        std::cout << to_json(report);
    } else {
        std::printf("dice     %.6f\niou      %.6f\naccuracy %.6f\n", report.dice, report.iou, report.accuracy);
    }
    return kExitOk;
}

int cmd_pipeline(const ConfigOptions& opts) {
    const PipelineConfig cfg = opts.build();
    const BatchResult batch = run_pipeline(cfg);
    for (const auto& n : batch.notices) std::cout << n << '\n';
    for (const auto& run : batch.runs) {
        for (const auto& img : run.images) {
            print_warnings(img.image_id, img.warnings);
            if (img.error) std::cerr << "error [" << img.image_id << "]: " << *img.error << '\n';
        }
    }
    std::cout << "processed " << batch.image_count() << " image(s), " << batch.failures << " failure(s)\n";
    if (batch.aggregate) {
        std::vector<std::pair<std::string, AggregateReport>> rows;
        if (batch.coarse_aggregate) rows.emplace_back("coarse", *batch.coarse_aggregate);
        rows.emplace_back("refined", *batch.aggregate);
        std::cout << format_table(rows);
    }
    return batch.failures == 0 ? kExitOk : kExitFailures;
}

int cmd_ablate(const ConfigOptions& opts, const std::vector<int>& counts, const std::string& out) {
    const PipelineConfig cfg = opts.build();
    const auto rows = ablate_prompt_count(cfg, counts);
    const std::string csv = ablation_csv(rows);
    if (out.empty() || out == "-") {
        std::cout << csv;
    } else {
        std::ofstream f(out, std::ios::binary);
        if (!f) throw Error(ErrorKind::Io, "cannot write " + out);
        f << csv;
    }
    const bool any_failed = std::any_of(rows.begin(), rows.end(), [](const AblationRow& r) { return r.failed > 0; });
    return any_failed ? kExitFailures : kExitOk;
}

int cmd_phantom(PhantomSpec spec, int count, const std::string& out) {
    const fs::path root(out);
    for (const char* sub : {"images", "coarse", "gt", "specs"}) fs::create_directories(root / sub);
    const std::uint64_t first_seed = spec.rng_seed;
    for (int i = 0; i < count; ++i) {
        spec.rng_seed = first_seed + static_cast<std::uint64_t>(i);
        const std::string stem = "phantom_" + std::to_string(spec.rng_seed);
        const Phantom ph = generate_phantom(spec);
        save_grayscale(ph.image, root / "images" / (stem + ".png"));
        save_mask(ph.coarse_mask, root / "coarse" / (stem + ".png"));
        save_mask(ph.gt_mask, root / "gt" / (stem + ".png"));
        std::ofstream(root / "specs" / (stem + ".json"), std::ios::binary) << to_json(spec);
    }
    std::cout << "wrote " << count << " phantom(s) to " << root.string() << '\n';
    return kExitOk;
}

int cmd_bench(const ConfigOptions& opts, int size, int images, const std::string& stage, std::uint64_t seed) {
    PipelineConfig cfg = opts.build();
    // Timing is single-threaded by contract.
    cfg.workers = 1;
    if (stage != "prompts" && stage != "full") throw Error(ErrorKind::Config, "--stage must be prompts or full");

    std::vector<Phantom> batch;
    PhantomSpec spec;
    spec.width = size;
    spec.height = size;
    for (int i = 0; i < images; ++i) {
        spec.rng_seed = seed + static_cast<std::uint64_t>(i);
        batch.push_back(generate_phantom(spec));
    }
    const double fps = measure_fps(batch.size(), [&](std::size_t i) {
        const PromptStage s = run_prompt_stage(batch[i].coarse_mask, "bench", cfg);
        if (stage == "full") (void)refine(batch[i].image, s.prompts, cfg.refine);
    });
    std::printf("stage=%s size=%dx%d images=%d fps=%.2f\n", stage.c_str(), size, size, images, fps);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"maskprompt: point prompts from coarse segmentation masks"};
    app.require_subcommand(1);

    ConfigOptions prompts_opts, refine_opts, pipeline_opts, ablate_opts, bench_opts;

    std::string mask_path, prompts_out, image_id;
    auto* prompts = app.add_subcommand("prompts", "coarse mask -> prompt set JSON");
    prompts->add_option("--mask", mask_path, "coarse mask (PNG/PGM)")->required();
    prompts->add_option("-o,--out", prompts_out, "output JSON (default stdout)");
    prompts->add_option("--image-id", image_id, "identifier stored in the JSON (default: mask stem)");
    prompts_opts.add_to(prompts, false);

    std::string refine_image, refine_prompts, refine_out;
    auto* refine_cmd = app.add_subcommand("refine", "image + prompt set -> refined mask (oracle refiner)");
    refine_cmd->add_option("--image", refine_image, "grayscale image")->required();
    refine_cmd->add_option("--prompts", refine_prompts, "prompt set JSON")->required();
    refine_cmd->add_option("-o,--output", refine_out, "output mask PNG")->required();
    refine_opts.add_to(refine_cmd, false);

    std::string pred_path, gt_path;
    bool eval_json = false;
    auto* eval = app.add_subcommand("eval", "Dice / IoU / accuracy of a predicted mask");
    eval->add_option("--pred", pred_path, "predicted mask")->required();
    eval->add_option("--gt", gt_path, "ground-truth mask")->required();
    eval->add_flag("--json", eval_json, "print JSON");

    auto* pipeline = app.add_subcommand("pipeline", "full batch: prompts, refinement, evaluation");
    pipeline_opts.add_to(pipeline, true);

    std::vector<int> counts{2, 6, 10, 20, 40, 60};
    std::string ablate_out;
    auto* ablate = app.add_subcommand("ablate", "prompt-count sweep -> CSV of mean Dice");
    ablate->add_option("--counts", counts, "total prompt counts")->delimiter(',');
    ablate->add_option("--csv", ablate_out, "output CSV (default stdout)");
    ablate_opts.add_to(ablate, true);

    PhantomSpec spec;
    int phantom_count = 1;
    std::string phantom_out;
    auto* phantom = app.add_subcommand("phantom", "synthetic image / ground truth / coarse mask fixtures");
    phantom->add_option("-o,--out", phantom_out, "output directory")->required();
    phantom->add_option("-n,--count", phantom_count, "number of phantoms (seeds seed..seed+n-1)");
    phantom->add_option("--seed", spec.rng_seed, "first RNG seed");
    phantom->add_option("--width", spec.width);
    phantom->add_option("--height", spec.height);
    phantom->add_option("--ribbons", spec.ribbon_count);
    phantom->add_option("--thickness", spec.ribbon_thickness);
    phantom->add_option("--blobs", spec.noise_blob_count);
    phantom->add_option("--blob-max-area", spec.noise_blob_max_area);
    phantom->add_option("--erosion", spec.coarse_erosion);

    int bench_size = 1024, bench_images = 10;
    std::uint64_t bench_seed = 1;
    std::string bench_stage = "prompts";
    auto* bench = app.add_subcommand("bench", "single-threaded throughput on synthetic masks");
    bench->add_option("--size", bench_size, "square image side");
    bench->add_option("--images", bench_images, "batch size");
    bench->add_option("--stage", bench_stage, "prompts or full");
    bench->add_option("--seed", bench_seed, "first phantom seed");
    bench_opts.add_to(bench, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*prompts) return cmd_prompts(prompts_opts, mask_path, prompts_out, image_id);
        if (*refine_cmd) return cmd_refine(refine_opts, refine_image, refine_prompts, refine_out);
        if (*eval) return cmd_eval(pred_path, gt_path, eval_json);
        if (*pipeline) return cmd_pipeline(pipeline_opts);
        if (*ablate) return cmd_ablate(ablate_opts, counts, ablate_out);
        if (*phantom) return cmd_phantom(spec, phantom_count, phantom_out);
        if (*bench) return cmd_bench(bench_opts, bench_size, bench_images, bench_stage, bench_seed);
    } catch (const Error& e) {
        std::cerr << "maskprompt: " << e.what() << '\n';
        return e.kind() == ErrorKind::Config || e.kind() == ErrorKind::Schema ? kExitConfig : kExitFailures;
    } catch (const std::exception& e) {
        std::cerr << "maskprompt: " << e.what() << '\n';
        return kExitFailures;
    }
    return kExitOk;
}
