#include "maskprompt/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <thread>

#include "maskprompt/components.hpp"
#include "maskprompt/error.hpp"
#include "maskprompt/refiner.hpp"

namespace maskprompt {
namespace fs = std::filesystem;

namespace {

bool is_image_file(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".png" || ext == ".pgm";
}

// stem -> path; the first match in sorted order wins for duplicate stems.
std::map<std::string, fs::path> index_by_stem(const fs::path& dir) {
    std::map<std::string, fs::path> out;
    if (dir.empty()) return out;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw Error(ErrorKind::Config, "not a directory: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && is_image_file(entry.path())) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) out.emplace(f.stem().string(), f);
    return out;
}

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += "'\\''"; else out += c;
    }
    return out + "'";
}

const ComponentStats& largest_component(const std::vector<ComponentStats>& stats) {
    return *std::min_element(stats.begin(), stats.end(), [](const ComponentStats& a, const ComponentStats& b) {
        return a.area != b.area ? a.area > b.area : a.id < b.id;
    });
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\""; else if (c == '\n') out += ' '; else out += c;
    }
    return out + "\"";
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << text;
}

template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
    const std::size_t pool = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), n);
    if (pool <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> threads;
    threads.reserve(pool);
    for (std::size_t t = 0; t < pool; ++t) {
        threads.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) fn(i);
        });
    }
}

std::vector<std::vector<MetricsReport>> collect(const std::vector<RunResult>& runs, bool coarse) {
    std::vector<std::vector<MetricsReport>> out;
    for (const auto& run : runs) {
        std::vector<MetricsReport> reports;
        for (const auto& img : run.images) {
            const auto& m = coarse ? img.coarse_metrics : img.metrics;
            if (m) reports.push_back(*m);
        }
        if (!reports.empty()) out.push_back(std::move(reports));
    }
    return out;
}

fs::path run_dir(const fs::path& base, int run, int runs) {
    return runs > 1 ? base / ("run_" + std::to_string(run)) : base;
}

}  // namespace

PromptStage run_prompt_stage(const Mask& coarse, const std::string& image_id, const PipelineConfig& cfg) {
    PromptStage out;
    const Labeling labeling = label_components(coarse, cfg.connectivity);
    out.pruned = prune(labeling.labels, labeling.stats, cfg.prune);

    if (out.pruned.retained_ids.empty() && cfg.prompt.n_positive > 0) {
        if (labeling.stats.empty()) throw Error(ErrorKind::NoPositiveRegion, "no positive region: coarse mask is empty");
        out.fallback = true;
        PruneConfig relaxed{cfg.prune.min_area / 2, cfg.prune.min_extent / 2};
        out.pruned = prune(labeling.labels, labeling.stats, relaxed);
        out.prompts.warnings.push_back("pruning removed every component; thresholds halved");
        if (out.pruned.retained_ids.empty()) {
            const std::int32_t keep = largest_component(labeling.stats).id;
            out.pruned.clean_mask = component_mask(labeling.labels, keep);
            out.pruned.low_conf_mask = coarse;
            for (std::size_t i = 0; i < coarse.size(); ++i) {
                if (out.pruned.clean_mask[i]) out.pruned.low_conf_mask.set(i, false);
            }
            out.pruned.retained_ids = {keep};
            out.pruned.removed_ids.clear();
            for (const auto& s : labeling.stats) {
                if (s.id != keep) out.pruned.removed_ids.push_back(s.id);
            }
            out.prompts.warnings.push_back("relaxed pruning still empty; using the largest raw component");
        }
    }

    auto warnings = std::move(out.prompts.warnings);
    out.prompts = generate_prompts(out.pruned.clean_mask, out.pruned.low_conf_mask, image_id, cfg.prompt,
                                   cfg.connectivity);
    warnings.insert(warnings.end(), out.prompts.warnings.begin(), out.prompts.warnings.end());
    out.prompts.warnings = std::move(warnings);
    return out;
}

RgbImage render_overlay(const Mask& pred, const Mask& gt) {
    if (!pred.same_shape(gt)) throw Error(ErrorKind::DimensionMismatch, "overlay masks differ in size");
    RgbImage img{pred.width(), pred.height(), std::vector<std::uint8_t>(pred.size() * 3, 0)};
    for (std::size_t i = 0; i < pred.size(); ++i) {
        std::uint8_t* px = &img.data[i * 3];
        if (pred[i] && gt[i]) px[1] = 255;       // TP
        else if (pred[i]) px[0] = 255;           // FP
        else if (gt[i]) px[2] = 255;             // FN
    }
    return img;
}

ImageResult process_image(const ImageInputs& inputs, const PipelineConfig& cfg, const fs::path& out_dir) {
    ImageResult result;
    result.image_id = inputs.image_id;
    try {
        if (inputs.coarse_path.empty()) {
            throw Error(ErrorKind::FileNotFound, "no coarse mask pairs with image '" + inputs.image_id + "'");
        }
        const Raster image = load_grayscale(inputs.image_path);
        const Mask coarse = binarize(load_grayscale(inputs.coarse_path));
        if (coarse.width() != image.width() || coarse.height() != image.height()) {
            throw Error(ErrorKind::DimensionMismatch, "coarse mask and image differ in size");
        }
        std::optional<Mask> gt;
        if (inputs.gt_path) {
            gt = binarize(load_grayscale(*inputs.gt_path));
            if (!gt->same_shape(coarse)) throw Error(ErrorKind::DimensionMismatch, "ground truth and image differ in size");
            result.coarse_metrics = evaluate(coarse, *gt, inputs.image_id);
        }

        PromptStage stage = run_prompt_stage(coarse, inputs.image_id, cfg);
        result.fallback = stage.fallback;
        result.warnings = stage.prompts.warnings;

        const fs::path json_path = out_dir / (inputs.image_id + ".prompts.json");
        const fs::path mask_path = out_dir / (inputs.image_id + ".refined.png");
        if (!out_dir.empty()) save_prompt_set(stage.prompts, json_path.string());

        switch (cfg.refine_mode) {
            case RefineMode::Oracle:
                result.refined = refine(image, stage.prompts, cfg.refine);
                if (!out_dir.empty()) save_mask(*result.refined, mask_path);
                break;
            case RefineMode::External: {
                if (out_dir.empty()) throw Error(ErrorKind::Config, "external refinement needs an output directory");
                const std::string cmd = cfg.external_command + " --image " + shell_quote(inputs.image_path.string()) +
                                        " --prompts " + shell_quote(json_path.string()) + " --output " +
                                        shell_quote(mask_path.string());
                const int status = std::system(cmd.c_str());
                if (status != 0) {
                    throw Error(ErrorKind::Io, "external refiner exited with status " + std::to_string(status));
                }
                Mask refined = binarize(load_grayscale(mask_path));
                if (!refined.same_shape(coarse)) throw Error(ErrorKind::DimensionMismatch, "external refiner output has wrong size");
                result.refined = std::move(refined);
                break;
            }
            case RefineMode::Export:
                break;
        }

        if (gt && result.refined) {
            result.metrics = evaluate(*result.refined, *gt, inputs.image_id);
            if (!out_dir.empty()) save_rgb(render_overlay(*result.refined, *gt), out_dir / (inputs.image_id + ".overlay.png"));
        }
        result.prompts = std::move(stage.prompts);
    } catch (const Error& e) {
        result.error = e.what();
    }
    return result;
}

std::size_t BatchResult::image_count() const noexcept {
    std::size_t n = 0;
    for (const auto& r : runs) n += r.images.size();
    return n;
}

std::vector<ImageInputs> discover_inputs(const fs::path& image_dir, const fs::path& coarse_dir, const fs::path& gt_dir) {
    const auto images = index_by_stem(image_dir);
    const auto coarse = index_by_stem(coarse_dir);
    const auto gts = index_by_stem(gt_dir);
    std::vector<ImageInputs> out;
    for (const auto& [stem, path] : images) {
        ImageInputs in{stem, path, {}, std::nullopt};
        if (auto it = coarse.find(stem); it != coarse.end()) in.coarse_path = it->second;
        if (auto it = gts.find(stem); it != gts.end()) in.gt_path = it->second;
        out.push_back(std::move(in));
    }
    return out;
}

BatchResult run_pipeline(const PipelineConfig& cfg) {
    cfg.validate();
    if (cfg.image_dir.empty() || cfg.coarse_dir.empty() || cfg.output_dir.empty()) {
        throw Error(ErrorKind::Config, "paths.images, paths.coarse and paths.output are required");
    }
    BatchResult batch;
    fs::create_directories(cfg.output_dir);
    for (int run = 1; run <= cfg.runs; ++run) {
        const fs::path coarse_dir = run_dir(cfg.coarse_dir, run, cfg.runs);
        const fs::path out_dir = run_dir(cfg.output_dir, run, cfg.runs);
        const auto inputs = discover_inputs(cfg.image_dir, coarse_dir, cfg.gt_dir);
        fs::create_directories(out_dir);
        RunResult rr{run, std::vector<ImageResult>(inputs.size())};
        parallel_for(inputs.size(), cfg.workers, [&](std::size_t i) { rr.images[i] = process_image(inputs[i], cfg, out_dir); });
        batch.runs.push_back(std::move(rr));
    }
    if (batch.image_count() == 0) batch.notices.push_back("no inputs: " + cfg.image_dir.string() + " holds no images");

    std::string csv = "run,image,status,dice,iou,accuracy,coarse_dice,fallback,truncated,n_positive,n_negative,message\n";
    for (const auto& run : batch.runs) {
        for (const auto& img : run.images) {
            if (!img.ok()) ++batch.failures;
            csv += std::to_string(run.run) + "," + csv_quote(img.image_id) + "," + (img.ok() ? "ok" : "failed") + ",";
            csv += img.metrics ? format_double(img.metrics->dice) + "," + format_double(img.metrics->iou) + "," +
                                     format_double(img.metrics->accuracy)
                               : std::string(",,");
            csv += "," + (img.coarse_metrics ? format_double(img.coarse_metrics->dice) : std::string());
            csv += std::string(",") + (img.fallback ? "1" : "0") + "," + (img.prompts && img.prompts->truncated ? "1" : "0");
            csv += "," + (img.prompts ? std::to_string(img.prompts->n_positive) : std::string());
            csv += "," + (img.prompts ? std::to_string(img.prompts->n_negative) : std::string());
            std::string message = img.error.value_or("");
            for (const auto& w : img.warnings) message += (message.empty() ? "" : "; ") + w;
            csv += "," + csv_quote(message) + "\n";
        }
    }
    write_text(cfg.output_dir / "metrics.csv", csv);

    const auto refined = collect(batch.runs, false);
    const auto coarse = collect(batch.runs, true);
    if (!refined.empty()) batch.aggregate = aggregate(refined);
    if (!coarse.empty()) batch.coarse_aggregate = aggregate(coarse);
    if (batch.aggregate) {
        write_text(cfg.output_dir / "summary.json", to_json(*batch.aggregate));
        std::vector<std::pair<std::string, AggregateReport>> rows;
        if (batch.coarse_aggregate) rows.emplace_back("coarse", *batch.coarse_aggregate);
        rows.emplace_back("refined", *batch.aggregate);
        write_text(cfg.output_dir / "summary.txt", format_table(rows));
    }
    return batch;
}

std::pair<int, int> split_prompt_count(int count) {
    const int neg = count / 2;
    return {count - neg, neg};
}

std::vector<AblationRow> ablate_prompt_count(const PipelineConfig& base, const std::vector<int>& counts) {
    base.validate();
    if (base.gt_dir.empty()) throw Error(ErrorKind::Config, "ablation needs paths.ground_truth");
    if (base.refine_mode == RefineMode::Export) throw Error(ErrorKind::Config, "ablation needs a refiner, not export mode");
    std::vector<AblationRow> rows;
    for (int count : counts) {
        if (count < 0) throw Error(ErrorKind::Config, "prompt counts must be non-negative");
        PipelineConfig cfg = base;
        std::tie(cfg.prompt.n_positive, cfg.prompt.n_negative) = split_prompt_count(count);
        AblationRow row{count, cfg.prompt.n_positive, cfg.prompt.n_negative, std::nullopt, 0, 0, "ok"};
        std::vector<std::vector<MetricsReport>> runs;
        std::string first_error;
        for (int run = 1; run <= cfg.runs; ++run) {
            const auto inputs = discover_inputs(cfg.image_dir, run_dir(cfg.coarse_dir, run, cfg.runs), cfg.gt_dir);
            fs::path scratch;
            if (cfg.refine_mode == RefineMode::External) {
                scratch = cfg.output_dir / ("ablate_" + std::to_string(count)) / ("run_" + std::to_string(run));
                fs::create_directories(scratch);
            }
            std::vector<ImageResult> results(inputs.size());
            parallel_for(inputs.size(), cfg.workers, [&](std::size_t i) { results[i] = process_image(inputs[i], cfg, scratch); });
            std::vector<MetricsReport> reports;
            for (const auto& r : results) {
                ++row.images;
                if (!r.ok()) {
                    ++row.failed;
                    if (first_error.empty()) first_error = *r.error;
                } else if (r.metrics) {
                    reports.push_back(*r.metrics);
                }
            }
            if (!reports.empty()) runs.push_back(std::move(reports));
        }
        if (!runs.empty()) row.mean_dice = aggregate(runs).dice.mean;
        if (row.failed == row.images && row.images > 0) row.status = "failed: " + first_error;
        else if (row.failed > 0) row.status = "partial: " + std::to_string(row.failed) + " failed (" + first_error + ")";
        else if (row.images == 0) row.status = "no inputs";
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string ablation_csv(const std::vector<AblationRow>& rows) {
    std::string out = "count,n_positive,n_negative,mean_dice,images,failed,status\n";
    for (const auto& r : rows) {
        out += std::to_string(r.count) + "," + std::to_string(r.n_positive) + "," + std::to_string(r.n_negative) + "," +
               (r.mean_dice ? format_double(*r.mean_dice) : std::string()) + "," + std::to_string(r.images) + "," +
               std::to_string(r.failed) + "," + csv_quote(r.status) + "\n";
    }
    return out;
}

}  // namespace maskprompt
