#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "maskprompt/config.hpp"
#include "maskprompt/metrics.hpp"
#include "maskprompt/prompting.hpp"
#include "maskprompt/pruning.hpp"
#include "maskprompt/raster.hpp"

namespace maskprompt {

/// Output of the prompt stage (label -> prune -> sample) for one coarse mask.
struct PromptStage {
    PruneResult pruned;
    PromptSet prompts;
    bool fallback = false;  // pruning left nothing and thresholds were relaxed
};

// Labels and prunes the coarse mask and samples prompts. When pruning removes
// every component, both thresholds are halved once; if that still leaves
// nothing, the largest raw component becomes the clean mask and the rest
// low-confidence. Throws NoPositiveRegion when the coarse mask is empty.
PromptStage run_prompt_stage(const Mask& coarse, const std::string& image_id, const PipelineConfig& cfg);

/// TP green, FP red, FN blue, background black.
RgbImage render_overlay(const Mask& pred, const Mask& gt);

struct ImageInputs {
    std::string image_id;
    std::filesystem::path image_path;
    std::filesystem::path coarse_path;
    std::optional<std::filesystem::path> gt_path;
};

struct ImageResult {
    std::string image_id;
    std::optional<PromptSet> prompts;
    std::optional<Mask> refined;
    std::optional<MetricsReport> metrics;         // refined vs ground truth
    std::optional<MetricsReport> coarse_metrics;  // coarse vs ground truth
    bool fallback = false;
    std::vector<std::string> warnings;
    std::optional<std::string> error;

    bool ok() const noexcept { return !error.has_value(); }
};

// Runs one image end to end. Outputs (prompt JSON, refined PNG, overlay PNG)
// are written under `out_dir` when it is non-empty; external refinement
// always needs a directory. Failures are captured in ImageResult::error.
ImageResult process_image(const ImageInputs& inputs, const PipelineConfig& cfg,
                          const std::filesystem::path& out_dir);

struct RunResult {
    int run = 1;
    std::vector<ImageResult> images;
};

struct BatchResult {
    std::vector<RunResult> runs;
    std::size_t failures = 0;
    std::vector<std::string> notices;
    std::optional<AggregateReport> aggregate;         // refined vs gt
    std::optional<AggregateReport> coarse_aggregate;  // coarse vs gt

    std::size_t image_count() const noexcept;
};

// Pairs image/coarse/gt files by filename stem. Images without a coarse mask
// are reported as failures by process_image. Throws Config when a directory
// is missing.
std::vector<ImageInputs> discover_inputs(const std::filesystem::path& image_dir,
                                         const std::filesystem::path& coarse_dir,
                                         const std::filesystem::path& gt_dir);

// Full batch. With runs > 1, coarse masks are read from coarse_dir/run_<k>
// and outputs go to output_dir/run_<k>. Writes metrics.csv, summary.json and
// summary.txt at the top of output_dir.
BatchResult run_pipeline(const PipelineConfig& cfg);

struct AblationRow {
    int count = 0;
    int n_positive = 0;
    int n_negative = 0;
    std::optional<double> mean_dice;
    std::size_t images = 0;
    std::size_t failed = 0;
    std::string status;
};

/// Per-count split: positives get the odd remainder.
std::pair<int, int> split_prompt_count(int count);

// Re-runs the pipeline in memory for each total prompt count and reports the
// mean Dice against ground truth. Needs ground truth and a refiner that
// produces masks.
std::vector<AblationRow> ablate_prompt_count(const PipelineConfig& cfg, const std::vector<int>& counts);
std::string ablation_csv(const std::vector<AblationRow>& rows);

}  // namespace maskprompt
