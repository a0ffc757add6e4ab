#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "maskprompt/raster.hpp"

namespace maskprompt {

// Overlap metrics. Dice and IoU are 1.0 when both masks are empty.
// All throw DimensionMismatch for masks of different sizes.
double dice(const Mask& pred, const Mask& gt);
double iou(const Mask& pred, const Mask& gt);
double pixel_accuracy(const Mask& pred, const Mask& gt);

struct MetricsReport {
    std::string image_id;
    double dice = 0.0;
    double iou = 0.0;
    double accuracy = 0.0;
    std::optional<double> wall_time_s;
};

MetricsReport evaluate(const Mask& pred, const Mask& gt, std::string image_id = {});

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;  // sample (N-1) standard deviation; 0 for a single value
};

MeanStd mean_std(const std::vector<double>& values);

struct AggregateReport {
    MeanStd dice;
    MeanStd iou;
    MeanStd accuracy;
    std::size_t n_runs = 0;
    std::optional<MeanStd> fps;
};

// Each inner vector holds one run's per-image reports. Metrics are averaged
// within a run first; mean and std are then taken across run means.
// Throws EmptyInput when there are no runs or a run is empty.
AggregateReport aggregate(const std::vector<std::vector<MetricsReport>>& runs);

double fps_from(std::size_t images, double seconds);

// Wall-clock throughput of `stage(i)` over i in [0, images), run on the
// calling thread. Throws EmptyInput for an empty batch.
double measure_fps(std::size_t images, const std::function<void(std::size_t)>& stage);

std::string to_json(const MetricsReport& report);
std::string to_json(const AggregateReport& report);

// Aligned text table with Dice %, IoU %, ACC % and FPS columns, one row
// per labelled aggregate.
std::string format_table(const std::vector<std::pair<std::string, AggregateReport>>& rows);

}  // namespace maskprompt
