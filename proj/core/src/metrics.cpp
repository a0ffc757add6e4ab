#include "maskprompt/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <json.hpp>

#include "maskprompt/error.hpp"

namespace maskprompt {
namespace {

struct Counts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;
};

Counts confusion(const Mask& pred, const Mask& gt) {
    if (!pred.same_shape(gt)) {
        throw Error(ErrorKind::DimensionMismatch,
                    "mask sizes differ: " + std::to_string(pred.width()) + "x" + std::to_string(pred.height()) +
                        " vs " + std::to_string(gt.width()) + "x" + std::to_string(gt.height()));
    }
    Counts c;
    const auto p = pred.data();
    const auto g = gt.data();
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i]) {
            if (g[i]) ++c.tp; else ++c.fp;
        } else {
            if (g[i]) ++c.fn; else ++c.tn;
        }
    }
    return c;
}

double dice_of(const Counts& c) {
    const std::size_t denom = 2 * c.tp + c.fp + c.fn;
    return denom == 0 ? 1.0 : 2.0 * static_cast<double>(c.tp) / static_cast<double>(denom);
}

double iou_of(const Counts& c) {
    const std::size_t denom = c.tp + c.fp + c.fn;
    return denom == 0 ? 1.0 : static_cast<double>(c.tp) / static_cast<double>(denom);
}

double accuracy_of(const Counts& c) {
    return static_cast<double>(c.tp + c.tn) / static_cast<double>(c.tp + c.fp + c.fn + c.tn);
}

nlohmann::ordered_json mean_std_json(const MeanStd& m) {
    nlohmann::ordered_json j;
    j["mean"] = m.mean;
    j["std"] = m.std;
    return j;
}

std::string pct(const MeanStd& m) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%6.2f ± %5.2f", 100.0 * m.mean, 100.0 * m.std);
    return buf;
}

}  // namespace

double dice(const Mask& pred, const Mask& gt) { return dice_of(confusion(pred, gt)); }
double iou(const Mask& pred, const Mask& gt) { return iou_of(confusion(pred, gt)); }
double pixel_accuracy(const Mask& pred, const Mask& gt) { return accuracy_of(confusion(pred, gt)); }

MetricsReport evaluate(const Mask& pred, const Mask& gt, std::string image_id) {
    const Counts c = confusion(pred, gt);
    return {std::move(image_id), dice_of(c), iou_of(c), accuracy_of(c), std::nullopt};
}

MeanStd mean_std(const std::vector<double>& values) {
    if (values.empty()) throw Error(ErrorKind::EmptyInput, "mean of an empty sequence");
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() == 1) return {mean, 0.0};
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / (n - 1.0))};
}

AggregateReport aggregate(const std::vector<std::vector<MetricsReport>>& runs) {
    if (runs.empty()) throw Error(ErrorKind::EmptyInput, "aggregate needs at least one run");
    std::vector<double> d, j, a;
    for (const auto& run : runs) {
        if (run.empty()) throw Error(ErrorKind::EmptyInput, "aggregate got a run without reports");
        double sd = 0.0, sj = 0.0, sa = 0.0;
        for (const auto& r : run) {
            sd += r.dice;
            sj += r.iou;
            sa += r.accuracy;
        }
        const double n = static_cast<double>(run.size());
        d.push_back(sd / n);
        j.push_back(sj / n);
        a.push_back(sa / n);
    }
    AggregateReport out;
    out.dice = mean_std(d);
    out.iou = mean_std(j);
    out.accuracy = mean_std(a);
    out.n_runs = runs.size();
    return out;
}

double fps_from(std::size_t images, double seconds) {
    if (images == 0) throw Error(ErrorKind::EmptyInput, "empty batch");
    if (!(seconds > 0.0)) throw Error(ErrorKind::InvalidArgument, "elapsed time must be positive");
    return static_cast<double>(images) / seconds;
}

double measure_fps(std::size_t images, const std::function<void(std::size_t)>& stage) {
    if (images == 0) throw Error(ErrorKind::EmptyInput, "empty batch");
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < images; ++i) stage(i);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    // A stage faster than the clock resolution still needs a finite rate.
    return fps_from(images, std::max(elapsed.count(), 1e-9));
}

std::string to_json(const MetricsReport& report) {
    nlohmann::ordered_json j;
    j["image"] = report.image_id;
    j["dice"] = report.dice;
    j["iou"] = report.iou;
    j["accuracy"] = report.accuracy;
    if (report.wall_time_s) j["wall_time_s"] = *report.wall_time_s;
    return j.dump(2) + "\n";
}

std::string to_json(const AggregateReport& report) {
    nlohmann::ordered_json j;
    j["n_runs"] = report.n_runs;
    j["dice"] = mean_std_json(report.dice);
    j["iou"] = mean_std_json(report.iou);
    j["accuracy"] = mean_std_json(report.accuracy);
    if (report.fps) j["fps"] = mean_std_json(*report.fps);
    return j.dump(2) + "\n";
}

std::string format_table(const std::vector<std::pair<std::string, AggregateReport>>& rows) {
    // Cells may hold multi-byte UTF-8 ("±"), so widths count code points.
    auto width = [](const std::string& s) {
        return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) {
            return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
        }));
    };
    std::vector<std::vector<std::string>> table{{"Method", "Dice (%)", "IoU (%)", "ACC (%)", "Time (FPS)"}};
    for (const auto& [name, r] : rows) {
        std::string fps = "-";
        if (r.fps) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.2f ± %.3f", r.fps->mean, r.fps->std);
            fps = buf;
        }
        table.push_back({name, pct(r.dice), pct(r.iou), pct(r.accuracy), fps});
    }
    std::vector<std::size_t> widths(table.front().size(), 0);
    for (const auto& line : table) {
        for (std::size_t c = 0; c < line.size(); ++c) widths[c] = std::max(widths[c], width(line[c]));
    }
    auto render = [&](const std::vector<std::string>& line) {
        std::string out;
        for (std::size_t c = 0; c < line.size(); ++c) {
            if (c > 0) out += " | ";
            out += line[c];
            if (c + 1 < line.size()) out += std::string(widths[c] - width(line[c]), ' ');
        }
        return out + "\n";
    };
    std::string out = render(table.front());
    for (std::size_t c = 0; c < widths.size(); ++c) {
        if (c > 0) out += "-+-";
        out += std::string(widths[c], '-');
    }
    out += "\n";
    for (std::size_t r = 1; r < table.size(); ++r) out += render(table[r]);
    return out;
}

}  // namespace maskprompt
