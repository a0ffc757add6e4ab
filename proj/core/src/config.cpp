#include "maskprompt/config.hpp"

#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>

#include "maskprompt/error.hpp"

namespace maskprompt {
namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
    T out{};
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw Error(ErrorKind::Config, "'" + std::string(key) + "' expects an integer, got '" + std::string(value) + "'");
    }
    return out;
}

}  // namespace

std::string_view to_string(RefineMode mode) noexcept {
    switch (mode) {
        case RefineMode::Oracle: return "oracle";
        case RefineMode::External: return "external";
        case RefineMode::Export: return "export";
    }
    return "oracle";
}

std::string_view to_string(Connectivity connectivity) noexcept {
    return connectivity == Connectivity::Four ? "four" : "eight";
}

Connectivity parse_connectivity(std::string_view text) {
    if (text == "four" || text == "4") return Connectivity::Four;
    if (text == "eight" || text == "8") return Connectivity::Eight;
    throw Error(ErrorKind::Config, "connectivity must be 'four' or 'eight', got '" + std::string(text) + "'");
}

void PipelineConfig::set(std::string_view key, std::string_view raw) {
    const std::string_view value = trim(raw);
    if (key == "connectivity") connectivity = parse_connectivity(value);
    else if (key == "prune.min_area") prune.min_area = parse_number<std::int64_t>(key, value);
    else if (key == "prune.min_extent") prune.min_extent = parse_number<int>(key, value);
    else if (key == "prompt.n_positive") prompt.n_positive = parse_number<int>(key, value);
    else if (key == "prompt.n_negative") prompt.n_negative = parse_number<int>(key, value);
    else if (key == "prompt.negative_source") prompt.negative_source = parse_negative_source(value);
    else if (key == "prompt.margin_radius") prompt.margin_radius = parse_number<int>(key, value);
    else if (key == "refine.mode") {
        if (value == "oracle") refine_mode = RefineMode::Oracle;
        else if (value == "external") refine_mode = RefineMode::External;
        else if (value == "export") refine_mode = RefineMode::Export;
        else throw Error(ErrorKind::Config, "refine.mode must be oracle, external or export");
    }
    else if (key == "refine.external_command") external_command = std::string(value);
    else if (key == "refine.intensity_tolerance") refine.intensity_tolerance = parse_number<int>(key, value);
    else if (key == "refine.negative_block_radius") refine.negative_block_radius = parse_number<int>(key, value);
    else if (key == "refine.connectivity") refine.connectivity = parse_connectivity(value);
    else if (key == "refine.max_iterations") refine.max_iterations = parse_number<int>(key, value);
    else if (key == "paths.images") image_dir = std::string(value);
    else if (key == "paths.coarse") coarse_dir = std::string(value);
    else if (key == "paths.ground_truth") gt_dir = std::string(value);
    else if (key == "paths.output") output_dir = std::string(value);
    else if (key == "runs") runs = parse_number<int>(key, value);
    else if (key == "workers") workers = parse_number<int>(key, value);
    else throw Error(ErrorKind::Config, "unknown config key '" + std::string(key) + "'");
}

void PipelineConfig::validate() const {
    prune.validate();
    prompt.validate();
    refine.validate();
    if (runs < 1) throw Error(ErrorKind::Config, "runs must be >= 1");
    if (workers < 1) throw Error(ErrorKind::Config, "workers must be >= 1");
    if (refine_mode == RefineMode::External && external_command.empty()) {
        throw Error(ErrorKind::Config, "refine.mode = external needs refine.external_command");
    }
}

std::string PipelineConfig::to_text() const {
    std::ostringstream out;
    out << "connectivity = " << to_string(connectivity) << '\n'
        << "prune.min_area = " << prune.min_area << '\n'
        << "prune.min_extent = " << prune.min_extent << '\n'
        << "prompt.n_positive = " << prompt.n_positive << '\n'
        << "prompt.n_negative = " << prompt.n_negative << '\n'
        << "prompt.negative_source = " << to_string(prompt.negative_source) << '\n'
        << "prompt.margin_radius = " << prompt.margin_radius << '\n'
        << "refine.mode = " << to_string(refine_mode) << '\n';
    if (!external_command.empty()) out << "refine.external_command = " << external_command << '\n';
    out << "refine.intensity_tolerance = " << refine.intensity_tolerance << '\n'
        << "refine.negative_block_radius = " << refine.negative_block_radius << '\n'
        << "refine.connectivity = " << to_string(refine.connectivity) << '\n'
        << "refine.max_iterations = " << refine.max_iterations << '\n';
    if (!image_dir.empty()) out << "paths.images = " << image_dir.string() << '\n';
    if (!coarse_dir.empty()) out << "paths.coarse = " << coarse_dir.string() << '\n';
    if (!gt_dir.empty()) out << "paths.ground_truth = " << gt_dir.string() << '\n';
    if (!output_dir.empty()) out << "paths.output = " << output_dir.string() << '\n';
    out << "runs = " << runs << '\n' << "workers = " << workers << '\n';
    return out.str();
}

PipelineConfig parse_config(std::string_view text) {
    PipelineConfig cfg;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorKind::Config, "line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        try {
            cfg.set(trim(line.substr(0, eq)), line.substr(eq + 1));
        } catch (const Error& e) {
            throw Error(ErrorKind::Config, "line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Config, "cannot read config file " + path.string());
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return parse_config(text);
}

}  // namespace maskprompt
