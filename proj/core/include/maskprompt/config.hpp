#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "maskprompt/components.hpp"
#include "maskprompt/prompting.hpp"
#include "maskprompt/pruning.hpp"
#include "maskprompt/refiner.hpp"

namespace maskprompt {

enum class RefineMode {
    Oracle,    // built-in region grower
    External,  // shell out to an adapter executable
    Export,    // write prompts only
};

std::string_view to_string(RefineMode mode) noexcept;
std::string_view to_string(Connectivity connectivity) noexcept;
Connectivity parse_connectivity(std::string_view text);

struct PipelineConfig {
    Connectivity connectivity = Connectivity::Eight;
    PruneConfig prune;
    PromptConfig prompt;
    RefineConfig refine;
    RefineMode refine_mode = RefineMode::Oracle;
    std::string external_command;

    std::filesystem::path image_dir;
    std::filesystem::path coarse_dir;
    std::filesystem::path gt_dir;  // optional
    std::filesystem::path output_dir;

    int runs = 1;
    int workers = 1;

    /// Sets one dotted key (e.g. "prune.min_area"); throws Config on an
    /// unknown key or malformed value.
    void set(std::string_view key, std::string_view value);
    /// Nested configs valid; does not touch the filesystem.
    void validate() const;
    /// Canonical key = value text, loadable by load_config.
    std::string to_text() const;
};

// Reads `key = value` lines; '#' starts a comment, blank lines are ignored.
PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace maskprompt
