#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "maskprompt/config.hpp"
#include "maskprompt/phantom.hpp"

namespace oracle {

struct PhantomDirs {
    std::filesystem::path images;
    std::filesystem::path coarse;
    std::filesystem::path gt;
};

// Writes phantom_<seed>.png triples (image, coarse mask, ground truth) under
// images/, coarse/ and gt/ of `root`; every seed uses `spec` otherwise.
PhantomDirs write_phantoms(const std::filesystem::path& root, const std::vector<std::uint64_t>& seeds,
                           maskprompt::PhantomSpec spec = {});

/// Pipeline config reading from `dirs` and writing to `out`.
maskprompt::PipelineConfig pipeline_config(const PhantomDirs& dirs, const std::filesystem::path& out);

}  // namespace oracle
