#include "fixtures.hpp"

#include <string>

#include "maskprompt/raster.hpp"

namespace oracle {

PhantomDirs write_phantoms(const std::filesystem::path& root, const std::vector<std::uint64_t>& seeds,
                           maskprompt::PhantomSpec spec) {
    PhantomDirs dirs{root / "images", root / "coarse", root / "gt"};
    for (const auto& d : {dirs.images, dirs.coarse, dirs.gt}) std::filesystem::create_directories(d);
    for (std::uint64_t seed : seeds) {
        spec.rng_seed = seed;
        const maskprompt::Phantom p = maskprompt::generate_phantom(spec);
        const std::string name = "phantom_" + std::to_string(seed) + ".png";
        maskprompt::save_grayscale(p.image, dirs.images / name);
        maskprompt::save_mask(p.coarse_mask, dirs.coarse / name);
        maskprompt::save_mask(p.gt_mask, dirs.gt / name);
    }
    return dirs;
}

maskprompt::PipelineConfig pipeline_config(const PhantomDirs& dirs, const std::filesystem::path& out) {
    maskprompt::PipelineConfig cfg;
    cfg.image_dir = dirs.images;
    cfg.coarse_dir = dirs.coarse;
    cfg.gt_dir = dirs.gt;
    cfg.output_dir = out;
    return cfg;
}

}  // namespace oracle
