#include <gtest/gtest.h>

#include <set>

#include "maskprompt/config.hpp"
#include "maskprompt/pipeline.hpp"
#include "error_kind.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace maskprompt;
namespace fs = std::filesystem;

TEST(Config, ParsesKeysCommentsAndBlankLines) {
    const PipelineConfig cfg = parse_config(
        "# pipeline\n"
        "prune.min_area = 500\n"
        "\n"
        "prompt.n_positive = 7   # trailing comment\n"
        "prompt.negative_source = low_confidence\n"
        "refine.connectivity = four\n"
        "paths.images = /data/img\n"
        "workers = 3\n");
    EXPECT_EQ(cfg.prune.min_area, 500);
    EXPECT_EQ(cfg.prune.min_extent, 275);
    EXPECT_EQ(cfg.prompt.n_positive, 7);
    EXPECT_EQ(cfg.prompt.n_negative, 20);
    EXPECT_EQ(cfg.prompt.negative_source, NegativeSource::LowConfidence);
    EXPECT_EQ(cfg.refine.connectivity, Connectivity::Four);
    EXPECT_EQ(cfg.image_dir, fs::path("/data/img"));
    EXPECT_EQ(cfg.workers, 3);
}

TEST(Config, DefaultsMatchReferenceConstants) {
    const PipelineConfig cfg;
    EXPECT_EQ(cfg.prune.min_area, 1000);
    EXPECT_EQ(cfg.prune.min_extent, 275);
    EXPECT_EQ(cfg.prompt.n_positive, 20);
    EXPECT_EQ(cfg.prompt.n_negative, 20);
}

TEST(Config, TextRoundTrip) {
    PipelineConfig cfg;
    cfg.set("prompt.margin_radius", "9");
    cfg.set("refine.mode", "export");
    cfg.set("paths.output", "out dir");
    EXPECT_EQ(parse_config(cfg.to_text()).to_text(), cfg.to_text());
}

TEST(Config, ErrorsNameTheLine) {
    EXPECT_EQ(oracle::kind_of([] { parse_config("bogus.key = 1\n"); }), ErrorKind::Config);
    const std::string msg = oracle::message_of([] { parse_config("runs = 2\nprune.min_area = lots\n"); });
    EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
    EXPECT_EQ(oracle::kind_of([] { parse_config("no equals sign\n"); }), ErrorKind::Config);
    EXPECT_EQ(oracle::kind_of([] { parse_config("refine.mode = external\n").validate(); }), ErrorKind::Config);
    EXPECT_EQ(oracle::kind_of([] { parse_config("prompt.n_negative = -1\n").validate(); }), ErrorKind::Config);
}

TEST(Pipeline, PhantomImprovesOverCoarse) {
    oracle::TempDir dir("pipeline");
    const auto dirs = oracle::write_phantoms(dir.path(), {3});
    const BatchResult batch = run_pipeline(oracle::pipeline_config(dirs, dir.path() / "out"));
    ASSERT_EQ(batch.image_count(), 1u);
    EXPECT_EQ(batch.failures, 0u);
    const ImageResult& img = batch.runs[0].images[0];
    ASSERT_TRUE(img.metrics && img.coarse_metrics);
    EXPECT_GE(img.metrics->dice, img.coarse_metrics->dice);
    for (const char* name : {"phantom_3.prompts.json", "phantom_3.refined.png", "phantom_3.overlay.png", "metrics.csv",
                             "summary.json", "summary.txt"}) {
        EXPECT_TRUE(fs::exists(dir.path() / "out" / name)) << name;
    }
    // The emitted prompt set records the digest of the config that made it.
    const PromptSet ps = load_prompt_set((dir.path() / "out" / "phantom_3.prompts.json").string());
    EXPECT_EQ(ps.config_digest, PromptConfig{}.digest());
    EXPECT_EQ(ps.points.size(), 40u);
}

TEST(Pipeline, FallbackWhenEverythingIsPruned) {
    Mask coarse(120, 100);
    for (int y = 10; y < 30; ++y) {
        for (int x = 10; x < 40; ++x) coarse.set(x, y, true);  // 600 px, small bbox
    }
    for (int y = 60; y < 70; ++y) {
        for (int x = 70; x < 80; ++x) coarse.set(x, y, true);
    }
    PipelineConfig cfg;
    const PromptStage stage = run_prompt_stage(coarse, "fb", cfg);
    EXPECT_TRUE(stage.fallback);
    EXPECT_EQ(stage.pruned.retained_ids, (std::vector<std::int32_t>{1}));
    EXPECT_FALSE(stage.prompts.warnings.empty());
    EXPECT_EQ(stage.prompts.n_positive, 20);

    oracle::TempDir dir("fallback");
    oracle::PhantomDirs dirs{dir.path() / "i", dir.path() / "c", {}};
    fs::create_directories(dirs.images);
    fs::create_directories(dirs.coarse);
    save_grayscale(Raster(120, 100, std::uint8_t{80}), dirs.images / "x.png");
    save_mask(coarse, dirs.coarse / "x.png");
    const BatchResult batch = run_pipeline(oracle::pipeline_config(dirs, dir.path() / "out"));
    EXPECT_EQ(batch.failures, 0u);
    ASSERT_EQ(batch.image_count(), 1u);
    EXPECT_TRUE(batch.runs[0].images[0].fallback);
    EXPECT_NE(oracle::read_bytes(dir.path() / "out" / "metrics.csv").find("thresholds halved"), std::string::npos);
}

TEST(Pipeline, EmptyCoarseMaskFailsThatImageOnly) {
    EXPECT_EQ(oracle::kind_of([] { run_prompt_stage(Mask(10, 10), "e", {}); }), ErrorKind::NoPositiveRegion);
}

TEST(Pipeline, EmptyInputDirectory) {
    oracle::TempDir dir("empty");
    oracle::PhantomDirs dirs{dir.path() / "i", dir.path() / "c", {}};
    fs::create_directories(dirs.images);
    fs::create_directories(dirs.coarse);
    const BatchResult batch = run_pipeline(oracle::pipeline_config(dirs, dir.path() / "out"));
    EXPECT_EQ(batch.image_count(), 0u);
    EXPECT_EQ(batch.failures, 0u);
    ASSERT_EQ(batch.notices.size(), 1u);
    EXPECT_EQ(batch.notices[0].rfind("no inputs", 0), 0u);
}

TEST(Pipeline, MissingPairIsAFailure) {
    oracle::TempDir dir("pairs");
    const auto dirs = oracle::write_phantoms(dir.path(), {4, 5});
    fs::remove(dirs.coarse / "phantom_5.png");
    const BatchResult batch = run_pipeline(oracle::pipeline_config(dirs, dir.path() / "out"));
    EXPECT_EQ(batch.image_count(), 2u);
    EXPECT_EQ(batch.failures, 1u);
}

TEST(Pipeline, RerunIsByteIdentical) {
    oracle::TempDir dir("idem");
    const auto dirs = oracle::write_phantoms(dir.path(), {6, 7});
    PipelineConfig cfg = oracle::pipeline_config(dirs, dir.path() / "a");
    cfg.workers = 2;
    run_pipeline(cfg);
    const auto first = oracle::list_files(cfg.output_dir);
    std::vector<std::string> bytes;
    for (const auto& f : first) bytes.push_back(oracle::read_bytes(cfg.output_dir / f));
    run_pipeline(cfg);
    ASSERT_EQ(oracle::list_files(cfg.output_dir), first);
    for (std::size_t i = 0; i < first.size(); ++i) {
        EXPECT_EQ(oracle::read_bytes(cfg.output_dir / first[i]), bytes[i]) << first[i];
    }
}

TEST(Pipeline, MultipleRunsUseRunDirectories) {
    oracle::TempDir dir("runs");
    PhantomSpec spec;
    oracle::write_phantoms(dir.path() / "run_1", {8}, spec);
    spec.coarse_erosion = 3;
    oracle::write_phantoms(dir.path() / "run_2", {8}, spec);
    oracle::PhantomDirs dirs{dir.path() / "run_1" / "images", dir.path() / "coarse", dir.path() / "run_1" / "gt"};
    fs::create_directories(dirs.coarse);
    fs::rename(dir.path() / "run_1" / "coarse", dirs.coarse / "run_1");
    fs::rename(dir.path() / "run_2" / "coarse", dirs.coarse / "run_2");
    PipelineConfig cfg = oracle::pipeline_config(dirs, dir.path() / "out");
    cfg.runs = 2;
    const BatchResult batch = run_pipeline(cfg);
    EXPECT_EQ(batch.failures, 0u);
    ASSERT_TRUE(batch.aggregate);
    EXPECT_EQ(batch.aggregate->n_runs, 2u);
    EXPECT_TRUE(fs::exists(dir.path() / "out" / "run_2" / "phantom_8.refined.png"));
}

TEST(Overlay, FourColours) {
    const Mask pred(4, 1, {1, 1, 0, 0});
    const Mask gt(4, 1, {1, 0, 1, 0});
    const RgbImage img = render_overlay(pred, gt);
    EXPECT_EQ(img.data, (std::vector<std::uint8_t>{0, 255, 0, 255, 0, 0, 0, 0, 255, 0, 0, 0}));
}

TEST(Ablation, SplitAndDegenerateCount) {
    EXPECT_EQ(split_prompt_count(7), (std::pair<int, int>{4, 3}));
    EXPECT_EQ(split_prompt_count(40), (std::pair<int, int>{20, 20}));
    oracle::TempDir dir("ablate");
    const auto dirs = oracle::write_phantoms(dir.path(), {9});
    const PipelineConfig cfg = oracle::pipeline_config(dirs, dir.path() / "out");
    const auto rows = ablate_prompt_count(cfg, {0, 40});
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].status, "failed: no seeds");
    EXPECT_FALSE(rows[0].mean_dice);
    ASSERT_TRUE(rows[1].mean_dice);
    // A single count reproduces the full pipeline at the same budget.
    const BatchResult batch = run_pipeline(cfg);
    ASSERT_TRUE(batch.aggregate);
    EXPECT_NEAR(*rows[1].mean_dice, batch.aggregate->dice.mean, 1e-12);
    EXPECT_NE(ablation_csv(rows).find("failed: no seeds"), std::string::npos);
}
