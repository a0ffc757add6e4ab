#include <gtest/gtest.h>

#include <cstdlib>
#include <string>

#include <sys/wait.h>

#include "maskprompt/prompting.hpp"
#include "maskprompt/raster.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

#ifndef MASKPROMPT_CLI
#error "MASKPROMPT_CLI must name the maskprompt executable"
#endif

namespace fs = std::filesystem;

namespace {

const std::string kCli = MASKPROMPT_CLI;

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

// Runs the CLI with `args`, capturing combined output in `log`.
int run(const std::string& args, const fs::path& log) {
    const std::string cmd = quote(kCli) + " " + args + " > " + quote(log) + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cli, PhantomPromptsRefineEval) {
    oracle::TempDir dir("cli");
    const fs::path log = dir.path() / "log.txt";
    ASSERT_EQ(run("phantom -o " + quote(dir.path() / "ph") + " -n 1 --seed 5", log), 0) << oracle::read_bytes(log);
    const fs::path coarse = dir.path() / "ph" / "coarse" / "phantom_5.png";
    const fs::path image = dir.path() / "ph" / "images" / "phantom_5.png";
    const fs::path gt = dir.path() / "ph" / "gt" / "phantom_5.png";
    ASSERT_TRUE(fs::exists(coarse));
    ASSERT_TRUE(fs::exists(dir.path() / "ph" / "specs" / "phantom_5.json"));

    const fs::path json = dir.path() / "p.json";
    ASSERT_EQ(run("prompts --mask " + quote(coarse) + " -o " + quote(json), log), 0) << oracle::read_bytes(log);
    const auto ps = maskprompt::load_prompt_set(json.string());
    EXPECT_EQ(ps.points.size(), 40u);
    EXPECT_EQ(ps.source_image, "phantom_5");

    const fs::path refined = dir.path() / "r.png";
    ASSERT_EQ(run("refine --image " + quote(image) + " --prompts " + quote(json) + " -o " + quote(refined), log), 0)
        << oracle::read_bytes(log);
    ASSERT_EQ(run("eval --json --pred " + quote(refined) + " --gt " + quote(gt), log), 0);
    EXPECT_NE(oracle::read_bytes(log).find("\"dice\""), std::string::npos);
}

TEST(Cli, SchemaViolationExitsBeforeWriting) {
    oracle::TempDir dir("cli");
    const fs::path log = dir.path() / "log.txt";
    maskprompt::save_grayscale(maskprompt::Raster(8, 8, std::uint8_t{10}), dir.path() / "img.png");
    oracle::write_bytes(dir.path() / "bad.json",
                        R"({"image":"img","width":8,"height":8,"points":[{"x":1,"y":1,"label":2}]})");
    const fs::path out = dir.path() / "out.png";
    EXPECT_EQ(run("refine --image " + quote(dir.path() / "img.png") + " --prompts " + quote(dir.path() / "bad.json") +
                      " -o " + quote(out),
                  log),
              2);
    EXPECT_FALSE(fs::exists(out));
}

TEST(Cli, ConfigErrorsExitTwo) {
    oracle::TempDir dir("cli");
    const fs::path log = dir.path() / "log.txt";
    EXPECT_EQ(run("pipeline --set nonsense.key=1 --images a --coarse b --output c", log), 2);
    oracle::write_bytes(dir.path() / "bad.cfg", "prune.min_area = -3\n");
    EXPECT_EQ(run("pipeline -c " + quote(dir.path() / "bad.cfg"), log), 2);
    EXPECT_EQ(run("no-such-command", log), 2);
}

TEST(Cli, PipelineExitCodes) {
    oracle::TempDir dir("cli");
    const fs::path log = dir.path() / "log.txt";
    const auto dirs = oracle::write_phantoms(dir.path(), {10, 11});
    const std::string paths = "--images " + quote(dirs.images) + " --coarse " + quote(dirs.coarse) + " --gt " +
                              quote(dirs.gt) + " --output " + quote(dir.path() / "out");
    EXPECT_EQ(run("pipeline " + paths, log), 0) << oracle::read_bytes(log);
    EXPECT_TRUE(fs::exists(dir.path() / "out" / "summary.txt"));
    fs::remove(dirs.coarse / "phantom_11.png");
    EXPECT_EQ(run("pipeline " + paths, log), 1);

    const fs::path empty = dir.path() / "empty";
    fs::create_directories(empty);
    EXPECT_EQ(run("pipeline --images " + quote(empty) + " --coarse " + quote(empty) + " --output " +
                      quote(dir.path() / "out2"),
                  log),
              0);
    EXPECT_NE(oracle::read_bytes(log).find("no inputs"), std::string::npos);
}

TEST(Cli, AblateMarksDegenerateCountFailed) {
    oracle::TempDir dir("cli");
    const fs::path log = dir.path() / "log.txt";
    const auto dirs = oracle::write_phantoms(dir.path(), {12});
    const fs::path csv = dir.path() / "ablate.csv";
    EXPECT_EQ(run("ablate --counts 0,10 --csv " + quote(csv) + " --images " + quote(dirs.images) + " --coarse " +
                      quote(dirs.coarse) + " --gt " + quote(dirs.gt) + " --output " + quote(dir.path() / "out"),
                  log),
              1);
    const std::string text = oracle::read_bytes(csv);
    EXPECT_NE(text.find("0,0,0,,1,1,\"failed: no seeds\""), std::string::npos) << text;
    EXPECT_NE(text.find("\n10,5,5,"), std::string::npos) << text;
}

// The external refiner interface: the CLI's own oracle `refine` subcommand
// stands in for a segmenter adapter and must reproduce oracle mode exactly.
TEST(Cli, ExternalAdapterInterface) {
    oracle::TempDir dir("cli");
    const fs::path log = dir.path() / "log.txt";
    const auto dirs = oracle::write_phantoms(dir.path(), {13});
    const std::string paths = "--images " + quote(dirs.images) + " --coarse " + quote(dirs.coarse) + " --gt " +
                              quote(dirs.gt);
    ASSERT_EQ(run("pipeline " + paths + " --output " + quote(dir.path() / "oracle"), log), 0);
    ASSERT_EQ(run("pipeline " + paths + " --output " + quote(dir.path() / "ext") + " --refine-mode external" +
                      " --external-command \"" + quote(kCli) + " refine\"",
                  log),
              0)
        << oracle::read_bytes(log);
    for (const char* name : {"phantom_13.prompts.json", "phantom_13.refined.png", "phantom_13.overlay.png"}) {
        EXPECT_EQ(oracle::read_bytes(dir.path() / "ext" / name), oracle::read_bytes(dir.path() / "oracle" / name))
            << name;
    }
    const auto refined = maskprompt::binarize(maskprompt::load_grayscale(dir.path() / "ext" / "phantom_13.refined.png"));
    const auto ps = maskprompt::load_prompt_set((dir.path() / "ext" / "phantom_13.prompts.json").string());
    EXPECT_EQ(refined.width(), ps.width);
    EXPECT_EQ(refined.height(), ps.height);
    for (const auto& p : ps.points) {
        if (p.label == maskprompt::PromptLabel::Positive) EXPECT_TRUE(refined.at(p.x, p.y));
    }

    ASSERT_EQ(run("pipeline " + paths + " --output " + quote(dir.path() / "export") + " --refine-mode export", log), 0);
    EXPECT_TRUE(fs::exists(dir.path() / "export" / "phantom_13.prompts.json"));
    EXPECT_FALSE(fs::exists(dir.path() / "export" / "phantom_13.refined.png"));
}

TEST(Cli, BenchReportsThroughput) {
    oracle::TempDir dir("cli");
    const fs::path log = dir.path() / "log.txt";
    ASSERT_EQ(run("bench --size 512 --images 2", log), 0) << oracle::read_bytes(log);
    EXPECT_NE(oracle::read_bytes(log).find("fps="), std::string::npos);
}
