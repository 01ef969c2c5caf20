#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "experiments.hpp"

namespace fs = std::filesystem;
using namespace fracflux::cli;

namespace {

fs::path scratchDir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("fracflux-test-" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

fs::path writeConfig(const fs::path& dir, const std::string& text) {
    const fs::path p = dir / "config.json";
    std::ofstream(p) << text;
    return p;
}

std::size_t lines(const std::string& s) {
    std::size_t n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

}  // namespace

TEST(List, Rows) {
    EXPECT_EQ(lines(listExperiments()), 8u);
    EXPECT_EQ(lines(listExperiments("charge")), 1u);
    EXPECT_EQ(listExperiments("no-such-experiment"), "");
}

TEST(Run, ConfigErrorsExitTwo) {
    const fs::path d = scratchDir("config");
    EXPECT_EQ(run({(d / "missing.json").string()}).exitCode, 2);
    EXPECT_EQ(run({writeConfig(d, "{ not json").string()}).exitCode, 2);
    EXPECT_EQ(run({writeConfig(d, R"({"bogus": 1})").string()}).exitCode, 2);
    EXPECT_EQ(run({writeConfig(d, R"({"experiments": ["nope"]})").string()}).exitCode, 2);
    EXPECT_EQ(run({writeConfig(d, R"({"tolerance_scale": -1})").string()}).exitCode, 2);
    RunOptions o{writeConfig(d, "{}").string()};
    o.only = "nope";
    EXPECT_EQ(run(o).exitCode, 2);
    // a single refinement level cannot give an order
    o = {writeConfig(d, R"({"ml-accuracy": {}, "verify-leibniz": {"resolutions": [16]}})").string()};
    o.only = "verify-leibniz";
    o.outDir = (d / "out").string();
    EXPECT_EQ(run(o).exitCode, 2);
}

TEST(Run, UnwritableOutputExitsThree) {
    const fs::path d = scratchDir("io");
    std::ofstream(d / "file") << "x";
    RunOptions o{writeConfig(d, "{}").string()};
    o.only = "ml-accuracy";
    o.outDir = (d / "file" / "out").string();
    EXPECT_EQ(run(o).exitCode, 3);
}

TEST(Run, OperatorSpecFileErrors) {
    const fs::path d = scratchDir("spec");
    RunOptions o{writeConfig(d, R"({"general-operator": {"spec_file": "/nonexistent/spec.json"}})").string()};
    o.only = "general-operator";
    o.outDir = (d / "out").string();
    EXPECT_EQ(run(o).exitCode, 3);
    std::ofstream(d / "spec.json") << R"({"axes": [{"role": "classical", "extent": 1, "nodes": 8}],
                                          "fractional_terms": [{"word": [[0, 0.5]], "coeff": 1}]})";
    o.configPath = writeConfig(d, R"({"general-operator": {"spec_file": ")" + (d / "spec.json").string() + R"("}})")
                       .string();
    EXPECT_EQ(run(o).exitCode, 2);
}

TEST(Run, ZeroToleranceExitsOne) {
    const fs::path d = scratchDir("tol");
    RunOptions o{writeConfig(d, R"({"tolerance_scale": 0})").string()};
    o.only = "ml-accuracy";
    o.outDir = (d / "out").string();
    EXPECT_EQ(run(o).exitCode, 1);
    EXPECT_TRUE(fs::exists(d / "out" / "summary.csv"));
}

TEST(Run, WritesSortedResults) {
    const fs::path d = scratchDir("ok");
    RunOptions o{writeConfig(d, "{}").string()};
    o.only = "ml-accuracy";
    o.outDir = (d / "out").string();
    const RunResult r = run(o);
    EXPECT_EQ(r.exitCode, 0) << r.message;
    std::ifstream in(d / "out" / "summary.csv");
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "experiment,case_id,check,value,comparison,threshold,criterion,status,note");
    std::ifstream res(d / "out" / "results.csv");
    std::getline(res, header);
    EXPECT_EQ(header,
              "experiment,case_id,alpha,gamma_split,resolution,residual_max,residual_l2,fitted_order,threshold,status");
}
