#include "fracproj/experiment.hpp"
#include "fracproj/geometry.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

using namespace fracproj;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "fracproj");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("fracproj_test_" + name);
    fs::remove_all(p);
    return p;
}

std::map<std::string, std::string> snapshot(const fs::path& dir)
{
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        std::ifstream in(e.path(), std::ios::binary);
        std::ostringstream body;
        body << in.rdbuf();
        files[fs::relative(e.path(), dir).string()] = body.str();
    }
    return files;
}

}  // namespace

TEST_CASE("generator specs")
{
    const auto g = parse_generator_spec("cantor:n=2,keep=0+3,iters=5");
    CHECK(g.kind == "cantor");
    CHECK(g.params.at("keep") == "0+3");
    CHECK(is_randomized(parse_generator_spec("random:n=2,s=1,level=8")));
    CHECK_FALSE(is_randomized(g));
    CHECK_THROWS_AS(parse_generator_spec("cantor:n"), UsageError);

    ExperimentConfig c;
    c.gen = "cantor:n=2,keep=0+3,iters=3";
    CHECK(load_or_generate(c).size() == 64);
    c.level = 4;
    CHECK(load_or_generate(c).size() == 16);
    c.gen = "cantor:n=2,keep=0+3,iters=3,bogus=1";
    CHECK_THROWS_AS(load_or_generate(c), UsageError);
    c.gen = "random:n=2,s=1,level=6";
    c.level.reset();
    CHECK_THROWS_AS(load_or_generate(c), UsageError);
    c.seed = 1;
    CHECK(load_or_generate(c) == load_or_generate(c));
}

TEST_CASE("usage errors exit with status 1")
{
    CHECK(cli({}).code == 1);
    CHECK(cli({"frobnicate"}).code == 1);
    CHECK(cli({"content", "--s", "0.5"}).code == 1);
    CHECK(cli({"content", "--gen", "cantor:n=1,keep=0+3,iters=3", "--s", "-1"}).code == 1);
    CHECK(cli({"scan", "--gen", "cantor:n=2,keep=0+3,iters=3", "--out", scratch("noseed").string()}).code == 1);
    CHECK(cli({"multiscan", "--gen", "cantor:n=2,keep=0+3,iters=3", "--seed", "1", "--levels", "5:4", "--out",
               scratch("empty_range").string()})
              .code == 1);
    CHECK(cli({"content", "--input", "/nonexistent/points.pts", "--s", "0.5"}).code == 1);
}

TEST_CASE("content, spread, decompose and frostman")
{
    const auto dir = scratch("stages");
    const auto r = cli({"content", "--gen", "cantor:n=1,keep=0+3,iters=3", "--s", "0.5", "--out", dir.string()});
    CHECK(r.code == 0);
    CHECK(r.out == "value 1 cubes 1\n");
    CHECK(fs::exists(dir / "cover.txt"));

    const auto again = cli({"content", "--gen", "cantor:n=1,keep=0+3,iters=3", "--s", "0.5", "--out", dir.string()});
    CHECK(again.code == 1);
    CHECK(again.err.find("--force") != std::string::npos);
    CHECK(cli({"content", "--gen", "cantor:n=1,keep=0+3,iters=3", "--s", "0.5", "--out", dir.string(), "--force"})
              .code == 0);

    CHECK(cli({"spread", "--gen", "cantor:n=1,keep=0+3,iters=3", "--s", "0.5"}).out == "spread_constant 1\n");

    const auto gen = cli({"generate", "--gen", "cluster:n=2,level=10,at=3+17,coarse=5", "--out", dir.string()});
    CHECK(gen.code == 0);
    const auto pts = (dir / "points.pts").string();
    CHECK(load_point_set(pts).size() == 1024);

    const auto dec = cli({"decompose", "--input", pts, "--s", "1", "--big-c", "1", "--big-l", "4", "--tau", "0.25",
                          "--out", (dir / "dec").string()});
    CHECK(dec.code == 0);
    CHECK(load_point_set((dir / "dec" / "good.pts").string()).empty());
    CHECK(load_point_set((dir / "dec" / "bad.pts").string()).size() == 1024);

    CHECK(cli({"frostman", "--input", pts, "--s", "1", "--out", (dir / "fr").string()}).code == 0);
    CHECK(fs::exists(dir / "fr" / "subset.pts"));
}

TEST_CASE("scan exit codes")
{
    const auto dir = scratch("scan");
    const auto ok = cli({"scan", "--gen", "cantor:n=2,keep=0+3,iters=4", "--s", "1", "--eps", "0.1", "--samples", "50",
                         "--seed", "3", "--out", (dir / "cantor").string()});
    CHECK(ok.code == 0);
    CHECK(ok.out.rfind("bad_fraction ", 0) == 0);
    CHECK(fs::exists(dir / "cantor" / "scan.csv"));

    const auto line = cli({"scan", "--gen", "line:n=2,level=6", "--s", "1", "--eps", "0.1", "--samples", "50",
                           "--seed", "3", "--budget-slack", "1", "--out", (dir / "line").string()});
    CHECK(line.code == 2);
}

TEST_CASE("multiscan exit codes and reproducibility")
{
    const auto a = scratch("ms_a");
    const auto b = scratch("ms_b");
    const std::vector<std::string> common{"multiscan", "--gen",  "cantor:n=2,keep=0+3,iters=3", "--levels", "4:6",
                                          "--s",       "1",      "--eps",                       "0.1",      "--samples",
                                          "60",        "--seed", "11"};
    auto with = [&](const fs::path& out, const std::string& workers) {
        auto args = common;
        args.insert(args.end(), {"--out", out.string(), "--workers", workers});
        return cli(args);
    };
    CHECK(with(a, "1").code == 0);
    CHECK(with(b, "8").code == 0);
    CHECK(snapshot(a) == snapshot(b));
    CHECK(snapshot(a).count("summary.csv") == 1);
    CHECK(snapshot(a).count("scale_5/scan.txt") == 1);
    CHECK(with(a, "1").code == 1);

    const auto line = cli({"multiscan", "--gen", "line:n=2,level=6", "--levels", "3:6", "--s", "1", "--eps", "0.1",
                           "--samples", "60", "--seed", "11", "--budget-slack", "1", "--out",
                           scratch("ms_line").string()});
    CHECK(line.code == 2);
    CHECK(line.out.find("worst scale") != std::string::npos);
}
