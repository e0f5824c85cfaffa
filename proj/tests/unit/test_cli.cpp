#include "support.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "mhdlab/app/config.hpp"
#include "mhdlab/app/runners.hpp"
#include "mhdlab/errors.hpp"

using namespace mhdlab;
using namespace mhdlab::app;
namespace fs = std::filesystem;

namespace {

const char* small_run = R"(
[grid]
n = 64
[time]
T = 2.0
dt = 0.05
sample_every = 10
)";

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name)
{
    const fs::path d = fs::temp_directory_path() / ("mhdlab_cli_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(d);
    return d;
}

}  // namespace

TEST_CASE("defaults and canonical form")
{
    const RunConfig d = parse_config("");
    CHECK(d.n == 256);
    CHECK(d.alpha == 1);
    CHECK(d.initial.seed == 1);
    const RunConfig again = parse_config(d.canonical());
    CHECK(again.canonical() == d.canonical());
    CHECK(again.hash() == d.hash());
    CHECK(d.hash_hex().size() == 16);
    const RunConfig other = parse_config("[initial]\nseed = 2\n");
    CHECK(other.hash() != d.hash());
}

TEST_CASE("config errors")
{
    CHECK(test::error_of([] { parse_config("[grid]\nsize = 64\n"); }) == ErrorKind::config_invalid);
    CHECK(test::error_of([] { parse_config("[nonsense]\n"); }) == ErrorKind::config_invalid);
    CHECK(test::error_of([] { parse_config("[grid]\nn = 100\n"); }) == ErrorKind::config_invalid);
    CHECK(test::error_of([] { parse_config("[grid\n"); }) == ErrorKind::config_invalid);
    CHECK(test::error_of([] { parse_config("[initial]\nfamily = \"white-noise\"\n"); }) == ErrorKind::config_invalid);
    CHECK(test::error_of([] { load_config("/nonexistent/mhdlab.toml"); }) == ErrorKind::io_failure);
}

TEST_CASE("validation before compute")
{
    const RunConfig stern = parse_config("[profile.u]\nfamily = \"sine\"\nmodes = [[1.0, 1]]\n[profile.b]\nfamily = \"constant\"\noffset = 0.5\n");
    CHECK(test::error_of([&] { validate(stern); }) == ErrorKind::stability_violation);
    const RunConfig dt = parse_config("[time]\ndt = 5.0\n");
    CHECK(test::error_of([&] { validate(dt); }) == ErrorKind::step_too_large);
    const RunConfig eps = parse_config("[scan]\ncontour_eps = 0.5\n");
    CHECK(test::error_of([&] { validate(eps); }) == ErrorKind::epsilon_too_large);
    CHECK_NOTHROW(validate(parse_config("")));
}

TEST_CASE("seed from the environment")
{
    RunConfig cfg = parse_config("");
    ::setenv("MHDLAB_SEED", "42", 1);
    apply_environment(cfg);
    CHECK(cfg.initial.seed == 42);
    ::setenv("MHDLAB_SEED", "-3", 1);
    CHECK(test::error_of([&] { apply_environment(cfg); }) == ErrorKind::config_invalid);
    ::unsetenv("MHDLAB_SEED");
}

TEST_CASE("evolve output is byte-identical across runs")
{
    const RunConfig cfg = parse_config(small_run);
    const fs::path a = scratch("a"), b = scratch("b");
    CHECK(run_subcommand("evolve", cfg, RunOptions{a, 1, false}) == 0);
    CHECK(run_subcommand("evolve", cfg, RunOptions{b, 2, false}) == 0);
    for (const char* f : {"snapshots.csv", "series.csv", "report.json"}) {
        REQUIRE(fs::exists(a / f));
        CHECK(slurp(a / f) == slurp(b / f));
    }
    CHECK(slurp(a / "snapshots.csv").starts_with("# config_hash=" + cfg.hash_hex()));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("T = 0 writes the initial snapshot only")
{
    const RunConfig cfg = parse_config("[grid]\nn = 64\n[time]\nT = 0.0\n");
    const fs::path d = scratch("t0");
    CHECK(run_subcommand("evolve", cfg, RunOptions{d, 1, false}) == 0);
    std::istringstream in(slurp(d / "snapshots.csv"));
    std::string line;
    std::size_t rows = 0;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#' && line[0] != 't') ++rows;
    CHECK(rows == 64);
    fs::remove_all(d);
}

TEST_CASE("unknown subcommand")
{
    const auto names = subcommands();
    CHECK(std::find(names.begin(), names.end(), "suite") != names.end());
    CHECK(test::error_of([] { run_subcommand("frobnicate", parse_config(""), RunOptions{}); }) == ErrorKind::invalid_argument);
}
