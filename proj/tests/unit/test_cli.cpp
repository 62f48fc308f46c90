#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sdmcts/cli.hpp>

#include "fixtures.hpp"

namespace fs = std::filesystem;
using namespace sdmcts;

namespace {

const std::string toy_path = std::string(SDMCTS_DATA_DIR) + "/toy.csv";

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("sdmcts_cli_" + name);
    fs::remove_all(p);
    return p;
}

int run_cli(std::vector<std::string> args, std::string* err_text = nullptr) {
    args.insert(args.begin(), "sdmcts");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int rc = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
    if (err_text) *err_text = err.str();
    return rc;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(Cli, DefaultsMatchDocumentedValues) {
    cli::RunOptions o;
    o.data_path = toy_path;
    auto loaded = cli::load_data(o);
    o.minsupp = 1;
    auto c = cli::make_config(o, *loaded.data);
    EXPECT_EQ(c.max_output, 50u);
    EXPECT_DOUBLE_EQ(c.theta, 0.5);
    EXPECT_EQ(c.max_length, 5u);
    EXPECT_EQ(c.measure.kind, MeasureKind::wracc);
    EXPECT_EQ(c.ucb, UcbKind::sp_mcts);
    EXPECT_EQ(c.dedup, DedupKind::pu);
    EXPECT_EQ(c.reward, RewardAgg::max);
    EXPECT_EQ(c.memory, MemoryKind::top_k);
    EXPECT_EQ(c.memory_k, 1u);
    EXPECT_EQ(c.update, UpdateKind::max);
    EXPECT_EQ(c.checkpoint_every, 1000u);
    auto text = cli::echo(o, c, loaded);
    EXPECT_NE(std::find(text.begin(), text.end(), "memory = top-1"), text.end());
}

TEST(Cli, RunWritesThreeFiles) {
    auto dir = scratch("run");
    ASSERT_EQ(run_cli({"run", "--data", toy_path, "--minsupp", "1", "--iterations", "50", "--out", dir.string()}), 0);
    for (const char* f : {"result.csv", "checkpoints.csv", "report.txt"}) EXPECT_TRUE(fs::exists(dir / f)) << f;
    EXPECT_EQ(slurp(dir / "result.csv").rfind("rank,description,support,quality\n", 0), 0u);
}

TEST(Cli, ExhaustiveIsSeedIndependent) {
    auto a = scratch("ex_a"), b = scratch("ex_b");
    ASSERT_EQ(run_cli({"run", "--data", toy_path, "--algo", "exhaustive", "--minsupp", "1", "--seed", "1", "--out", a.string()}), 0);
    ASSERT_EQ(run_cli({"run", "--data", toy_path, "--algo", "exhaustive", "--minsupp", "1", "--seed", "99", "--out", b.string()}), 0);
    EXPECT_EQ(slurp(a / "result.csv"), slurp(b / "result.csv"));
}

TEST(Cli, SameSeedSameResult) {
    for (const char* algo : {"mcts", "beam", "sampler"}) {
        auto a = scratch(std::string("s_a_") + algo), b = scratch(std::string("s_b_") + algo);
        std::vector<std::string> common{"run", "--data", toy_path, "--algo", algo, "--minsupp", "1", "--iterations", "300", "--seed", "5"};
        auto ca = common, cb = common;
        ca.insert(ca.end(), {"--out", a.string()});
        cb.insert(cb.end(), {"--out", b.string()});
        ASSERT_EQ(run_cli(ca), 0);
        ASSERT_EQ(run_cli(cb), 0);
        EXPECT_EQ(slurp(a / "result.csv"), slurp(b / "result.csv")) << algo;
    }
}

TEST(Cli, LecticAndPermutationDedupAreExclusive) {
    std::string err;
    EXPECT_EQ(run_cli({"run", "--data", toy_path, "--dedup", "LO", "--dedup", "PU", "--out", scratch("x").string()}, &err), 2);
    EXPECT_NE(err.find("Usage"), std::string::npos);
    EXPECT_EQ(run_cli({"run", "--data", toy_path, "--ucb", "dfs-uct", "--out", scratch("y").string()}), 2);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run_cli({"run", "--data", toy_path, "--bogus"}), 2);
    EXPECT_EQ(run_cli({"run"}), 2);  // neither --data nor --generate
    EXPECT_EQ(run_cli({"run", "--data", toy_path, "--minsupp", "7"}), 2);
    EXPECT_EQ(run_cli({"run", "--data", toy_path, "--target", "nope"}), 2);
    EXPECT_EQ(run_cli({}), 2);
    EXPECT_EQ(run_cli({"run", "--data", "/nonexistent.csv"}), 1);
}

TEST(Cli, CheckpointRowCount) {
    for (std::size_t iters : {30u, 35u}) {
        auto dir = scratch("cp" + std::to_string(iters));
        ASSERT_EQ(run_cli({"run", "--data", toy_path, "--minsupp", "1", "--expand", "direct", "--dedup", "none", "--iterations",
                           std::to_string(iters), "--checkpoint-every", "10", "--out", dir.string()}),
                  0);
        EXPECT_EQ(lines(slurp(dir / "checkpoints.csv")) - 1, (iters + 9) / 10);
    }
}

TEST(Cli, GeneratedDataReportsRecovery) {
    auto dir = scratch("gen");
    ASSERT_EQ(run_cli({"run", "--generate", "P_small", "--iterations", "200", "--out", dir.string()}), 0);
    EXPECT_NE(slurp(dir / "report.txt").find("recovery of hidden patterns"), std::string::npos);
}

TEST(Bench, EmptyMatrixGivesHeaderOnly) {
    for (const char* text : {"", "data,algo,overrides,repetitions\n"}) {
        std::istringstream in(text);
        std::ostringstream out;
        cli::run_bench(in, out, 0);
        EXPECT_EQ(out.str(), "data,algo,overrides,repetitions,status,recovery_qual,diversity,redundancy,runtime_ms,iterations,pool_size\n");
    }
}

TEST(Bench, GeneratorCellAggregatesRepetitions) {
    std::istringstream in("data,algo,overrides,repetitions\n5000_10_200,mcts,--iterations 1000,5\n");
    std::ostringstream out;
    cli::run_bench(in, out, 0);
    std::istringstream res(out.str());
    auto rows = csv::parse(res);
    ASSERT_EQ(rows.size(), 2u);
    const auto& r = rows[1];
    ASSERT_EQ(r.size(), cli::bench_header().size());
    EXPECT_EQ(r[4], "ok");
    EXPECT_FALSE(r[5].empty());
    double rec = std::stod(r[5]);
    EXPECT_GE(rec, 0.0);
    EXPECT_LE(rec, 1.0);
    EXPECT_EQ(r[9], "1000");

    // the mean column is the mean of the five seeded runs
    double sum = 0;
    for (std::uint64_t s = 0; s < 5; ++s) {
        cli::RunOptions o;
        o.generate = "5000_10_200";
        o.iterations = 1000;
        o.seed = s;
        auto loaded = cli::load_data(o);
        sum += *cli::execute(o, loaded).recovery;
    }
    EXPECT_NEAR(rec, sum / 5, 1e-9);
}

TEST(Bench, FailingCellsDoNotAbortTheBatch) {
    std::istringstream in(
        "data,algo,overrides,repetitions\n"
        "300_3_4,beam,--bogus 1,1\n"
        + toy_path + ",exhaustive,--minsupp 9,1\n"
        + toy_path + ",exhaustive,--minsupp 2,1\n");
    std::ostringstream out;
    cli::run_bench(in, out, 0);
    std::istringstream res(out.str());
    auto rows = csv::parse(res);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[1][4].rfind("error", 0), 0u);
    EXPECT_EQ(rows[2][4].rfind("error", 0), 0u);
    EXPECT_EQ(rows[3][4], "ok");
    EXPECT_TRUE(rows[3][5].empty());  // no ground truth for file data
}

TEST(Bench, MalformedMatrix) {
    std::istringstream in("a,b\n");
    std::ostringstream out;
    EXPECT_THROW(cli::run_bench(in, out, 0), ConfigError);
}
