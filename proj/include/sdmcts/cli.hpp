#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "baselines.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "dataset.hpp"
#include "generator.hpp"
#include "mcts.hpp"
#include "measures.hpp"
#include "result_set.hpp"

namespace sdmcts::cli {

/// Exit code for invalid flags or flag combinations.
inline constexpr int usage_error = 2;

struct RunOptions {
    std::string data_path;
    std::string schema_path;
    std::string generate;
    std::string algo = "mcts";
    std::string measure = "wracc";
    std::string target;
    std::size_t minsupp = 10;
    std::size_t maxlen = 5;
    std::size_t iterations = 1000;
    std::string ucb = "sp-mcts";
    double cp = 1.0 / std::sqrt(2.0);
    double c = 0.5;
    double d = 1.0;
    std::string expand = "label";
    std::vector<std::string> dedup;
    std::string rollout = "direct-freq";
    std::size_t pathlen = 20;
    std::size_t jumplen = 30;
    std::string reward_agg = "max";
    std::size_t topk = 2;
    std::string memory = "top-1";
    std::string update = "max";
    double theta = 0.5;
    std::size_t maxout = 50;
    std::uint64_t seed = 0;
    std::size_t checkpoint_every = 1000;
    std::size_t beam_width = 10;
    std::size_t node_cap = 5'000'000;
    std::string out = "out";
};

inline void add_run_flags(CLI::App& app, RunOptions& o) {
    app.add_option("--data", o.data_path, "CSV data file");
    app.add_option("--schema", o.schema_path, "column kinds (default: data path with .schema extension)");
    app.add_option("--generate", o.generate,
                   "synthetic data: nb_obj,nb_attr,domain_size,nb_patterns,pattern_sup,out_factor,noise_rate | "
                   "NOBJ_NATTR_DOM | P_small");
    app.add_option("--algo", o.algo, "mcts|beam|exhaustive|sampler")->capture_default_str();
    app.add_option("--measure", o.measure, "wracc|f1|acc|jaccard|entropy")->capture_default_str();
    app.add_option("--target", o.target, "target label (default: first label in sorted order)");
    app.add_option("--minsupp", o.minsupp, "minimum support")->capture_default_str();
    app.add_option("--maxlen", o.maxlen, "maximum description length")->capture_default_str();
    app.add_option("--iterations", o.iterations, "MCTS iterations / sampler draws")->capture_default_str();
    app.add_option("--ucb", o.ucb, "ucb1|uct|sp-mcts|ucb1-tuned|dfs-uct")->capture_default_str();
    app.add_option("--cp", o.cp, "UCT exploration constant")->capture_default_str();
    app.add_option("--c", o.c, "SP-MCTS exploration weight")->capture_default_str();
    app.add_option("--d", o.d, "SP-MCTS variance bonus")->capture_default_str();
    app.add_option("--expand", o.expand, "direct|gen|label")->capture_default_str();
    app.add_option("--dedup", o.dedup, "none|LO|PU (default PU)")->take_all()->expected(1)->allow_extra_args(false);
    app.add_option("--rollout", o.rollout, "naive|direct-freq|large-freq")->capture_default_str();
    app.add_option("--pathlen", o.pathlen, "naive rollout length")->capture_default_str();
    app.add_option("--jumplen", o.jumplen, "large-freq jump length")->capture_default_str();
    app.add_option("--reward-agg", o.reward_agg, "terminal|random|max|mean|top-k-mean|top-<n>-mean")
        ->capture_default_str();
    app.add_option("--topk", o.topk, "k for top-k policies given as top-k")->capture_default_str();
    app.add_option("--memory", o.memory, "none|all|top-k|top-<n>")->capture_default_str();
    app.add_option("--update", o.update, "max|mean|top-k-mean|top-<n>-mean")->capture_default_str();
    app.add_option("--theta", o.theta, "redundancy threshold")->capture_default_str();
    app.add_option("--maxout", o.maxout, "maximum result size")->capture_default_str();
    app.add_option("--seed", o.seed, "master seed")->capture_default_str();
    app.add_option("--checkpoint-every", o.checkpoint_every, "checkpoint interval in iterations")
        ->capture_default_str();
    app.add_option("--beam-width", o.beam_width, "beam width")->capture_default_str();
    app.add_option("--node-cap", o.node_cap, "exhaustive enumeration cap")->capture_default_str();
    app.add_option("--out", o.out, "output directory")->capture_default_str();
}

struct LoadedData {
    std::unique_ptr<Dataset> data;
    std::optional<GroundTruth> truth;
    std::string source;
};

inline LoadedData load_data(const RunOptions& o) {
    if (o.data_path.empty() == o.generate.empty()) throw ConfigError("give exactly one of --data and --generate");
    LoadedData out;
    if (!o.generate.empty()) {
        auto params = parse_generator_spec(o.generate);
        params.seed = o.seed;
        auto g = generate_artificial(params);
        out.data = std::make_unique<Dataset>(std::move(g.data));
        out.truth = std::move(g.truth);
        out.source = "generated " + o.generate;
        return out;
    }
    std::filesystem::path path(o.data_path);
    std::filesystem::path schema = o.schema_path.empty() ? std::filesystem::path(path).replace_extension(".schema")
                                                         : std::filesystem::path(o.schema_path);
    out.data = std::make_unique<Dataset>(load_csv(path, Schema::load(schema)));
    out.source = o.data_path;
    return out;
}

/// Builds a validated search configuration; ConfigError on bad values.
inline SearchConfig make_config(const RunOptions& o, const Dataset& data) {
    SearchConfig c;
    c.ucb = parse_ucb(o.ucb);
    c.cp = o.cp, c.c = o.c, c.d = o.d;
    c.expand = parse_expand(o.expand);
    if (!o.dedup.empty()) {
        c.dedup = parse_dedup(o.dedup.front());
        for (const auto& v : o.dedup)
            if (parse_dedup(v) != c.dedup) throw ConfigError("--dedup values are mutually exclusive (LO and PU cannot be combined)");
    }
    c.rollout = parse_rollout(o.rollout);
    c.path_length = o.pathlen, c.jump_length = o.jumplen;
    if (o.topk < 1) throw ConfigError("--topk must be >= 1");
    c.reward = parse_reward(o.reward_agg, o.topk, c.reward_k);
    c.memory = parse_memory(o.memory, o.topk, c.memory_k);
    c.update = parse_update(o.update, o.topk, c.update_k);
    c.budget = o.iterations;
    c.min_support = o.minsupp;
    c.max_length = o.maxlen;
    c.measure.kind = parse_measure(o.measure);
    if (o.target.empty()) {
        c.measure.target = 0;
    } else {
        auto t = data.label_index(o.target);
        if (!t) throw ConfigError("unknown target label '" + o.target + "'");
        c.measure.target = *t;
    }
    c.seed = o.seed;
    c.theta = o.theta;
    c.max_output = o.maxout;
    c.checkpoint_every = o.checkpoint_every;
    c.validate();
    if (o.algo != "mcts" && o.algo != "beam" && o.algo != "exhaustive" && o.algo != "sampler")
        throw ConfigError("unknown algorithm '" + o.algo + "'");
    if (o.beam_width < 1) throw ConfigError("--beam-width must be >= 1");
    if (c.min_support > data.object_count()) throw ConfigError("--minsupp exceeds the number of objects");
    return c;
}

struct RunReport {
    std::vector<std::string> config_echo;
    std::size_t iterations = 0;
    double wall_ms = 0;
    std::size_t pool_size = 0;
    ResultSet result;
    double redundancy = 0;  // of the unfiltered top-maxout list
    std::vector<Checkpoint> checkpoints;
    std::optional<double> recovery;
    bool exhausted = false;
};

inline std::vector<std::string> echo(const RunOptions& o, const SearchConfig& c, const LoadedData& d) {
    const auto& data = *d.data;
    std::vector<std::string> e{
        "data = " + d.source + " (" + std::to_string(data.object_count()) + " objects, " +
            std::to_string(data.attribute_count()) + " attributes)",
        "algo = " + o.algo,
        "measure = " + std::string(to_string(c.measure.kind)) + " on label " + data.label_name(c.measure.target),
        "minsupp = " + std::to_string(c.min_support),
        "maxlen = " + std::to_string(c.max_length),
        "theta = " + format_number(c.theta),
        "maxout = " + std::to_string(c.max_output),
        "seed = " + std::to_string(c.seed),
    };
    if (o.algo == "mcts") {
        e.push_back("iterations = " + std::to_string(c.budget));
        e.push_back("ucb = " + std::string(to_string(c.ucb)) + " (cp " + format_number(c.cp) + ", c " +
                    format_number(c.c) + ", d " + format_number(c.d) + ")");
        e.push_back("expand = " + std::string(to_string(c.expand)));
        e.push_back("dedup = " + std::string(to_string(c.dedup)));
        e.push_back("rollout = " + std::string(to_string(c.rollout)) + " (pathlen " + std::to_string(c.path_length) +
                    ", jumplen " + std::to_string(c.jump_length) + ")");
        e.push_back("reward-agg = " + to_string(c.reward, c.reward_k));
        e.push_back("memory = " + to_string(c.memory, c.memory_k));
        e.push_back("update = " + to_string(c.update, c.update_k));
    } else if (o.algo == "beam") {
        e.push_back("beam-width = " + std::to_string(o.beam_width));
    } else if (o.algo == "sampler") {
        e.push_back("draws = " + std::to_string(c.budget));
    }
    return e;
}

inline RunReport execute(const RunOptions& o, const LoadedData& loaded) {
    const Dataset& data = *loaded.data;
    SearchConfig cfg = make_config(o, data);
    RunReport rep;
    rep.config_echo = echo(o, cfg, loaded);
    auto t0 = std::chrono::steady_clock::now();
    auto ms = [&] { return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count(); };
    auto snapshot = [&](std::size_t iterations, const PatternPool& pool) {
        Checkpoint cp{iterations, ms(), 0, pool.best_phi(), pool.size()};
        for (const auto& e : filter(pool, cfg.theta, cfg.max_output).entries) cp.diversity += e.phi;
        rep.checkpoints.push_back(cp);
    };

    PatternPool pool;
    if (o.algo == "mcts") {
        MctsEngine engine(data, cfg);
        engine.run([&](const Checkpoint& cp) { rep.checkpoints.push_back(cp); });
        rep.iterations = engine.iterations();
        rep.exhausted = engine.exhausted();
        pool = engine.take_pool();
    } else if (o.algo == "beam") {
        pool = beam_search(data, {o.beam_width, cfg.max_length, cfg.min_support, cfg.measure, 0});
        rep.iterations = pool.size();
        snapshot(rep.iterations, pool);
    } else if (o.algo == "exhaustive") {
        pool = exhaustive_dfs(data, cfg.min_support, cfg.max_length, cfg.measure, o.node_cap);
        rep.iterations = pool.size();
        rep.exhausted = true;
        snapshot(rep.iterations, pool);
    } else {
        // The sampler is run in checkpoint-sized chunks on one RNG stream.
        Rng rng(derive_seed(cfg.seed, seed_stream::search));
        for (std::size_t i = 0; i < cfg.budget; ++i) {
            std::size_t object = 0;
            auto sg = Subgroup::of(sample_generalization(data, rng, cfg.max_length, object), data);
            if (sg.support() >= cfg.min_support) {
                double phi = evaluate(cfg.measure, sg, data);
                pool.add(std::move(sg), phi, from_tree);
            }
            if ((i + 1) % cfg.checkpoint_every == 0 || i + 1 == cfg.budget) snapshot(i + 1, pool);
        }
        rep.iterations = cfg.budget;
    }
    rep.wall_ms = ms();
    rep.pool_size = pool.size();
    rep.result = filter(pool, cfg.theta, cfg.max_output);
    {
        auto ranked = to_entries(pool);
        std::stable_sort(ranked.begin(), ranked.end(), ranks_before);
        if (ranked.size() > cfg.max_output) ranked.resize(cfg.max_output);
        rep.redundancy = ranked.empty() ? 0.0 : redundancy(ranked, cfg.theta);
    }
    if (loaded.truth) rep.recovery = recovery_qual(*loaded.truth, rep.result, data);
    return rep;
}

inline double result_diversity(const RunReport& r) {
    double s = 0;
    for (const auto& e : r.result.entries) s += e.phi;
    return s;
}

inline void write_outputs(const RunReport& rep, const Dataset& data, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream f(dir / name, std::ios::binary);
        if (!f) throw Error("cannot write " + (dir / name).string());
        return f;
    };
    {
        auto f = open("result.csv");
        write_result_csv(f, rep.result, data);
    }
    {
        auto f = open("checkpoints.csv");
        csv::write_row(f, {"iteration", "elapsed_ms", "diversity", "best_phi"});
        for (const auto& c : rep.checkpoints)
            csv::write_row(f, {std::to_string(c.iterations), format_number(c.elapsed_ms), format_number(c.diversity),
                               format_number(c.best_phi)});
    }
    {
        auto f = open("report.txt");
        f << "configuration\n";
        for (const auto& line : rep.config_echo) f << "  " << line << '\n';
        f << "\nrun\n";
        f << "  iterations = " << rep.iterations << (rep.exhausted ? " (search space exhausted)" : "") << '\n';
        f << "  wall time = " << format_number(rep.wall_ms) << " ms\n";
        f << "  pool size = " << rep.pool_size << '\n';
        f << "  result size = " << rep.result.entries.size() << '\n';
        f << "  diversity = " << format_number(result_diversity(rep)) << '\n';
        f << "  redundancy of unfiltered top " << rep.result.max_output << " = " << format_number(rep.redundancy)
          << '\n';
        if (rep.recovery) f << "  recovery of hidden patterns = " << format_number(*rep.recovery) << '\n';
        f << "\nresult\n";
        write_result_text(f, rep.result, data);
    }
}

struct BenchCell {
    std::string data;
    std::string algo;
    std::string overrides;
    std::size_t repetitions = 1;
};

inline std::vector<BenchCell> read_matrix(std::istream& in) {
    auto rows = csv::parse(in);
    std::vector<BenchCell> cells;
    if (rows.empty()) return cells;
    const std::vector<std::string> header{"data", "algo", "overrides", "repetitions"};
    if (rows.front() != header) throw ConfigError("matrix header must be: data,algo,overrides,repetitions");
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != 4) throw ConfigError("matrix row " + std::to_string(r) + " needs 4 fields");
        BenchCell c{row[0], row[1], row[2], 1};
        try {
            c.repetitions = std::stoul(row[3]);
        } catch (const std::exception&) {
            throw ConfigError("bad repetition count '" + row[3] + "' in matrix row " + std::to_string(r));
        }
        cells.push_back(std::move(c));
    }
    return cells;
}

inline const std::vector<std::string>& bench_header() {
    static const std::vector<std::string> h{"data",       "algo",          "overrides", "repetitions",
                                            "status",     "recovery_qual", "diversity", "redundancy",
                                            "runtime_ms", "iterations",    "pool_size"};
    return h;
}

/// Runs one matrix cell `repetitions` times with seeds seed, seed+1, ...
/// and returns its aggregated CSV row. Failures become a status string.
inline std::vector<std::string> run_cell(const BenchCell& cell, std::uint64_t base_seed) {
    std::vector<std::string> row{cell.data, cell.algo, cell.overrides, std::to_string(cell.repetitions)};
    try {
        if (cell.repetitions < 1) throw ConfigError("repetitions must be >= 1");
        RunOptions o;
        o.seed = base_seed;
        CLI::App app{"cell"};
        add_run_flags(app, o);
        app.parse(cell.overrides, false);
        o.algo = cell.algo;
        if (std::filesystem::is_regular_file(cell.data)) o.data_path = cell.data, o.generate.clear();
        else o.generate = cell.data, o.data_path.clear();
        double rec = 0, div = 0, red = 0, rt = 0, it = 0, ps = 0;
        bool has_rec = true;
        const std::uint64_t first = o.seed;
        for (std::size_t rep = 0; rep < cell.repetitions; ++rep) {
            o.seed = first + rep;
            auto loaded = load_data(o);
            auto r = execute(o, loaded);
            if (r.recovery) rec += *r.recovery;
            else has_rec = false;
            div += result_diversity(r), red += r.redundancy, rt += r.wall_ms;
            it += static_cast<double>(r.iterations), ps += static_cast<double>(r.pool_size);
        }
        const double n = static_cast<double>(cell.repetitions);
        row.insert(row.end(), {"ok", has_rec ? format_number(rec / n) : "", format_number(div / n),
                               format_number(red / n), format_number(rt / n), format_number(it / n),
                               format_number(ps / n)});
    } catch (const CLI::ParseError& e) {
        row.insert(row.end(), {"error: bad overrides (" + std::string(e.what()) + ")", "", "", "", "", "", ""});
    } catch (const std::exception& e) {
        row.insert(row.end(), {"error: " + std::string(e.what()), "", "", "", "", "", ""});
    }
    return row;
}

inline void run_bench(std::istream& matrix, std::ostream& out, std::uint64_t seed) {
    auto cells = read_matrix(matrix);
    csv::write_row(out, bench_header());
    for (const auto& cell : cells) {
        csv::write_row(out, run_cell(cell, seed));
        out.flush();
    }
}

/// Entry point shared by the executable and the tests.
inline int main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Subgroup discovery with Monte Carlo tree search"};
    app.require_subcommand(1);
    RunOptions ro;
    auto* run = app.add_subcommand("run", "search one dataset and write result.csv, checkpoints.csv, report.txt");
    add_run_flags(*run, ro);
    std::string matrix_path, bench_out;
    std::uint64_t bench_seed = 0;
    auto* bench = app.add_subcommand("bench", "run an experiment matrix and print aggregated CSV");
    bench->add_option("--matrix", matrix_path, "CSV with columns data,algo,overrides,repetitions")->required();
    bench->add_option("--out", bench_out, "output CSV file (default: stdout)");
    bench->add_option("--seed", bench_seed, "seed of the first repetition")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return usage_error;
    }

    try {
        if (run->parsed()) {
            LoadedData loaded;
            try {
                loaded = load_data(ro);
                make_config(ro, *loaded.data);
            } catch (const ConfigError& e) {
                err << "error: " << e.what() << "\n\n" << run->help();
                return usage_error;
            }
            auto rep = execute(ro, loaded);
            write_outputs(rep, *loaded.data, ro.out);
            out << "wrote " << rep.result.entries.size() << " subgroups to " << ro.out << "\n";
            return 0;
        }
        std::ifstream in(matrix_path);
        if (!in) throw Error("cannot open matrix " + matrix_path);
        if (bench_out.empty()) {
            run_bench(in, out, bench_seed);
        } else {
            std::ofstream f(bench_out, std::ios::binary);
            if (!f) throw Error("cannot write " + bench_out);
            run_bench(in, f, bench_seed);
        }
        return 0;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace sdmcts::cli
