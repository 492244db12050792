// rbcsp: generate, solve, benchmark and convert random binary CSP instances.

#include <rbcsp/bench.hpp>
#include <rbcsp/csp_io.hpp>
#include <rbcsp/mis.hpp>
#include <rbcsp/modelrb.hpp>
#include <rbcsp/rng.hpp>
#include <rbcsp/ulsa.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

using namespace rbcsp;
using nlohmann::json;

namespace
{
    constexpr const char * version = "rbcsp 1.0.0";

    auto open_in(const std::string & path) -> std::ifstream
    {
        std::ifstream in(path);
        if (! in)
            throw InputError("cannot open '" + path + "' for reading");
        return in;
    }

    // Writes to `path`, or stdout when empty.
    auto write_out(const std::string & path, const std::string & text) -> void
    {
        if (path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream out(path);
        if (! out || ! (out << text))
            throw InputError("cannot write '" + path + "'");
    }

    auto read_csp_file(const std::string & path) -> CspFile
    {
        auto in = open_in(path);
        try {
            return read_csp(in);
        }
        catch (const InputError & e) {
            throw InputError(path + ": " + e.what());
        }
    }

    auto read_dimacs_file(const std::string & path) -> MisGraph
    {
        auto in = open_in(path);
        DimacsReport report;
        try {
            auto graph = parse_dimacs(in, &report);
            if (report.duplicate_edges > 0)
                std::cerr << "warning: " << path << ": dropped " << report.duplicate_edges << " duplicate edges\n";
            return graph;
        }
        catch (const InputError & e) {
            throw InputError(path + ": " + e.what());
        }
    }

    auto resolve_seed(const std::optional<std::uint64_t> & seed) -> std::uint64_t
    {
        if (seed)
            return *seed;
        std::random_device entropy;
        auto drawn = (std::uint64_t{entropy()} << 32) | entropy();
        std::cerr << "seed: " << drawn << '\n';
        return drawn;
    }

    auto stats_json(const StepStats & stats) -> json
    {
        auto rate = [&](std::uint64_t count) {
            return stats.iterations ? static_cast<double>(count) / static_cast<double>(stats.iterations) : 0.0;
        };
        return json{{"iterations", stats.iterations}, {"expansions", stats.expansions},
            {"worsening", stats.worsening}, {"expansion_rate", rate(stats.expansions)},
            {"worsening_rate", rate(stats.worsening)}};
    }

    struct SolveFlags
    {
        std::string input;
        std::uint64_t max_iters = 0;
        std::optional<std::size_t> target;
        std::optional<std::size_t> conflict_cap;
        std::optional<std::uint64_t> restart_every;
    };

    auto add_solve_flags(CLI::App & cmd, SolveFlags & flags) -> void
    {
        cmd.add_option("--in", flags.input, "Instance in native CSP format")->required();
        cmd.add_option("--max-iters", flags.max_iters, "Iteration budget per run (0 = unbounded)");
        auto target = cmd.add_option("--target", flags.target, "Stop at a conflict-free subset of T variables");
        cmd.add_option("--conflict-cap", flags.conflict_cap, "Only check the target at or below this many conflicts")
            ->needs(target);
        cmd.add_option("--restart-every", flags.restart_every, "Re-initialize every N iterations")
            ->check(CLI::PositiveNumber);
    }

    auto make_config(const SolveFlags & flags, const Instance & instance) -> UlsaConfig
    {
        UlsaConfig config;
        config.max_iterations = flags.max_iters;
        config.restart_interval = flags.restart_every;
        if (flags.target) {
            auto cap = flags.conflict_cap.value_or(TargetSpec::default_cap(instance.num_vars(), *flags.target));
            config.target = TargetSpec::make(instance.num_vars(), *flags.target, cap);
        }
        return config;
    }

    auto run_json(const RunRecord & r, bool with_stats) -> json
    {
        json out{{"seed", r.seed}, {"success", r.success}, {"full_solution", r.full_solution},
            {"iterations", r.iterations}, {"best_conflicts", r.best_conflicts}, {"restarts", r.restarts},
            {"wall_time", r.wall_time}, {"rng", Rng::identifier}};
        if (r.success) {
            out["witness"] = r.witness;
            std::vector<Value> values(r.assignment->values().begin(), r.assignment->values().end());
            out["assignment"] = values;
        }
        else {
            out["witness"] = nullptr;
            out["assignment"] = nullptr;
        }
        if (with_stats)
            out["stats"] = stats_json(r.stats);
        return out;
    }

    auto csv_number(double x) -> std::string
    {
        std::ostringstream out;
        out.precision(17);
        out << x;
        return out.str();
    }
}

auto main(int argc, char ** argv) -> int
{
    CLI::App app{"Random binary CSP workbench: Model RB generation, ULSA local search, MIS conversion, benchmarking"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(version) + "\nrng: " + Rng::identifier);

    // gen
    auto gen = app.add_subcommand("gen", "Generate a Model RB instance");
    std::size_t gen_n = 0;
    double gen_alpha = 0.8, gen_r = phase_transition_r(), gen_p = 0.25;
    std::optional<std::uint64_t> gen_seed;
    bool gen_forced = false;
    std::string gen_out;
    gen->add_option("--n", gen_n, "Number of variables")->required();
    gen->add_option("--alpha", gen_alpha, "Domain size exponent: d = round(n^alpha)")->capture_default_str();
    gen->add_option("--r", gen_r, "Constraint density: m = round(r n ln n)")->capture_default_str();
    gen->add_option("--p", gen_p, "Fraction of forbidden value pairs per constraint")->capture_default_str();
    gen->add_option("--seed", gen_seed, "Generator seed");
    gen->add_flag("--forced", gen_forced, "Force satisfiable; the hidden solution is written as an 's' line");
    gen->add_option("--out", gen_out, "Output file (default stdout)");

    // solve
    auto solve = app.add_subcommand("solve", "Run ULSA once and print a JSON record");
    SolveFlags solve_flags;
    std::optional<std::uint64_t> solve_seed;
    bool solve_stats = false;
    add_solve_flags(*solve, solve_flags);
    solve->add_option("--seed", solve_seed, "Solver seed");
    solve->add_flag("--stats", solve_stats, "Include expansion and worsening counters");

    // bench
    auto bench = app.add_subcommand("bench", "Run ULSA many times and report distributions");
    SolveFlags bench_flags;
    std::size_t bench_runs = 100;
    std::uint64_t bench_base_seed = 0;
    unsigned bench_workers = 1;
    double bench_quantile = 0.2;
    std::string rtd_out, hist_out, summary_out;
    add_solve_flags(*bench, bench_flags);
    bench->add_option("--runs", bench_runs, "Number of independent runs")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    bench->add_option("--base-seed", bench_base_seed, "Run i uses seed base + i")->capture_default_str();
    bench->add_option("--workers", bench_workers, "Parallel runs")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    bench->add_option("--early-quantile", bench_quantile, "ECDF cutoff for the early linear fit")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    bench->add_option("--rtd-out", rtd_out, "CSV: iterations,ecdf,fitted");
    bench->add_option("--hist-out", hist_out, "CSV: conflicts,runs (best conflict count per run)");
    bench->add_option("--summary-out", summary_out, "JSON summary file (also printed to stdout)");

    // convert
    auto convert = app.add_subcommand("convert", "Convert between native CSP and DIMACS MIS graphs");
    std::string convert_in, convert_out;
    bool to_mis = false, to_csp = false;
    std::size_t convert_block = 0;
    convert->add_option("--in", convert_in, "Input file")->required();
    convert->add_option("--out", convert_out, "Output file (default stdout)");
    auto to_mis_flag = convert->add_flag("--to-mis", to_mis, "Native CSP -> DIMACS");
    auto to_csp_flag = convert->add_flag("--to-csp", to_csp, "DIMACS -> native CSP");
    to_mis_flag->excludes(to_csp_flag);
    auto block_opt = convert->add_option("--block-size", convert_block, "Vertices per CSP variable")
        ->check(CLI::PositiveNumber);
    to_csp_flag->needs(block_opt);

    // recover
    auto recover = app.add_subcommand("recover", "Recover a native CSP from a sequentially numbered DIMACS graph");
    std::string recover_in, recover_out;
    std::size_t recover_d = 0;
    recover->add_option("dimacs", recover_in, "DIMACS graph file")->required();
    recover->add_option("--d", recover_d, "Domain size (block size)")->required()->check(CLI::PositiveNumber);
    recover->add_option("--out", recover_out, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp & e) {
        return app.exit(e);
    }
    catch (const CLI::CallForVersion & e) {
        return app.exit(e);
    }
    catch (const CLI::ParseError & e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        if (*gen) {
            auto params = ModelRbParams::make(gen_n, gen_alpha, gen_r, gen_p);
            auto seed = resolve_seed(gen_seed);
            std::vector<std::string> comments{
                "Model RB n=" + std::to_string(params.n) + " alpha=" + csv_number(params.alpha) + " r="
                    + csv_number(params.r) + " p=" + csv_number(params.p),
                "d=" + std::to_string(params.domain_size) + " m=" + std::to_string(params.num_constraints)
                    + " forbidden=" + std::to_string(params.forbidden_per_constraint),
                "seed=" + std::to_string(seed) + (gen_forced ? " forced" : "") + " rng=" + Rng::identifier};
            std::ostringstream text;
            if (gen_forced) {
                auto forced = generate_forced(params, seed);
                write_csp(text, forced.instance, &forced.hidden_solution, comments);
            }
            else
                write_csp(text, generate(params, seed), nullptr, comments);
            write_out(gen_out, text.str());
        }
        else if (*solve) {
            auto file = read_csp_file(solve_flags.input);
            auto config = make_config(solve_flags, file.instance);
            auto record = run(file.instance, config, resolve_seed(solve_seed));
            std::cout << run_json(record, solve_stats).dump() << '\n';
        }
        else if (*bench) {
            auto file = read_csp_file(bench_flags.input);
            auto config = make_config(bench_flags, file.instance);
            config.record_best = ! hist_out.empty();
            auto records = run_many(file.instance, config, bench_runs, bench_base_seed, bench_workers);
            auto summary = summarize(records);
            auto rtd = Rtd::from_runs(records);
            auto histogram = histogram_of(file.instance, records);

            json out{{"runs", summary.runs}, {"base_seed", bench_base_seed}, {"rng", Rng::identifier},
                {"successes", summary.successes}, {"success_rate", summary.success_rate},
                {"mean_iterations", summary.mean_iterations}, {"median_iterations", summary.median_iterations},
                {"mean_time", summary.mean_time}, {"median_time", summary.median_time},
                {"best_conflicts", summary.best_conflicts}, {"expansion_rate", summary.expansion_rate},
                {"worsening_rate", summary.worsening_rate}, {"totals", stats_json(summary.totals)}};

            std::optional<ExponentialFit> exp_fit;
            try {
                exp_fit = fit_exponential(rtd);
                out["exponential_fit"] = json{{"mean", exp_fit->mean}, {"ks", exp_fit->ks}};
            }
            catch (const FitError & e) {
                out["exponential_fit"] = nullptr;
            }
            try {
                auto line = fit_linear_early(rtd, bench_quantile);
                out["linear_fit"] = json{{"quantile", bench_quantile}, {"slope", line.slope},
                    {"intercept", line.intercept}, {"r_squared", line.r_squared}};
            }
            catch (const FitError & e) {
                out["linear_fit"] = nullptr;
            }
            json hist = json::object();
            for (auto [conflicts, runs] : histogram.runs_at)
                hist[std::to_string(conflicts)] = runs;
            out["best_conflicts_histogram"] = hist;

            if (! rtd_out.empty()) {
                std::ostringstream csv;
                csv << "iterations,ecdf,fitted\n";
                for (const auto & p : rtd.ecdf)
                    csv << csv_number(p.iterations) << ',' << csv_number(p.probability) << ','
                        << (exp_fit ? csv_number(exp_fit->cdf(p.iterations)) : std::string()) << '\n';
                write_out(rtd_out, csv.str());
            }
            if (! hist_out.empty()) {
                std::ostringstream csv;
                csv << "conflicts,runs\n";
                for (auto [conflicts, runs] : histogram.runs_at)
                    csv << conflicts << ',' << runs << '\n';
                write_out(hist_out, csv.str());
            }
            auto text = out.dump(2) + "\n";
            if (! summary_out.empty())
                write_out(summary_out, text);
            std::cout << text;
        }
        else if (*convert) {
            if (! to_mis && ! to_csp)
                throw InputError("convert needs --to-mis or --to-csp");
            if (to_mis) {
                auto file = read_csp_file(convert_in);
                write_out(convert_out,
                    emit_dimacs(csp_to_mis(file.instance),
                        {"MIS form of a binary CSP, block size " + std::to_string(file.instance.domain_size())}));
            }
            else {
                auto instance = mis_to_csp(read_dimacs_file(convert_in), convert_block);
                std::ostringstream text;
                write_csp(text, instance, nullptr, {"recovered from " + convert_in + ", deduplicated"});
                write_out(convert_out, text.str());
            }
        }
        else if (*recover) {
            auto instance = mis_to_csp(read_dimacs_file(recover_in), recover_d);
            std::ostringstream text;
            write_csp(text, instance, nullptr, {"recovered from " + recover_in + ", deduplicated"});
            write_out(recover_out, text.str());
        }
    }
    catch (const std::exception & e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
