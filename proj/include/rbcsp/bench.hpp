#ifndef RBCSP_BENCH_HPP
#define RBCSP_BENCH_HPP

#include <rbcsp/csp.hpp>
#include <rbcsp/ulsa.hpp>

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

namespace rbcsp
{
    /// Not enough data to fit.
    class FitError : public std::runtime_error
    {
        public:
            using std::runtime_error::runtime_error;
    };

    /// Runs with seeds base_seed + 0 .. base_seed + num_runs - 1, results in seed
    /// order. With workers > 1 runs are spread over threads; the records are
    /// identical to a serial run apart from wall_time.
    [[nodiscard]] auto run_many(const Instance & instance, const UlsaConfig & config, std::size_t num_runs,
        std::uint64_t base_seed, unsigned workers = 1) -> std::vector<RunRecord>;

    struct RunSummary
    {
        std::size_t runs = 0;
        std::size_t successes = 0;
        double success_rate = 0.0;
        double mean_iterations = 0.0;
        double median_iterations = 0.0;
        double mean_time = 0.0;
        double median_time = 0.0;
        std::size_t best_conflicts = 0;
        StepStats totals;
        /// Ratios of summed counters, not means of per-run ratios.
        double expansion_rate = 0.0;
        double worsening_rate = 0.0;
    };

    /// Iteration and time statistics cover successful runs only (all runs if none succeeded).
    [[nodiscard]] auto summarize(std::span<const RunRecord> records) -> RunSummary;

    /// Empirical runtime distribution over successful runs.
    struct Rtd
    {
        struct Point
        {
            double iterations;
            double probability;
        };

        /// Sorted iteration counts, one per successful run.
        std::vector<double> samples;
        /// One point per distinct count, at the fraction of samples <= it.
        std::vector<Point> ecdf;

        [[nodiscard]] static auto from_samples(std::vector<double> samples) -> Rtd;
        [[nodiscard]] static auto from_runs(std::span<const RunRecord> records) -> Rtd;
    };

    struct ExponentialFit
    {
        /// Maximum-likelihood mean, i.e. the sample mean.
        double mean = 0.0;
        /// Kolmogorov-Smirnov distance to 1 - exp(-x / mean).
        double ks = 0.0;

        [[nodiscard]] auto cdf(double x) const -> double;
    };

    /// Needs at least 2 samples; throws FitError.
    [[nodiscard]] auto fit_exponential(const Rtd & rtd) -> ExponentialFit;

    struct LinearFit
    {
        double slope = 0.0;
        double intercept = 0.0;
        double r_squared = 0.0;
    };

    /// Least squares through the ECDF points with probability <= quantile.
    /// Needs at least 3 such points; throws FitError.
    [[nodiscard]] auto fit_linear_early(const Rtd & rtd, double quantile = 0.2) -> LinearFit;

    struct ConflictHistogram
    {
        /// Best conflict count -> number of runs.
        std::map<std::size_t, std::size_t> runs_at;
        std::size_t best = 0;
        std::size_t runs_at_best = 0;
        /// Distinct best-state assignments among the runs reaching `best`.
        std::size_t distinct_assignments = 0;
        /// Distinct assignments restricted to variables outside every conflict of that state.
        std::size_t distinct_conflict_free_parts = 0;
    };

    [[nodiscard]] auto histogram_of(const Instance & instance, std::span<const RunRecord> records)
        -> ConflictHistogram;

    /// Each run performs iteration_budget steps (stopping early only at zero
    /// conflicts, where no step exists) and records its best conflict count.
    [[nodiscard]] auto best_conflicts_histogram(const Instance & instance, std::uint64_t iteration_budget,
        std::size_t num_runs, std::uint64_t base_seed, unsigned workers = 1) -> ConflictHistogram;
}

#endif
