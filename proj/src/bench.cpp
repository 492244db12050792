#include <rbcsp/bench.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <set>
#include <thread>

namespace rbcsp
{
    auto run_many(const Instance & instance, const UlsaConfig & config, std::size_t num_runs, std::uint64_t base_seed,
        unsigned workers) -> std::vector<RunRecord>
    {
        if (num_runs == 0)
            throw InputError("need at least one run");
        std::vector<RunRecord> records(num_runs);
        workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(std::min<std::size_t>(num_runs, 256)));

        if (workers == 1) {
            for (std::size_t i = 0; i < num_runs; ++i)
                records[i] = run(instance, config, base_seed + i);
            return records;
        }

        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (auto i = next++; i < num_runs; i = next++)
                        records[i] = run(instance, config, base_seed + i);
                }
                catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        pool.clear();
        for (auto & e : errors)
            if (e)
                std::rethrow_exception(e);
        return records;
    }

    namespace
    {
        auto median(std::vector<double> xs) -> double
        {
            if (xs.empty())
                return 0.0;
            std::sort(xs.begin(), xs.end());
            auto mid = xs.size() / 2;
            return xs.size() % 2 ? xs[mid] : 0.5 * (xs[mid - 1] + xs[mid]);
        }

        auto mean(const std::vector<double> & xs) -> double
        {
            return xs.empty() ? 0.0 : std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
        }
    }

    auto summarize(std::span<const RunRecord> records) -> RunSummary
    {
        RunSummary s;
        s.runs = records.size();
        std::vector<double> iterations, times;
        s.best_conflicts = records.empty() ? 0 : records.front().best_conflicts;
        for (const auto & r : records) {
            s.successes += r.success;
            s.totals += r.stats;
            s.best_conflicts = std::min(s.best_conflicts, r.best_conflicts);
        }
        bool successes_only = s.successes > 0;
        for (const auto & r : records)
            if (r.success || ! successes_only) {
                iterations.push_back(static_cast<double>(r.iterations));
                times.push_back(r.wall_time);
            }
        s.success_rate = s.runs ? static_cast<double>(s.successes) / static_cast<double>(s.runs) : 0.0;
        s.mean_iterations = mean(iterations);
        s.median_iterations = median(iterations);
        s.mean_time = mean(times);
        s.median_time = median(times);
        if (s.totals.iterations > 0) {
            s.expansion_rate = static_cast<double>(s.totals.expansions) / static_cast<double>(s.totals.iterations);
            s.worsening_rate = static_cast<double>(s.totals.worsening) / static_cast<double>(s.totals.iterations);
        }
        return s;
    }

    auto Rtd::from_samples(std::vector<double> samples) -> Rtd
    {
        Rtd rtd;
        std::sort(samples.begin(), samples.end());
        rtd.samples = std::move(samples);
        auto total = static_cast<double>(rtd.samples.size());
        for (std::size_t i = 0; i < rtd.samples.size(); ++i) {
            bool last_of_tie = i + 1 == rtd.samples.size() || rtd.samples[i + 1] != rtd.samples[i];
            if (last_of_tie)
                rtd.ecdf.push_back(Point{rtd.samples[i], static_cast<double>(i + 1) / total});
        }
        return rtd;
    }

    auto Rtd::from_runs(std::span<const RunRecord> records) -> Rtd
    {
        std::vector<double> samples;
        for (const auto & r : records)
            if (r.success)
                samples.push_back(static_cast<double>(r.iterations));
        return from_samples(std::move(samples));
    }

    auto ExponentialFit::cdf(double x) const -> double
    {
        return x <= 0.0 ? 0.0 : 1.0 - std::exp(-x / mean);
    }

    auto fit_exponential(const Rtd & rtd) -> ExponentialFit
    {
        if (rtd.samples.size() < 2)
            throw FitError("exponential fit needs at least 2 successful runs, have "
                + std::to_string(rtd.samples.size()));
        ExponentialFit fit;
        fit.mean = std::accumulate(rtd.samples.begin(), rtd.samples.end(), 0.0) / static_cast<double>(rtd.samples.size());
        if (! (fit.mean > 0.0))
            throw FitError("exponential fit needs a positive mean");

        // Compare against the ECDF just before and at each step.
        double below = 0.0;
        for (const auto & p : rtd.ecdf) {
            auto f = fit.cdf(p.iterations);
            fit.ks = std::max({fit.ks, std::abs(p.probability - f), std::abs(f - below)});
            below = p.probability;
        }
        return fit;
    }

    auto fit_linear_early(const Rtd & rtd, double quantile) -> LinearFit
    {
        std::vector<Rtd::Point> points;
        for (const auto & p : rtd.ecdf)
            if (p.probability <= quantile)
                points.push_back(p);
        if (points.size() < 3)
            throw FitError("linear fit needs at least 3 ECDF points with probability <= "
                + std::to_string(quantile) + ", have " + std::to_string(points.size()));

        auto count = static_cast<double>(points.size());
        double mx = 0.0, my = 0.0;
        for (const auto & p : points) {
            mx += p.iterations;
            my += p.probability;
        }
        mx /= count;
        my /= count;
        double sxx = 0.0, sxy = 0.0, syy = 0.0;
        for (const auto & p : points) {
            sxx += (p.iterations - mx) * (p.iterations - mx);
            sxy += (p.iterations - mx) * (p.probability - my);
            syy += (p.probability - my) * (p.probability - my);
        }
        if (sxx == 0.0)
            throw FitError("linear fit needs distinct iteration counts");

        LinearFit fit;
        fit.slope = sxy / sxx;
        fit.intercept = my - fit.slope * mx;
        fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
        return fit;
    }

    auto histogram_of(const Instance & instance, std::span<const RunRecord> records) -> ConflictHistogram
    {
        ConflictHistogram h;
        if (records.empty())
            return h;
        for (const auto & r : records)
            ++h.runs_at[r.best_conflicts];
        h.best = h.runs_at.begin()->first;
        h.runs_at_best = h.runs_at.begin()->second;

        std::set<std::vector<Value>> assignments, parts;
        for (const auto & r : records) {
            if (r.best_conflicts != h.best || ! r.best_assignment)
                continue;
            const auto & x = *r.best_assignment;
            assignments.emplace(x.values().begin(), x.values().end());
            std::vector<Value> part(x.values().begin(), x.values().end());
            for (auto c : conflicting_constraints(instance, x)) {
                part[instance.constraint(c).var_a] = Assignment::unset;
                part[instance.constraint(c).var_b] = Assignment::unset;
            }
            parts.insert(std::move(part));
        }
        h.distinct_assignments = assignments.size();
        h.distinct_conflict_free_parts = parts.size();
        return h;
    }

    auto best_conflicts_histogram(const Instance & instance, std::uint64_t iteration_budget, std::size_t num_runs,
        std::uint64_t base_seed, unsigned workers) -> ConflictHistogram
    {
        if (iteration_budget == 0)
            throw InputError("iteration budget must be at least 1");
        UlsaConfig config;
        config.max_iterations = iteration_budget;
        config.record_best = true;
        auto records = run_many(instance, config, num_runs, base_seed, workers);
        return histogram_of(instance, records);
    }
}
