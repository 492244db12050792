#ifndef RBCSP_ULSA_HPP
#define RBCSP_ULSA_HPP

#include <rbcsp/csp.hpp>
#include <rbcsp/rng.hpp>
#include <rbcsp/target.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace rbcsp
{
    struct UlsaConfig
    {
        /// 0 means unbounded.
        std::uint64_t max_iterations = 0;
        std::optional<TargetSpec> target;
        /// Re-initialize from scratch (fresh timestamps and clock) every this many iterations.
        std::optional<std::uint64_t> restart_interval;
        bool stats_enabled = true;
        /// Keep a copy of the assignment at the first time the best conflict count was reached.
        bool record_best = false;
    };

    struct StepStats
    {
        std::uint64_t iterations = 0;
        /// Steps whose candidate set grew from {i} to {i, j}.
        std::uint64_t expansions = 0;
        /// Steps whose applied change strictly increased the conflict count.
        std::uint64_t worsening = 0;

        auto operator+=(const StepStats & other) -> StepStats &
        {
            iterations += other.iterations;
            expansions += other.expansions;
            worsening += other.worsening;
            return *this;
        }
    };

    /// What one step did.
    struct StepInfo
    {
        ConstraintId conflict = 0;
        Var preferred = 0;  // i: older timestamp
        Var other = 0;      // j
        bool expanded = false;
        Var changed = 0;
        Value value = 0;
        int delta = 0;
    };

    struct RunRecord
    {
        std::uint64_t seed = 0;
        std::uint64_t iterations = 0;
        double wall_time = 0.0;
        bool success = false;
        /// Zero conflicts overall, as opposed to a target subset.
        bool full_solution = false;
        std::size_t best_conflicts = 0;
        std::uint64_t restarts = 0;
        StepStats stats;
        /// On success: the assignment and the sorted witness variables
        /// (every variable for a full solution, the T-subset otherwise).
        std::optional<Assignment> assignment;
        std::vector<Var> witness;
        std::optional<Assignment> best_assignment;
    };

    /// Scratch buffers reused across steps.
    class StepWorkspace
    {
        public:
            explicit StepWorkspace(std::size_t domain_size) :
                _deltas_i(domain_size), _deltas_j(domain_size)
            {
                _candidates.reserve(2 * domain_size);
            }

        private:
            friend auto step(SearchState &, Rng &, StepStats &, StepWorkspace &) -> StepInfo;
            friend auto can_change_without_increase(const SearchState &, Var, StepWorkspace &) -> bool;

            std::vector<int> _deltas_i;
            std::vector<int> _deltas_j;
            std::vector<std::pair<Var, Value>> _candidates;
    };

    /// Timestamps and clock zero; variables set one at a time in a uniformly
    /// random order, each to a value minimizing conflicts with the variables
    /// already set (uniform tie-break).
    [[nodiscard]] auto init_state(const Instance & instance, Rng & rng) -> SearchState;

    /// True iff some value other than the current one has delta <= 0.
    [[nodiscard]] auto can_change_without_increase(const SearchState & state, Var v, StepWorkspace & workspace) -> bool;
    [[nodiscard]] auto can_change_without_increase(const SearchState & state, Var v) -> bool;

    /// One iteration:
    ///  1. pick a violated constraint uniformly;
    ///  2. order its endpoints (i, j) so t[i] <= t[j], ties by coin flip;
    ///  3. S = {i} if i can change without increasing conflicts or j was the
    ///     last variable changed, else S = {i, j};
    ///  4. apply the (k in S, u != x[k]) with minimum delta, uniform over ties.
    /// Throws ContractViolation when there is no conflict.
    auto step(SearchState & state, Rng & rng, StepStats & stats, StepWorkspace & workspace) -> StepInfo;
    auto step(SearchState & state, Rng & rng, StepStats & stats) -> StepInfo;

    /// Runs until zero conflicts, a satisfied target, or the iteration budget.
    /// Deterministic in (instance, config, seed) apart from wall_time.
    [[nodiscard]] auto run(const Instance & instance, const UlsaConfig & config, std::uint64_t seed) -> RunRecord;
}

#endif
