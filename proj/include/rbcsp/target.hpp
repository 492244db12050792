#ifndef RBCSP_TARGET_HPP
#define RBCSP_TARGET_HPP

#include <rbcsp/csp.hpp>

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace rbcsp
{
    /// A partial-solution target: some T variables with no conflict inside them.
    /// The check only runs on states with at most `conflict_cap` conflicts, so
    /// covers of states above the cap are never found.
    struct TargetSpec
    {
        std::size_t target = 0;
        std::size_t conflict_cap = 1;
        std::size_t removal_budget = 0;

        /// Throws InputError unless target <= num_vars and conflict_cap >= 1.
        [[nodiscard]] static auto make(std::size_t num_vars, std::size_t target, std::size_t conflict_cap) -> TargetSpec;

        /// 5 when a single variable may be removed, 8 otherwise.
        [[nodiscard]] static auto default_cap(std::size_t num_vars, std::size_t target) -> std::size_t;
    };

    /// Smallest vertex cover of size <= budget of the conflict multigraph, sorted; nullopt if none.
    /// Exact: iterative deepening over a branch-on-uncovered-edge search.
    [[nodiscard]] auto min_conflict_cover(std::span<const std::pair<Var, Var>> conflicts, std::size_t budget)
        -> std::optional<std::vector<Var>>;

    /// Endpoints of every currently violated constraint.
    [[nodiscard]] auto conflict_edges(const SearchState & state) -> std::vector<std::pair<Var, Var>>;

    /// Sorted set of exactly spec.target variables inducing no conflict, or
    /// nullopt. Returns nullopt immediately above the conflict cap. When the
    /// cover is smaller than the removal budget, the highest-indexed
    /// remaining variables are dropped as well.
    [[nodiscard]] auto check_target(const SearchState & state, const TargetSpec & spec) -> std::optional<std::vector<Var>>;

    /// Conflicts among constraints whose endpoints both lie in `subset` (sorted).
    [[nodiscard]] auto conflicts_within(const Instance & instance, const Assignment & assignment,
        std::span<const Var> subset) -> std::size_t;
}

#endif
