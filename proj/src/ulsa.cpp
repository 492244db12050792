#include <rbcsp/ulsa.hpp>

#include <algorithm>
#include <chrono>
#include <limits>
#include <numeric>

namespace rbcsp
{
    auto init_state(const Instance & instance, Rng & rng) -> SearchState
    {
        SearchState state(instance);
        auto n = instance.num_vars();
        auto d = instance.domain_size();

        std::vector<Var> order(n);
        std::iota(order.begin(), order.end(), Var{0});
        for (auto k = n; k > 1; --k)
            std::swap(order[k - 1], order[rng.below(k)]);

        std::vector<int> cost(d);
        std::vector<Value> best;
        best.reserve(d);
        for (auto v : order) {
            state.evaluate_all_values(v, cost);
            auto lowest = *std::min_element(cost.begin(), cost.end());
            best.clear();
            for (Value u = 0; u < d; ++u)
                if (cost[u] == lowest)
                    best.push_back(u);
            state.initialize(v, best[rng.below(best.size())]);
        }
        return state;
    }

    auto can_change_without_increase(const SearchState & state, Var v, StepWorkspace & workspace) -> bool
    {
        auto & deltas = workspace._deltas_i;
        state.evaluate_all_values(v, deltas);
        auto current = state.value(v);
        for (Value u = 0; u < state.instance().domain_size(); ++u)
            if (u != current && deltas[u] <= 0)
                return true;
        return false;
    }

    auto can_change_without_increase(const SearchState & state, Var v) -> bool
    {
        StepWorkspace workspace(state.instance().domain_size());
        return can_change_without_increase(state, v, workspace);
    }

    auto step(SearchState & state, Rng & rng, StepStats & stats, StepWorkspace & workspace) -> StepInfo
    {
        const auto & violated = state.violated();
        if (violated.empty())
            throw ContractViolation("step needs at least one conflict");
        auto d = state.instance().domain_size();

        StepInfo info;
        info.conflict = violated[rng.below(violated.size())];
        const auto & k = state.instance().constraint(info.conflict);
        auto ta = state.timestamp(k.var_a);
        auto tb = state.timestamp(k.var_b);
        bool a_first = ta < tb || (ta == tb && rng.coin());
        info.preferred = a_first ? k.var_a : k.var_b;
        info.other = a_first ? k.var_b : k.var_a;

        bool other_just_changed = state.last_changed() == static_cast<std::int64_t>(info.other);
        bool stay = can_change_without_increase(state, info.preferred, workspace) || other_just_changed;
        info.expanded = ! stay;
        if (info.expanded)
            state.evaluate_all_values(info.other, workspace._deltas_j);

        auto best = std::numeric_limits<int>::max();
        auto & candidates = workspace._candidates;
        candidates.clear();
        auto consider = [&](Var var, const std::vector<int> & deltas) {
            auto current = state.value(var);
            for (Value u = 0; u < d; ++u) {
                if (u == current)
                    continue;
                if (deltas[u] < best) {
                    best = deltas[u];
                    candidates.clear();
                }
                if (deltas[u] == best)
                    candidates.emplace_back(var, u);
            }
        };
        consider(info.preferred, workspace._deltas_i);
        if (info.expanded)
            consider(info.other, workspace._deltas_j);

        auto [var, value] = candidates[rng.below(candidates.size())];
        info.changed = var;
        info.value = value;
        info.delta = best;
        state.apply_change(var, value);

        ++stats.iterations;
        stats.expansions += info.expanded;
        stats.worsening += best > 0;
        return info;
    }

    auto step(SearchState & state, Rng & rng, StepStats & stats) -> StepInfo
    {
        StepWorkspace workspace(state.instance().domain_size());
        return step(state, rng, stats, workspace);
    }

    auto run(const Instance & instance, const UlsaConfig & config, std::uint64_t seed) -> RunRecord
    {
        if (config.target && config.target->target > instance.num_vars())
            throw InputError("target exceeds the number of variables");
        if (config.restart_interval && *config.restart_interval == 0)
            throw InputError("restart interval must be positive");

        auto started = std::chrono::steady_clock::now();
        RunRecord record;
        record.seed = seed;

        Rng rng(seed, Stream::solve);
        StepWorkspace workspace(instance.domain_size());
        auto state = init_state(instance, rng);
        record.best_conflicts = state.conflicts();
        if (config.record_best)
            record.best_assignment = state.assignment();

        std::uint64_t since_restart = 0;
        StepStats counted;
        for (;;) {
            if (state.conflicts() == 0) {
                record.success = true;
                record.full_solution = true;
                record.witness.resize(instance.num_vars());
                std::iota(record.witness.begin(), record.witness.end(), Var{0});
                break;
            }
            if (config.target && state.conflicts() <= config.target->conflict_cap) {
                if (auto subset = check_target(state, *config.target)) {
                    record.success = true;
                    record.witness = std::move(*subset);
                    break;
                }
            }
            if (config.max_iterations != 0 && record.iterations >= config.max_iterations)
                break;
            if (config.restart_interval && since_restart >= *config.restart_interval) {
                state = init_state(instance, rng);
                since_restart = 0;
                ++record.restarts;
                if (state.conflicts() < record.best_conflicts) {
                    record.best_conflicts = state.conflicts();
                    if (config.record_best)
                        record.best_assignment = state.assignment();
                }
                continue;
            }

            step(state, rng, counted, workspace);
            ++record.iterations;
            ++since_restart;
            if (state.conflicts() < record.best_conflicts) {
                record.best_conflicts = state.conflicts();
                if (config.record_best)
                    record.best_assignment = state.assignment();
            }
        }

        if (record.success)
            record.assignment = state.assignment();
        if (config.stats_enabled)
            record.stats = counted;
        else
            record.stats.iterations = counted.iterations;
        record.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        return record;
    }
}
