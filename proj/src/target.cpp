#include <rbcsp/target.hpp>

#include <algorithm>
#include <string>

namespace rbcsp
{
    auto TargetSpec::make(std::size_t num_vars, std::size_t target, std::size_t conflict_cap) -> TargetSpec
    {
        if (target > num_vars)
            throw InputError("target " + std::to_string(target) + " exceeds the " + std::to_string(num_vars)
                + " variables");
        if (conflict_cap < 1)
            throw InputError("conflict cap must be at least 1");
        return TargetSpec{target, conflict_cap, num_vars - target};
    }

    auto TargetSpec::default_cap(std::size_t num_vars, std::size_t target) -> std::size_t
    {
        return num_vars - std::min(target, num_vars) <= 1 ? 5 : 8;
    }

    namespace
    {
        auto covered(const std::vector<Var> & cover, std::pair<Var, Var> edge) -> bool
        {
            return std::find(cover.begin(), cover.end(), edge.first) != cover.end()
                || std::find(cover.begin(), cover.end(), edge.second) != cover.end();
        }

        auto search(std::span<const std::pair<Var, Var>> conflicts, std::size_t depth_left, std::vector<Var> & cover)
            -> bool
        {
            auto open = std::find_if(conflicts.begin(), conflicts.end(),
                [&](const auto & e) { return ! covered(cover, e); });
            if (open == conflicts.end())
                return true;
            if (depth_left == 0)
                return false;
            for (auto endpoint : {open->first, open->second}) {
                cover.push_back(endpoint);
                if (search(conflicts, depth_left - 1, cover))
                    return true;
                cover.pop_back();
            }
            return false;
        }
    }

    auto min_conflict_cover(std::span<const std::pair<Var, Var>> conflicts, std::size_t budget)
        -> std::optional<std::vector<Var>>
    {
        std::vector<Var> cover;
        for (std::size_t limit = 0; limit <= budget; ++limit) {
            cover.clear();
            if (search(conflicts, limit, cover)) {
                std::sort(cover.begin(), cover.end());
                return cover;
            }
            // No cover can be larger than the number of edges.
            if (limit >= conflicts.size())
                break;
        }
        return std::nullopt;
    }

    auto conflict_edges(const SearchState & state) -> std::vector<std::pair<Var, Var>>
    {
        std::vector<std::pair<Var, Var>> edges;
        edges.reserve(state.conflicts());
        for (auto c : state.violated().items()) {
            const auto & k = state.instance().constraint(c);
            edges.emplace_back(k.var_a, k.var_b);
        }
        return edges;
    }

    auto check_target(const SearchState & state, const TargetSpec & spec) -> std::optional<std::vector<Var>>
    {
        auto n = state.instance().num_vars();
        if (state.conflicts() > spec.conflict_cap || spec.target > n)
            return std::nullopt;
        auto cover = min_conflict_cover(conflict_edges(state), n - spec.target);
        if (! cover)
            return std::nullopt;

        std::vector<Var> subset;
        subset.reserve(n);
        for (Var v = 0; v < n; ++v)
            if (! std::binary_search(cover->begin(), cover->end(), v))
                subset.push_back(v);
        subset.resize(spec.target);
        return subset;
    }

    auto conflicts_within(const Instance & instance, const Assignment & assignment, std::span<const Var> subset)
        -> std::size_t
    {
        std::vector<bool> inside(instance.num_vars(), false);
        for (auto v : subset)
            inside.at(v) = true;
        std::size_t count = 0;
        auto ks = instance.constraints();
        for (std::size_t c = 0; c < ks.size(); ++c) {
            const auto & k = ks[c];
            if (inside[k.var_a] && inside[k.var_b] && assignment.is_set(k.var_a) && assignment.is_set(k.var_b)
                    && std::find(k.disallowed.begin(), k.disallowed.end(), ValuePair{assignment[k.var_a], assignment[k.var_b]})
                        != k.disallowed.end())
                ++count;
        }
        return count;
    }
}
