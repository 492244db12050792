#include <rbcsp/modelrb.hpp>
#include <rbcsp/rng.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace rbcsp
{
    auto ModelRbParams::make(std::size_t n, double alpha, double r, double p) -> ModelRbParams
    {
        if (n < 2)
            throw InputError("Model RB needs at least 2 variables, got " + std::to_string(n));
        if (! (alpha > 0.0) || ! std::isfinite(alpha))
            throw InputError("alpha must be positive");
        if (! (r > 0.0) || ! std::isfinite(r))
            throw InputError("r must be positive");
        if (! (p > 0.0 && p < 1.0))
            throw InputError("p must lie in (0, 1)");

        ModelRbParams result;
        result.n = n;
        result.alpha = alpha;
        result.r = r;
        result.p = p;
        auto nd = static_cast<double>(n);
        result.domain_size = static_cast<std::size_t>(std::llround(std::pow(nd, alpha)));
        result.num_constraints = static_cast<std::size_t>(std::llround(r * nd * std::log(nd)));
        auto d2 = static_cast<double>(result.domain_size * result.domain_size);
        result.forbidden_per_constraint = static_cast<std::size_t>(std::llround(p * d2));

        if (result.domain_size < 2)
            throw InputError("derived domain size " + std::to_string(result.domain_size) + " is below 2");
        if (result.domain_size > 4096)
            throw InputError("derived domain size " + std::to_string(result.domain_size) + " is too large");
        if (result.forbidden_per_constraint == 0)
            throw InputError("p * d^2 rounds to zero forbidden pairs");
        if (result.forbidden_per_constraint >= result.domain_size * result.domain_size)
            throw InputError("p * d^2 rounds to every pair forbidden");
        return result;
    }

    auto phase_transition_r() -> double
    {
        return 0.8 / (std::log(4.0) - std::log(3.0));
    }

    auto phase_transition_params(std::size_t n) -> ModelRbParams
    {
        return ModelRbParams::make(n, 0.8, phase_transition_r(), 0.25);
    }

    namespace
    {
        auto draw_pair(std::size_t n, Rng & rng) -> std::pair<Var, Var>
        {
            auto a = static_cast<Var>(rng.below(n));
            auto b = static_cast<Var>(rng.below(n - 1));
            if (b >= a)
                ++b;
            return a < b ? std::pair{a, b} : std::pair{b, a};
        }

        // Floyd's sampling of `count` distinct cells of a d x d grid, returned in row-major order.
        auto draw_disallowed(std::size_t d, std::size_t count, Rng & rng, std::vector<bool> & taken)
            -> std::vector<ValuePair>
        {
            auto cells = d * d;
            taken.assign(cells, false);
            std::vector<std::size_t> chosen;
            chosen.reserve(count);
            for (auto j = cells - count; j < cells; ++j) {
                auto t = static_cast<std::size_t>(rng.below(j + 1));
                auto pick = taken[t] ? j : t;
                taken[pick] = true;
                chosen.push_back(pick);
            }
            std::sort(chosen.begin(), chosen.end());
            std::vector<ValuePair> result;
            result.reserve(count);
            for (auto cell : chosen)
                result.emplace_back(static_cast<Value>(cell / d), static_cast<Value>(cell % d));
            return result;
        }

        auto generate_with(const ModelRbParams & params, Rng & rng, const Assignment * hidden) -> Instance
        {
            auto d = params.domain_size;
            std::vector<Constraint> constraints;
            constraints.reserve(params.num_constraints);
            std::vector<bool> taken;
            for (std::size_t c = 0; c < params.num_constraints; ++c) {
                Constraint k;
                std::tie(k.var_a, k.var_b) = draw_pair(params.n, rng);
                for (;;) {
                    k.disallowed = draw_disallowed(d, params.forbidden_per_constraint, rng, taken);
                    if (! hidden)
                        break;
                    ValuePair forbidden_here{(*hidden)[k.var_a], (*hidden)[k.var_b]};
                    if (! std::binary_search(k.disallowed.begin(), k.disallowed.end(), forbidden_here))
                        break;
                }
                constraints.push_back(std::move(k));
            }
            return Instance(params.n, d, std::move(constraints));
        }
    }

    auto generate(const ModelRbParams & params, std::uint64_t seed) -> Instance
    {
        Rng rng(seed, Stream::generate);
        return generate_with(params, rng, nullptr);
    }

    auto generate_forced(const ModelRbParams & params, std::uint64_t seed) -> ForcedInstance
    {
        Rng rng(seed, Stream::generate);
        std::vector<Value> values(params.n);
        for (auto & u : values)
            u = static_cast<Value>(rng.below(params.domain_size));
        Assignment hidden(std::move(values));
        auto instance = generate_with(params, rng, &hidden);
        return ForcedInstance{std::move(instance), std::move(hidden)};
    }
}
