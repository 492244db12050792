#ifndef RBCSP_MODELRB_HPP
#define RBCSP_MODELRB_HPP

#include <rbcsp/csp.hpp>

#include <cstddef>
#include <cstdint>

namespace rbcsp
{
    /// Model RB parameters. Derived counts round half away from zero:
    ///   domain_size          = round(n^alpha)
    ///   num_constraints      = round(r * n * ln n)
    ///   forbidden_per_constraint = round(p * d^2)
    struct ModelRbParams
    {
        std::size_t n = 0;
        double alpha = 0.8;
        double r = 0.0;
        double p = 0.25;

        std::size_t domain_size = 0;
        std::size_t num_constraints = 0;
        std::size_t forbidden_per_constraint = 0;

        /// Computes the derived counts and validates; throws InputError.
        [[nodiscard]] static auto make(std::size_t n, double alpha, double r, double p) -> ModelRbParams;
    };

    /// r = alpha / (ln 4 - ln 3) for alpha = 0.8.
    [[nodiscard]] auto phase_transition_r() -> double;

    /// alpha = 0.8, r = 0.8 / (ln 4 - ln 3), p = 0.25.
    [[nodiscard]] auto phase_transition_params(std::size_t n) -> ModelRbParams;

    /// Variable pairs drawn uniformly over unordered distinct pairs, with
    /// replacement; each disallowed set drawn without replacement.
    [[nodiscard]] auto generate(const ModelRbParams & params, std::uint64_t seed) -> Instance;

    struct ForcedInstance
    {
        Instance instance;
        Assignment hidden_solution;
    };

    /// Draws a hidden assignment first, then generates as above but redraws
    /// the whole disallowed set of any constraint that forbids the hidden
    /// pair (the variable pair is kept).
    [[nodiscard]] auto generate_forced(const ModelRbParams & params, std::uint64_t seed) -> ForcedInstance;
}

#endif
