#ifndef RBCSP_RNG_HPP
#define RBCSP_RNG_HPP

#include <cstdint>
#include <random>

namespace rbcsp
{
    /// Independent stream identifiers derived from one user seed.
    enum class Stream : std::uint64_t
    {
        generate = 0,
        solve = 1
    };

    /// Seedable generator: std::mt19937_64 keyed by std::seed_seq over
    /// (seed low word, seed high word, stream id). Bounded draws use
    /// rejection sampling rather than std::uniform_int_distribution so that
    /// sequences are identical across standard library implementations.
    class Rng
    {
        public:
            static constexpr const char * identifier = "mt19937_64+seed_seq(seed_lo,seed_hi,stream)/rejection-v1";

            Rng(std::uint64_t seed, Stream stream);

            /// Uniform integer in [0, bound); bound must be positive.
            auto below(std::uint64_t bound) -> std::uint64_t;

            auto coin() -> bool { return (_engine() >> 63) != 0; }

            /// Uniform double in [0, 1).
            auto unit() -> double { return static_cast<double>(_engine() >> 11) * 0x1.0p-53; }

        private:
            std::mt19937_64 _engine;
    };
}

#endif
