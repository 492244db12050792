#include <rbcsp/rng.hpp>
#include <rbcsp/csp.hpp>

namespace rbcsp
{
    namespace
    {
        auto keyed_engine(std::uint64_t seed, Stream stream) -> std::mt19937_64
        {
            std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                static_cast<std::uint32_t>(static_cast<std::uint64_t>(stream))};
            return std::mt19937_64(seq);
        }
    }

    Rng::Rng(std::uint64_t seed, Stream stream) :
        _engine(keyed_engine(seed, stream))
    {
    }

    auto Rng::below(std::uint64_t bound) -> std::uint64_t
    {
        if (bound == 0)
            throw ContractViolation("Rng::below needs a positive bound");
        // Reject the incomplete top bucket.
        auto limit = std::uint64_t(0) - (std::uint64_t(0) - bound) % bound;
        for (;;) {
            auto r = _engine();
            if (limit == 0 || r < limit)
                return r % bound;
        }
    }
}
