#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace martin
{
//---------------------------------------------------------------------------//
/*!
 * Philox4x32-10 counter-based generator (Salmon et al., SC'11).
 *
 * A pure bijection of a 128-bit counter under a 64-bit key: the output for a
 * given (key, counter) never depends on how many other values were drawn or
 * in what order, which is what makes per-walk streams reproducible under any
 * thread schedule.
 */
class Philox4x32
{
  public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter apply(Counter ctr, Key key)
    {
        for (int round = 0; round < 10; ++round)
        {
            if (round > 0)
            {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            std::uint64_t const p0 = std::uint64_t{0xD2511F53u} * ctr[0];
            std::uint64_t const p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
            auto const hi0 = static_cast<std::uint32_t>(p0 >> 32);
            auto const lo0 = static_cast<std::uint32_t>(p0);
            auto const hi1 = static_cast<std::uint32_t>(p1 >> 32);
            auto const lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }
};

//! SplitMix64 finalizer, used to hash identifiers into stream tags.
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

//---------------------------------------------------------------------------//
/*!
 * Random stream for one walk, addressed by (seed, stream, index).
 *
 * The key is the user seed; the counter holds the walk index, a stream tag
 * separating independent experiments on the same seed, and a running block
 * number. Satisfies UniformRandomBitGenerator so it can drive std
 * distributions.
 */
class WalkStream
{
  public:
    using result_type = std::uint32_t;

    WalkStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
        : key_{static_cast<std::uint32_t>(seed),
               static_cast<std::uint32_t>(seed >> 32)}
        , index_{index}
        , stream_{static_cast<std::uint32_t>(stream ^ (stream >> 32))}
    {
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max()
    {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()()
    {
        if (pos_ == 4)
            refill();
        return block_[pos_++];
    }

    //! Uniform double in [0, 1) with 53 random bits.
    double uniform()
    {
        std::uint64_t const hi = (*this)() >> 5;
        std::uint64_t const lo = (*this)() >> 6;
        return static_cast<double>((hi << 26) | lo) * 0x1.0p-53;
    }

    std::uint32_t blocks_used() const { return block_count_; }

  private:
    void refill()
    {
        Philox4x32::Counter const ctr{static_cast<std::uint32_t>(index_),
                                      static_cast<std::uint32_t>(index_ >> 32),
                                      block_count_,
                                      stream_};
        block_ = Philox4x32::apply(ctr, key_);
        ++block_count_;
        pos_ = 0;
    }

    Philox4x32::Key key_;
    std::uint64_t index_;
    std::uint32_t stream_;
    std::uint32_t block_count_{0};
    Philox4x32::Counter block_{};
    int pos_{4};
};

}  // namespace martin
