#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace martin
{
//---------------------------------------------------------------------------//
/*!
 * Empirical exit distribution over the cells of a boundary cellization.
 *
 * For conditioned exits, \c accepted counts the walks that ended on the
 * compact set; for harmonic measure inside a level it is trials minus
 * aborted walks. Probabilities are always counts over accepted.
 */
struct ExitDistribution
{
    std::string chart_id;
    std::vector<std::uint64_t> counts;
    std::uint64_t accepted{0};
    std::uint64_t trials{0};
    std::uint64_t aborted{0};
    std::uint64_t hit_outer{0};
    std::uint64_t steps{0};
    //! Accepted walks whose hit point fell in the optional tally ball.
    std::uint64_t region_hits{0};
    bool low_acceptance{false};

    int cell_count() const { return static_cast<int>(counts.size()); }

    std::vector<double> probs() const
    {
        std::vector<double> p(counts.size(), 0.0);
        if (accepted == 0)
            return p;
        for (std::size_t i = 0; i < counts.size(); ++i)
            p[i] = static_cast<double>(counts[i])
                   / static_cast<double>(accepted);
        return p;
    }

    double acceptance_rate() const
    {
        return trials ? static_cast<double>(accepted) / trials : 0.0;
    }

    double abort_fraction() const
    {
        return trials ? static_cast<double>(aborted) / trials : 0.0;
    }

    //! Merge counts from a disjoint range of walks.
    ExitDistribution& operator+=(ExitDistribution const& other)
    {
        if (counts.empty())
            counts.assign(other.counts.size(), 0);
        for (std::size_t i = 0; i < counts.size(); ++i)
            counts[i] += other.counts[i];
        accepted += other.accepted;
        trials += other.trials;
        aborted += other.aborted;
        hit_outer += other.hit_outer;
        steps += other.steps;
        region_hits += other.region_hits;
        return *this;
    }

    friend bool operator==(ExitDistribution const&, ExitDistribution const&)
        = default;
};

}  // namespace martin
