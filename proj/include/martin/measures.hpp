#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "distribution.hpp"
#include "sampler.hpp"

namespace martin
{
//---------------------------------------------------------------------------//
//! Sum of absolute differences of two probability vectors.
inline double total_variation(std::span<double const> p,
                              std::span<double const> q)
{
    if (p.size() != q.size())
        throw InputError("probability vectors differ in length");
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        sum += std::abs(p[i] - q[i]);
    return sum;
}

/*!
 * Cell-discretized total variation |p - q|(boundary) of two exit
 * distributions. Lies in [0, 2] and bounds the continuum norm from below.
 */
inline double total_variation(ExitDistribution const& p,
                              ExitDistribution const& q)
{
    if (p.chart_id != q.chart_id || p.counts.size() != q.counts.size())
        throw InputError("exit distributions use different cellizations: '"
                         + p.chart_id + "' vs '" + q.chart_id + "'");
    auto const pp = p.probs();
    auto const qq = q.probs();
    return total_variation(pp, qq);
}

//! Multinomial resample of N = sum(counts) draws from counts / N.
template<class Rng>
std::vector<std::uint64_t> multinomial_resample(
    std::span<std::uint64_t const> counts, Rng& rng)
{
    std::uint64_t remaining = 0;
    for (auto c : counts)
        remaining += c;
    std::uint64_t mass_left = remaining;
    std::vector<std::uint64_t> out(counts.size(), 0);
    for (std::size_t i = 0; i < counts.size() && remaining > 0; ++i)
    {
        if (counts[i] == 0)
            continue;
        if (counts[i] == mass_left)
        {
            out[i] = remaining;
            break;
        }
        double const p = static_cast<double>(counts[i])
                         / static_cast<double>(mass_left);
        std::binomial_distribution<std::uint64_t> draw(remaining, p);
        out[i] = draw(rng);
        remaining -= out[i];
        mass_left -= counts[i];
    }
    return out;
}

struct BootstrapParams
{
    int resamples{200};
    double level{0.95};
    std::uint64_t seed{1};
    std::uint64_t stream{0xB0075A4Dull};
};

struct Interval
{
    double low{0};
    double high{0};
    double half_width() const { return (high - low) / 2; }
};

/*!
 * Percentile bootstrap interval for the plug-in total variation between two
 * count vectors.
 */
inline Interval bootstrap_tv_interval(std::span<std::uint64_t const> x,
                                      std::span<std::uint64_t const> y,
                                      BootstrapParams const& params)
{
    if (x.size() != y.size())
        throw InputError("count vectors differ in length");
    if (params.resamples < 2)
        throw InputError("bootstrap needs at least 2 resamples");
    WalkStream rng(params.seed, params.stream, 0);
    auto normalize = [](std::vector<std::uint64_t> const& c) {
        double total = 0;
        for (auto v : c)
            total += static_cast<double>(v);
        std::vector<double> p(c.size(), 0.0);
        if (total > 0)
            for (std::size_t i = 0; i < c.size(); ++i)
                p[i] = static_cast<double>(c[i]) / total;
        return p;
    };
    std::vector<double> stats;
    stats.reserve(params.resamples);
    for (int b = 0; b < params.resamples; ++b)
    {
        auto const px = normalize(multinomial_resample(x, rng));
        auto const py = normalize(multinomial_resample(y, rng));
        stats.push_back(total_variation(px, py));
    }
    std::sort(stats.begin(), stats.end());
    double const tail = (1 - params.level) / 2;
    auto quantile = [&](double q) {
        double const pos = q * (stats.size() - 1);
        auto const lo = static_cast<std::size_t>(std::floor(pos));
        auto const hi = std::min(lo + 1, stats.size() - 1);
        double const frac = pos - lo;
        return stats[lo] * (1 - frac) + stats[hi] * frac;
    };
    return {quantile(tail), quantile(1 - tail)};
}

struct FnDiagnostics
{
    double acceptance_x{0}, acceptance_y{0};
    double abort_x{0}, abort_y{0};
    std::uint64_t accepted_x{0}, accepted_y{0};
    bool low_acceptance{false};
};

struct FnEstimate
{
    double f_hat{0};
    double ci_half_width{0};
    Interval ci;
    FnDiagnostics diagnostics;
};

//! f-hat with bootstrap interval from two already sampled distributions.
inline FnEstimate fn_from_distributions(ExitDistribution const& px,
                                        ExitDistribution const& py,
                                        BootstrapParams const& boot)
{
    FnEstimate out;
    out.f_hat = total_variation(px, py);
    out.ci = bootstrap_tv_interval(px.counts, py.counts, boot);
    out.ci_half_width = out.ci.half_width();
    out.diagnostics = {px.acceptance_rate(),
                       py.acceptance_rate(),
                       px.abort_fraction(),
                       py.abort_fraction(),
                       px.accepted,
                       py.accepted,
                       px.low_acceptance || py.low_acceptance};
    return out;
}

namespace detail
{
//! Stream tag for a sampled point: a hash of its coordinates and role.
inline std::uint64_t point_stream(Point const& p, std::uint64_t role)
{
    std::uint64_t h = mix64(role);
    for (int i = 0; i < p.dim; ++i)
        h = mix64(h ^ std::bit_cast<std::uint64_t>(p[i]));
    return h;
}
}  // namespace detail

/*!
 * Estimate of f_n(x, y): total variation between the conditioned exit
 * distributions of x and y on the boundary of K_n.
 *
 * x and y draw from streams derived from their coordinates; when x == y
 * the second side uses a distinct role so that the result is a pure noise
 * floor rather than zero.
 */
inline FnEstimate fn_estimate(ExhaustionLevel const& level,
                              BoundaryCellization const& cells,
                              Point const& x,
                              Point const& y,
                              WalkParams const& params,
                              BootstrapParams boot = {})
{
    WalkParams px = params;
    px.stream = params.stream ^ detail::point_stream(x, 0);
    WalkParams py = params;
    py.stream = params.stream ^ detail::point_stream(y, x == y ? 1 : 0);
    auto const dx = sample_conditioned_exit(level, cells, x, px);
    auto const dy = sample_conditioned_exit(level, cells, y, py);
    boot.seed = params.seed;
    boot.stream ^= mix64(px.stream) ^ py.stream;
    return fn_from_distributions(dx, dy, boot);
}

}  // namespace martin
