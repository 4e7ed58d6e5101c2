#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "cellization.hpp"
#include "distribution.hpp"
#include "rng.hpp"

namespace martin
{

struct WalkParams
{
    double epsilon_shell{1e-6};
    std::uint64_t max_steps{100000};
    std::uint64_t walks{100000};
    std::uint64_t seed{1};
    //! Tag separating independent experiments that share a seed.
    std::uint64_t stream{0};
    std::uint64_t min_accepted{0};
    std::uint64_t budget_multiplier{20};
    //! Worker count; results do not depend on it.
    unsigned threads{1};
};

enum class WalkRegion
{
    Outside,  //!< W \ K_n, absorbed on the level set or on the boundary of W
    Inside    //!< interior of K_n, absorbed on its boundary
};

enum class ExitOutcome
{
    HitK,
    HitW,
    Aborted
};

struct ExitSample
{
    ExitOutcome outcome{ExitOutcome::Aborted};
    std::size_t cell{0};
    Point hit_point;
    std::uint64_t steps{0};

    friend bool operator==(ExitSample const&, ExitSample const&) = default;
};

//! Ball used to tally how many accepted walks hit near a given point.
struct TallyBall
{
    Point center;
    double radius{0};
};

//---------------------------------------------------------------------------//
/*!
 * Radius of the walk-on-spheres step at p.
 *
 * Outside a level the radius is min(d_W, r - d_W), a lower bound on the
 * distance to both absorbing boundaries because d_W is 1-Lipschitz; inside a
 * level it is d_W - r. For disk levels both are the exact distances.
 */
inline double step_radius(WalkRegion region, double shell_radius, double d)
{
    return region == WalkRegion::Outside ? std::min(d, shell_radius - d)
                                         : d - shell_radius;
}

//! Uniform point on the sphere of the given radius around p.
template<class Rng>
Point uniform_on_sphere(Point const& p, double radius, Rng& rng)
{
    Point q = p;
    double const phi = 2 * pi * rng.uniform();
    if (p.dim == 2)
    {
        q[0] += radius * std::cos(phi);
        q[1] += radius * std::sin(phi);
        return q;
    }
    double const cos_t = 2 * rng.uniform() - 1;
    double const sin_t = std::sqrt(std::max(0.0, 1 - cos_t * cos_t));
    q[0] += radius * sin_t * std::cos(phi);
    q[1] += radius * sin_t * std::sin(phi);
    q[2] += radius * cos_t;
    return q;
}

//! One walk-on-spheres jump from p, which must lie strictly in the region.
template<class Rng>
Point wos_step(Domain const& domain,
               WalkRegion region,
               ExhaustionLevel const& level,
               Point const& p,
               Rng& rng)
{
    double const radius = step_radius(
        region, level.shell_radius, distance_to_boundary(domain, p));
    if (!(radius > 0))
        throw std::logic_error("walk point " + to_string(p)
                               + " is not inside the walk region");
    return uniform_on_sphere(p, radius, rng);
}

namespace detail
{
//! Walk from z until absorbed; the caller validated z.
inline ExitSample walk(ExhaustionLevel const& level,
                       BoundaryCellization const& cells,
                       WalkRegion region,
                       Point z,
                       WalkParams const& params,
                       std::uint64_t walk_index)
{
    WalkStream rng(params.seed, params.stream, walk_index);
    Domain const& domain = level.domain;
    double const r = level.shell_radius;
    double const eps = params.epsilon_shell;
    // Rounding slack for the no-overshoot check.
    double const slack = 1e-12;

    ExitSample out;
    for (std::uint64_t step = 0; step <= params.max_steps; ++step)
    {
        double const d = distance_to_boundary(domain, z);
        if (region == WalkRegion::Outside)
        {
            if (d > r + slack)
                throw std::logic_error("walk left the region W \\ K_n");
            if (d <= eps)
            {
                out.outcome = ExitOutcome::HitW;
                out.hit_point = z;
                out.steps = step;
                return out;
            }
            if (r - d <= eps)
            {
                out.outcome = ExitOutcome::HitK;
                out.hit_point = z;
                out.cell = cells.cell_of(z);
                out.steps = step;
                return out;
            }
        }
        else
        {
            if (d < r - slack)
                throw std::logic_error("walk left the interior of K_n");
            if (d - r <= eps)
            {
                out.outcome = ExitOutcome::HitK;
                out.hit_point = z;
                out.cell = cells.cell_of(z);
                out.steps = step;
                return out;
            }
        }
        if (step == params.max_steps)
            break;
        z = uniform_on_sphere(z, step_radius(region, r, d), rng);
    }
    out.outcome = ExitOutcome::Aborted;
    out.hit_point = z;
    out.steps = params.max_steps;
    return out;
}

inline void check_outside_start(ExhaustionLevel const& level,
                                Point const& z,
                                WalkParams const& params)
{
    check_dim(level.domain, z);
    double const d = distance_to_boundary(level.domain, z);
    if (!inside_domain(level.domain, z) || d <= params.epsilon_shell
        || level.shell_radius - d <= params.epsilon_shell)
        throw InputError("start point " + to_string(z)
                         + " is not strictly inside W \\ K_" +
                         std::to_string(level.n));
}

inline void check_inside_start(ExhaustionLevel const& level,
                               Point const& x,
                               WalkParams const& params)
{
    check_dim(level.domain, x);
    if (!membership_in_K(level, x)
        || distance_to_boundary(level.domain, x) - level.shell_radius
               <= params.epsilon_shell)
        throw InputError("start point " + to_string(x)
                         + " is not strictly inside K_"
                         + std::to_string(level.n));
}

inline void check_params(ExhaustionLevel const& level, WalkParams const& params)
{
    if (!(params.epsilon_shell > 0)
        || !(params.epsilon_shell < level.shell_radius / 4))
        throw InputError("epsilon_shell must lie in (0, r_n/4)");
    if (params.max_steps < 1000)
        throw InputError("max_steps must be at least 1000");
    if (params.walks == 0)
        throw InputError("walks must be positive");
}

/*!
 * Run walks [begin, end) and tally them.
 *
 * Work is split into fixed chunks claimed by workers; every chunk tally is
 * stored by chunk index and summed afterwards, so the result is identical
 * for any thread count.
 */
inline ExitDistribution run_range(ExhaustionLevel const& level,
                                  BoundaryCellization const& cells,
                                  WalkRegion region,
                                  Point const& z,
                                  WalkParams const& params,
                                  std::uint64_t begin,
                                  std::uint64_t end,
                                  TallyBall const* ball)
{
    constexpr std::uint64_t chunk = 2048;
    std::uint64_t const chunks = (end - begin + chunk - 1) / chunk;
    std::vector<ExitDistribution> partial(chunks);
    std::atomic<std::uint64_t> next{0};

    auto worker = [&] {
        for (std::uint64_t c; (c = next.fetch_add(1)) < chunks;)
        {
            ExitDistribution tally;
            tally.counts.assign(cells.cell_count, 0);
            std::uint64_t const lo = begin + c * chunk;
            std::uint64_t const hi = std::min(end, lo + chunk);
            for (std::uint64_t w = lo; w < hi; ++w)
            {
                ExitSample const s = walk(level, cells, region, z, params, w);
                ++tally.trials;
                tally.steps += s.steps;
                switch (s.outcome)
                {
                    case ExitOutcome::HitK:
                        ++tally.accepted;
                        ++tally.counts[s.cell];
                        if (ball
                            && distance(s.hit_point, ball->center)
                                   <= ball->radius)
                            ++tally.region_hits;
                        break;
                    case ExitOutcome::HitW:
                        ++tally.hit_outer;
                        break;
                    case ExitOutcome::Aborted:
                        ++tally.aborted;
                        break;
                }
            }
            partial[c] = std::move(tally);
        }
    };

    unsigned const workers = std::max(
        1u,
        std::min<unsigned>(params.threads, static_cast<unsigned>(chunks)));
    if (workers == 1)
    {
        worker();
    }
    else
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < workers; ++t)
            pool.emplace_back(worker);
    }

    ExitDistribution total;
    total.chart_id = cells.chart_id;
    total.counts.assign(cells.cell_count, 0);
    for (auto const& part : partial)
        total += part;
    return total;
}
}  // namespace detail

//---------------------------------------------------------------------------//
//! Single exit walk from z in W \ K_n; deterministic in (seed, walk_index).
inline ExitSample run_exit_walk(ExhaustionLevel const& level,
                                BoundaryCellization const& cells,
                                Point const& z,
                                WalkParams const& params,
                                std::uint64_t walk_index)
{
    detail::check_params(level, params);
    detail::check_outside_start(level, z, params);
    return detail::walk(
        level, cells, WalkRegion::Outside, z, params, walk_index);
}

/*!
 * Tally of exit walks with indices [begin, end) from z in W \ K_n.
 *
 * Tallies of disjoint ranges add up exactly to the tally of their union.
 */
inline ExitDistribution tally_exit_walks(ExhaustionLevel const& level,
                                         BoundaryCellization const& cells,
                                         Point const& z,
                                         WalkParams const& params,
                                         std::uint64_t begin,
                                         std::uint64_t end)
{
    detail::check_params(level, params);
    detail::check_outside_start(level, z, params);
    if (end < begin)
        throw InputError("walk range is reversed");
    return detail::run_range(
        level, cells, WalkRegion::Outside, z, params, begin, end, nullptr);
}

/*!
 * Conditioned exit distribution of walks from z onto the boundary of K_n.
 *
 * Runs batches of \c params.walks walks until \c min_accepted walks (at
 * least one) reached K_n or the budget of \c budget_multiplier batches is
 * spent. Throws ConditioningFailure when nothing was accepted.
 */
inline ExitDistribution
sample_conditioned_exit(ExhaustionLevel const& level,
                        BoundaryCellization const& cells,
                        Point const& z,
                        WalkParams const& params,
                        std::optional<TallyBall> const& ball = std::nullopt)
{
    detail::check_params(level, params);
    detail::check_outside_start(level, z, params);
    std::uint64_t const target = std::max<std::uint64_t>(params.min_accepted, 1);
    std::uint64_t const batches = std::max<std::uint64_t>(
        params.budget_multiplier, 1);

    ExitDistribution total;
    total.chart_id = cells.chart_id;
    total.counts.assign(cells.cell_count, 0);
    for (std::uint64_t b = 0; b < batches; ++b)
    {
        total += detail::run_range(level,
                                   cells,
                                   WalkRegion::Outside,
                                   z,
                                   params,
                                   b * params.walks,
                                   (b + 1) * params.walks,
                                   ball ? &*ball : nullptr);
        if (total.accepted >= target)
            break;
    }
    total.low_acceptance = total.accepted < params.min_accepted;
    if (total.accepted == 0)
        throw ConditioningFailure(
            "no walk from " + to_string(z) + " reached K_"
            + std::to_string(level.n) + " in " + std::to_string(total.trials)
            + " trials");
    return total;
}

/*!
 * Harmonic measure of the cells of the boundary of K_gamma seen from x.
 *
 * Every walk ends on the boundary or aborts; accepted = trials - aborted.
 */
inline ExitDistribution harmonic_measure_inside(ExhaustionLevel const& level,
                                                BoundaryCellization const& cells,
                                                Point const& x,
                                                WalkParams const& params)
{
    detail::check_params(level, params);
    detail::check_inside_start(level, x, params);
    ExitDistribution out = detail::run_range(
        level, cells, WalkRegion::Inside, x, params, 0, params.walks, nullptr);
    if (out.accepted == 0)
        throw ConditioningFailure("every walk from " + to_string(x)
                                  + " aborted");
    return out;
}

}  // namespace martin
