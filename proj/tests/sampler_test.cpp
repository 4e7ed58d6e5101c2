#include <gtest/gtest.h>

#include <martin/measures.hpp>
#include <martin/oracles.hpp>
#include <martin/sampler.hpp>

using namespace martin;

namespace
{
WalkParams params(std::uint64_t walks, std::uint64_t seed = 1)
{
    WalkParams w;
    w.walks = walks;
    w.seed = seed;
    return w;
}
}  // namespace

TEST(WosStep, DiskOutside)
{
    auto const level = exhaustion_level(Domain::unit_disk(), 2);
    WalkStream rng(1, 0, 0);
    Point const p{0.75, 0.0};
    for (int k = 0; k < 10; ++k)
    {
        Point const q = wos_step(level.domain, WalkRegion::Outside, level, p, rng);
        EXPECT_NEAR(distance(p, q), 0.25, 1e-15);
    }
}

TEST(WosStep, DiskInside)
{
    auto const level = exhaustion_level(Domain::unit_disk(), 8);
    WalkStream rng(1, 0, 0);
    Point const q
        = wos_step(level.domain, WalkRegion::Inside, level, {0.0, 0.0}, rng);
    EXPECT_NEAR(norm(q), 0.875, 1e-15);
}

TEST(WosStep, CombShellBound)
{
    auto const level = exhaustion_level(Domain::comb(), 4);
    Point const p{0.75, 0.05};
    ASSERT_NEAR(distance_to_boundary(level.domain, p), 0.05, 1e-15);
    EXPECT_NEAR(step_radius(WalkRegion::Outside, level.shell_radius, 0.05),
                0.0125,
                1e-15);
    WalkStream rng(2, 0, 0);
    Point const q = wos_step(level.domain, WalkRegion::Outside, level, p, rng);
    EXPECT_NEAR(distance(p, q), 0.0125, 1e-15);
}

TEST(WosStep, OutsideRegionIsABug)
{
    auto const level = exhaustion_level(Domain::unit_disk(), 2);
    WalkStream rng(1, 0, 0);
    EXPECT_THROW(wos_step(level.domain, WalkRegion::Outside, level, {0.25, 0.0}, rng),
                 std::logic_error);
}

TEST(ExitWalk, Deterministic)
{
    auto const level = exhaustion_level(Domain::unit_disk(), 2);
    auto const cells = cellize_boundary(level, 64);
    auto const a = run_exit_walk(level, cells, {0.75, 0.0}, params(1), 17);
    auto const b = run_exit_walk(level, cells, {0.75, 0.0}, params(1), 17);
    EXPECT_EQ(a, b);
    EXPECT_NE(a.outcome, ExitOutcome::Aborted);
}

TEST(ExitWalk, Preconditions)
{
    auto const level = exhaustion_level(Domain::unit_disk(), 2);
    auto const cells = cellize_boundary(level, 64);
    EXPECT_THROW(run_exit_walk(level, cells, {1 - 1e-7, 0.0}, params(1), 0),
                 InputError);
    EXPECT_THROW(run_exit_walk(level, cells, {0.25, 0.0}, params(1), 0),
                 InputError);
    EXPECT_THROW(run_exit_walk(level, cells, {0.5, 0.0, 0.0}, params(1), 0),
                 InputError);
    WalkParams bad = params(1);
    bad.epsilon_shell = 0.2;
    EXPECT_THROW(run_exit_walk(level, cells, {0.75, 0.0}, bad, 0), InputError);
    bad = params(1);
    bad.max_steps = 999;
    EXPECT_THROW(run_exit_walk(level, cells, {0.75, 0.0}, bad, 0), InputError);
}

TEST(ExitWalk, HitPointsOnTheirBoundaries)
{
    auto const level = exhaustion_level(Domain::comb(), 4);
    auto const cells = cellize_boundary(level, 32);
    Point const z{0.75, 0.96};
    WalkParams const w = params(1, 3);
    int hits = 0;
    for (std::uint64_t i = 0; i < 2000; ++i)
    {
        auto const s = run_exit_walk(level, cells, z, w, i);
        double const d = distance_to_boundary(level.domain, s.hit_point);
        if (s.outcome == ExitOutcome::HitK)
        {
            ++hits;
            EXPECT_LE(std::abs(d - level.shell_radius), 2 * w.epsilon_shell);
        }
        else if (s.outcome == ExitOutcome::HitW)
            EXPECT_LE(d, w.epsilon_shell);
    }
    EXPECT_GT(hits, 0);
}

TEST(ExitWalk, RarelyAborts)
{
    auto const level = exhaustion_level(Domain::unit_disk(), 2);
    auto const cells = cellize_boundary(level, 64);
    auto const t = tally_exit_walks(level, cells, {0.75, 0.0}, params(100000), 0, 100000);
    EXPECT_LE(t.aborted, 100u);
    EXPECT_EQ(t.accepted + t.hit_outer + t.aborted, t.trials);
}

TEST(Conditioned, MergeIsExact)
{
    auto const level = exhaustion_level(Domain::unit_disk(), 2);
    auto const cells = cellize_boundary(level, 64);
    Point const z{0.75, 0.0};
    WalkParams w = params(20000, 5);
    auto merged = tally_exit_walks(level, cells, z, w, 0, 10000);
    merged += tally_exit_walks(level, cells, z, w, 10000, 20000);
    auto const full = tally_exit_walks(level, cells, z, w, 0, 20000);
    EXPECT_EQ(merged, full);
    EXPECT_EQ(sample_conditioned_exit(level, cells, z, w), full);
}

TEST(Conditioned, ThreadCountDoesNotMatter)
{
    auto const level = exhaustion_level(Domain::comb(), 4);
    auto const cells = cellize_boundary(level, 32);
    Point const z{0.75, 0.96};
    WalkParams w = params(10000, 8);
    auto const one = sample_conditioned_exit(level, cells, z, w);
    w.threads = 3;
    EXPECT_EQ(sample_conditioned_exit(level, cells, z, w), one);
}

TEST(Conditioned, NormalizedCounts)
{
    auto const level = exhaustion_level(Domain::unit_disk(), 2);
    auto const cells = cellize_boundary(level, 64);
    auto const d = sample_conditioned_exit(level, cells, {0.75, 0.0}, params(20000));
    std::uint64_t sum = 0;
    for (auto c : d.counts)
        sum += c;
    EXPECT_EQ(sum, d.accepted);
    double total = 0;
    for (double p : d.probs())
        total += p;
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Conditioned, MirrorSymmetry)
{
    auto const level = exhaustion_level(Domain::unit_disk(), 2);
    auto const cells = cellize_boundary(level, 64);
    auto const d = sample_conditioned_exit(level, cells, {0.75, 0.0}, params(100000));
    for (int i = 0; i < 32; ++i)
    {
        double const a = static_cast<double>(d.counts[i]);
        double const b = static_cast<double>(d.counts[63 - i]);
        EXPECT_LE(std::abs(a - b), 3 * std::sqrt(a + b)) << i;
    }
}

// Central calibration: sampler against the annulus series.
TEST(Conditioned, MatchesAnnulusOracle)
{
    auto const level = exhaustion_level(Domain::unit_disk(), 2);
    auto const cells = cellize_boundary(level, 64);
    WalkParams w = params(100000);
    w.min_accepted = 100000;
    auto const d = sample_conditioned_exit(level, cells, {0.75, 0.0}, w);
    ASSERT_GE(d.accepted, 100000u);
    auto const oracle = oracle::AnnulusExit(0.5, 1.0, {0.75, 0.0}).conditional_cells(64);
    EXPECT_LT(total_variation(d.probs(), oracle), 0.05);
    EXPECT_NEAR(d.acceptance_rate(),
                oracle::AnnulusExit(0.5, 1.0, {0.75, 0.0}).inner_mass(),
                0.01);
}

TEST(Conditioned, CutDiskStaysAboveSlit)
{
    auto const level = exhaustion_level(Domain::cut_disk(), 8);
    auto const cells = cellize_boundary(level, 64);
    auto const d = sample_conditioned_exit(level, cells, {0.5, 0.001}, params(100000));
    EXPECT_GT(d.acceptance_rate(), 1e-3);
    EXPECT_LT(d.acceptance_rate(), 1e-1);
    std::uint64_t below = 0;
    for (int i = 0; i < 64; ++i)
        if (cells.representatives[i][1] < 0)
            below += d.counts[i];
    EXPECT_LT(static_cast<double>(below), 0.05 * d.accepted);
}

TEST(Conditioned, FailureAndLowAcceptance)
{
    auto const level = exhaustion_level(Domain::tangent_spheres(), 2);
    auto const cells = cellize_boundary(level, 16);
    WalkParams w = params(500);
    w.budget_multiplier = 2;
    Point const horn{0.05, 0.0, (2 - std::sqrt(4 - 0.0025) + 1 - std::sqrt(1 - 0.0025)) / 2};
    EXPECT_THROW(sample_conditioned_exit(level, cells, horn, w), ConditioningFailure);

    auto const disk = exhaustion_level(Domain::unit_disk(), 2);
    auto const disk_cells = cellize_boundary(disk, 8);
    w.min_accepted = 100000;
    w.budget_multiplier = 1;
    auto const d = sample_conditioned_exit(disk, disk_cells, {0.75, 0.0}, w);
    EXPECT_TRUE(d.low_acceptance);
    EXPECT_EQ(d.trials, 500u);
}

TEST(Inside, UniformFromCenter)
{
    auto const level = exhaustion_level(Domain::unit_disk(), 8);
    auto const cells = cellize_boundary(level, 64);
    auto const d = harmonic_measure_inside(level, cells, {0.0, 0.0}, params(100000));
    EXPECT_EQ(d.accepted, d.trials - d.aborted);
    EXPECT_LT(d.abort_fraction(), 1e-3);
    double const p = 1.0 / 64;
    double const sigma = std::sqrt(p * (1 - p) / d.trials);
    for (int i = 0; i < 64; ++i)
        EXPECT_LE(std::abs(static_cast<double>(d.counts[i]) / d.trials - p),
                  3 * sigma)
            << i;
}

TEST(Inside, MatchesArcOracle)
{
    auto const level = exhaustion_level(Domain::unit_disk(), 8);
    auto const cells = cellize_boundary(level, 64);
    Point const x{0.5, 0.0};
    auto const d = harmonic_measure_inside(level, cells, x, params(100000, 4));
    for (int i = 0; i < 64; ++i)
    {
        double const q = oracle::disk_arc_harmonic_measure(
            0.875, x, 2 * pi * i / 64, 2 * pi * (i + 1) / 64);
        double const sigma = std::sqrt(q * (1 - q) / d.trials);
        EXPECT_LE(std::abs(static_cast<double>(d.counts[i]) / d.trials - q),
                  3 * sigma)
            << i;
    }
}

TEST(Inside, Preconditions)
{
    auto const level = exhaustion_level(Domain::unit_disk(), 8);
    auto const cells = cellize_boundary(level, 64);
    EXPECT_THROW(harmonic_measure_inside(level, cells, {0.9, 0.0}, params(10)),
                 InputError);
}
