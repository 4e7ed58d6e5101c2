#include <gtest/gtest.h>

#include <martin/cellization.hpp>

using namespace martin;

TEST(Cellization, DiskQuarterArcs)
{
    auto const cells = cellize_boundary(exhaustion_level(Domain::unit_disk(), 2), 4);
    ASSERT_EQ(cells.cell_count, 4);
    for (int i = 0; i < 4; ++i)
    {
        double const mid = (i + 0.5) * pi / 2;
        EXPECT_NEAR(cells.representatives[i][0], 0.5 * std::cos(mid), 1e-15);
        EXPECT_NEAR(cells.representatives[i][1], 0.5 * std::sin(mid), 1e-15);
    }
    double const ten = 10 * pi / 180;
    EXPECT_EQ(cells.cell_of({0.5 * std::cos(ten), 0.5 * std::sin(ten)}), 0u);
    EXPECT_EQ(cells.cell_of({0.0, -0.5}), 3u);
    EXPECT_EQ(cells.chart_id, "disk/n=2/M=4");
}

TEST(Cellization, RejectsFewCells)
{
    EXPECT_THROW(cellize_boundary(exhaustion_level(Domain::unit_disk(), 2), 1),
                 InputError);
}

// Uniform points on a disk level set hit every one of M <= 64 cells.
TEST(Cellization, DiskTotality)
{
    for (int m : {2, 7, 64})
    {
        auto const level = exhaustion_level(Domain::unit_disk(), 4);
        auto const cells = cellize_boundary(level, m);
        std::vector<int> hist(m, 0);
        for (int k = 0; k < 10000; ++k)
        {
            double const a = 2 * pi * (k + 0.5) / 10000;
            auto const i = cells.cell_of({0.75 * std::cos(a), 0.75 * std::sin(a)});
            ASSERT_LT(i, static_cast<std::size_t>(m));
            ++hist[i];
        }
        for (int h : hist)
            EXPECT_GT(h, 0);
    }
}

TEST(Cellization, CutDiskChartRoundTrip)
{
    auto const level = exhaustion_level(Domain::cut_disk(), 8);
    auto const cells = cellize_boundary(level, 64);
    ASSERT_TRUE(cells.chart);
    auto const& chart = *cells.chart;
    for (int k = 0; k < 1000; ++k)
    {
        double const s = chart.length() * (k + 0.5) / 1000;
        Point const p = chart.point_at(s);
        ASSERT_NEAR(distance_to_boundary(level.domain, p), level.shell_radius,
                    1e-12);
        ASSERT_NEAR(chart.coordinate(p), s, 1e-9);
    }
}

TEST(Cellization, CutDiskMirrorSymmetry)
{
    auto const level = exhaustion_level(Domain::cut_disk(), 8);
    auto const cells = cellize_boundary(level, 64);
    for (int i = 0; i < 64; ++i)
    {
        Point const y = cells.representatives[i];
        EXPECT_EQ(cells.cell_of({y[0], -y[1]}), static_cast<std::size_t>(63 - i));
    }
}

TEST(Cellization, SpheresSeedsOnLevelSet)
{
    auto const level = exhaustion_level(Domain::tangent_spheres(), 4);
    auto const cells = cellize_boundary(level, 64, 7);
    ASSERT_EQ(cells.representatives.size(), 64u);
    for (auto const& y : cells.representatives)
    {
        EXPECT_LE(std::abs(distance_to_boundary(level.domain, y) - level.shell_radius),
                  chart_tolerance(level.domain));
        EXPECT_TRUE(level.mask->in_anchor_component(y));
    }
    EXPECT_EQ(cells.chart_id, "spheres/n=4/M=64,seed=7");
}

TEST(Cellization, ImplicitDeterministicAndTotal)
{
    auto const level = exhaustion_level(Domain::comb(), 4);
    auto const a = cellize_boundary(level, 32, 9);
    auto const b = cellize_boundary(level, 32, 9);
    auto const c = cellize_boundary(level, 32, 10);
    EXPECT_EQ(a.representatives, b.representatives);
    EXPECT_NE(a.representatives, c.representatives);
    for (std::size_t i = 0; i < a.representatives.size(); ++i)
        EXPECT_EQ(a.cell_of(a.representatives[i]), i);
}

TEST(Cellization, BudgetExhaustionIsReported)
{
    auto const level = exhaustion_level(Domain::comb(), 4);
    CellizationOptions opts;
    opts.attempts_per_cell = 1;
    EXPECT_THROW(cellize_boundary(level, 64, 7, opts), ChartError);
}
