#include <gtest/gtest.h>

#include <martin/io.hpp>
#include <martin/oracles.hpp>

using namespace martin;
using namespace martin::oracle;

TEST(PoissonDisk, CenterIsUniform)
{
    for (double phi : {0.0, 1.0, 4.0})
        EXPECT_DOUBLE_EQ(poisson_disk_density(1.0, {0.0, 0.0}, phi), 1 / (2 * pi));
}

TEST(PoissonDisk, RatioNearFar)
{
    Point const x{0.5, 0.0};
    EXPECT_NEAR(poisson_disk_density(1.0, x, 0.0) / poisson_disk_density(1.0, x, pi),
                9.0,
                1e-12);
}

TEST(PoissonDisk, Errors)
{
    EXPECT_THROW(poisson_disk_density(1.0, {1.0, 0.0}, 0.0), InputError);
    EXPECT_THROW(poisson_disk_density(0.0, {0.0, 0.0}, 0.0), InputError);
    EXPECT_THROW(disk_arc_harmonic_measure(1.0, {0.0, 0.0}, 1.0, 1.0), InputError);
}

TEST(DiskArc, Normalization)
{
    for (Point x : {Point{0.0, 0.0}, Point{0.5, 0.0}, Point{-0.3, 0.6}})
        EXPECT_NEAR(disk_arc_harmonic_measure(1.0, x, 0.0, 2 * pi), 1.0, 1e-10);
    EXPECT_NEAR(disk_arc_harmonic_measure(0.875, {0.0, 0.0}, 0.0, 2 * pi / 64),
                1.0 / 64,
                1e-12);
}

// For x = (r, 0) the arc measure has the primitive
// atan(((R + r)/(R - r)) tan(phi/2)) / pi on (-pi, pi).
TEST(DiskArc, MatchesClosedForm)
{
    double const radius = 0.875;
    Point const x{0.5, 0.0};
    double const r = 0.5;
    auto primitive = [&](double phi) {
        return std::atan((radius + r) / (radius - r) * std::tan(phi / 2)) / pi;
    };
    double const lo = -pi / 64, hi = pi / 64;
    double const expect = primitive(hi) - primitive(lo);
    EXPECT_NEAR(disk_arc_harmonic_measure(radius, x, lo, hi), expect, 1e-12);
}

TEST(Annulus, TotalProbability)
{
    AnnulusExit const a(0.5, 1.0, {0.75, 0.0});
    double inner = 0;
    int const k = 4096;
    for (int i = 0; i < k; ++i)
        inner += a.inner_density(2 * pi * (i + 0.5) / k) * 0.5 * 2 * pi / k;
    EXPECT_NEAR(inner + a.outer_mass(), 1.0, 1e-8);
    EXPECT_NEAR(a.inner_mass(), std::log(1 / 0.75) / std::log(2.0), 1e-15);
}

TEST(Annulus, EvenOnAxis)
{
    AnnulusExit const a(0.5, 1.0, {0.75, 0.0});
    for (double phi : {0.1, 0.7, 2.0, 3.0})
        EXPECT_NEAR(a.conditional_density(phi), a.conditional_density(-phi), 1e-13);
}

TEST(Annulus, ModeDoublingStable)
{
    for (Point x : {Point{0.75, 0.0}, Point{0.0, 0.6}, Point{-0.9, 0.2}})
    {
        double const r_in = x[0] == -0.9 ? 0.875 : 0.5;
        AnnulusExit const a(r_in, 1.0, x, 1024), b(r_in, 1.0, x, 2048);
        for (int i = 0; i < 32; ++i)
        {
            double const phi = 2 * pi * i / 32;
            EXPECT_NEAR(a.conditional_density(phi), b.conditional_density(phi), 1e-8);
        }
    }
}

TEST(Annulus, CellsAreProbabilities)
{
    auto const cells = AnnulusExit(0.5, 1.0, {0.75, 0.0}).conditional_cells(64);
    double total = 0;
    for (double p : cells)
    {
        EXPECT_GT(p, 0.0);
        total += p;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
}

// Termwise arc integrals agree with quadrature of the density.
TEST(Annulus, ArcMatchesQuadrature)
{
    AnnulusExit const a(0.5, 1.0, {0.7, 0.3});
    int const k = 20000;
    double const lo = 0.3, hi = 1.1;
    double sum = 0;
    for (int i = 0; i < k; ++i)
        sum += a.conditional_density(lo + (hi - lo) * (i + 0.5) / k) * 0.5
               * (hi - lo) / k;
    EXPECT_NEAR(a.conditional_arc(lo, hi), sum, 1e-8);
}

// The annulus solution is harmonic: five-point Laplacian vanishes.
TEST(Annulus, HarmonicInStartPoint)
{
    double const phi = 0.4, h = 1e-3;
    auto u = [&](double x, double y) {
        AnnulusExit const a(0.5, 1.0, {x, y});
        return a.inner_density(phi);
    };
    double const x = 0.6, y = 0.4;
    double const lap = u(x + h, y) + u(x - h, y) + u(x, y + h) + u(x, y - h)
                       - 4 * u(x, y);
    EXPECT_NEAR(lap / (h * h), 0.0, 1e-3);
}

TEST(Annulus, Errors)
{
    EXPECT_THROW(AnnulusExit(0.5, 1.0, {0.25, 0.0}), InputError);
    EXPECT_THROW(AnnulusExit(0.5, 1.0, {1.0, 0.0}), InputError);
    // Start point next to the inner circle: 4 modes cannot reach 1e-12.
    EXPECT_THROW(AnnulusExit(0.5, 1.0, {0.51, 0.0}, 4), OracleError);
}

TEST(Golden, AnnulusCells)
{
    auto const rows = io::read_csv(std::string(MARTIN_GOLDEN_DIR) + "/annulus_cells.csv");
    ASSERT_EQ(rows.size(), 65u);
    auto const cells = AnnulusExit(0.5, 1.0, {0.75, 0.0}).conditional_cells(64);
    for (int i = 0; i < 64; ++i)
        EXPECT_NEAR(std::stod(rows[i + 1][3]), cells[i], 1e-15);
}

TEST(Golden, DiskArcs)
{
    auto const rows = io::read_csv(std::string(MARTIN_GOLDEN_DIR) + "/disk_arcs.csv");
    ASSERT_EQ(rows.size(), 65u);
    for (int i = 0; i < 64; ++i)
        EXPECT_NEAR(std::stod(rows[i + 1][3]),
                    disk_arc_harmonic_measure(0.875,
                                              {0.5, 0.0},
                                              2 * pi * i / 64,
                                              2 * pi * (i + 1) / 64),
                    1e-15);
}
