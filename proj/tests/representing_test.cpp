#include <gtest/gtest.h>

#include <martin/oracles.hpp>
#include <martin/representing.hpp>

using namespace martin;

namespace
{
RepresentingParams fast_params(std::uint64_t walks)
{
    RepresentingParams p;
    p.walk.walks = walks;
    return p;
}

RepresentingPartition const& disk_partition()
{
    static auto const part = build_partition(
        Domain::unit_disk(), 8, 64, {0, 0}, fast_params(50000));
    return part;
}
}  // namespace

TEST(HarmonicFunction, NormalizedAtBasePoint)
{
    Point const x0{0.2, -0.1};
    EXPECT_EQ(HarmonicFunction::constant_one()({0.5, 0.5}), 1.0);
    for (double th : {0.0, 1.0, pi})
        EXPECT_NEAR(HarmonicFunction::poisson(th, x0)(x0), 1.0, 1e-14);
    auto const p = HarmonicFunction::poisson(0.0);
    EXPECT_NEAR(p({0.5, 0.0}), 3.0, 1e-14);
    EXPECT_NEAR(p({-0.5, 0.0}), 1.0 / 3.0, 1e-14);
    EXPECT_THROW(p({1.0, 0.0}), InputError);
}

TEST(HarmonicFunction, AffineValidation)
{
    auto const a = HarmonicFunction::poisson(0.0);
    auto const b = HarmonicFunction::poisson(pi / 2);
    EXPECT_THROW(HarmonicFunction::affine({}), InputError);
    EXPECT_THROW(HarmonicFunction::affine({{0.5, a}, {0.6, b}}), InputError);
    EXPECT_THROW(HarmonicFunction::affine({{-0.5, a}, {1.5, b}}), InputError);
    auto const h = HarmonicFunction::affine({{0.3, a}, {0.7, b}});
    Point const z{0.1, 0.4};
    EXPECT_NEAR(h(z), 0.3 * a(z) + 0.7 * b(z), 1e-15);
    EXPECT_NEAR(h({0, 0}), 1.0, 1e-14);
}

TEST(HarmonicFunction, ParseRoundTrip)
{
    for (auto const* s : {"one", "poisson:0", "poisson:1.5707963267948966",
                          "affine(0.3*poisson:0;0.7*poisson:1.5707963267948966)"})
    {
        auto const h = parse_harmonic(s);
        EXPECT_EQ(parse_harmonic(h.describe()).describe(), h.describe()) << s;
        EXPECT_NEAR(parse_harmonic(h.describe())({0.2, 0.3}), h({0.2, 0.3}), 1e-15);
    }
    EXPECT_THROW(parse_harmonic("two"), InputError);
    EXPECT_THROW(parse_harmonic("poisson:"), InputError);
    EXPECT_THROW(parse_harmonic("affine(0.3*one)"), InputError);
}

// Poisson kernel is harmonic: the mean over a small circle equals the center.
TEST(HarmonicFunction, MeanValueProperty)
{
    auto const h = HarmonicFunction::affine(
        {{0.4, HarmonicFunction::poisson(0.3)}, {0.6, HarmonicFunction::poisson(2.0)}});
    Point const c{0.2, 0.1};
    double sum = 0;
    int const k = 720;
    for (int i = 0; i < k; ++i)
    {
        double const a = 2 * pi * i / k;
        sum += h({c[0] + 0.3 * std::cos(a), c[1] + 0.3 * std::sin(a)});
    }
    EXPECT_NEAR(sum / k, h(c), 1e-10);
}

TEST(Partition, MassesAndKernel)
{
    auto const& part = disk_partition();
    double total = 0;
    for (auto i : part.kept)
        total += part.mu_x0[i];
    EXPECT_NEAR(total, 1 - part.abort_fraction, 1e-12);
    EXPECT_GE(total, 0.95);
    EXPECT_EQ(part.kept.size(), 64u);
    for (std::size_t i = 0; i < 64; ++i)
        EXPECT_NEAR(part.mu_x0[i], 1.0 / 64, 4 * std::sqrt(1.0 / 64 / 50000));

    EXPECT_EQ(kernel_eval(part, part.x0, 0), 1.0);
    // Near angle 0 the kernel seen from (0.3, 0) exceeds one; at pi it is below.
    Point const x{0.3, 0.0};
    EXPECT_GT(kernel_eval(part, x, 0), 1.0);
    EXPECT_LT(kernel_eval(part, x, 32), 1.0);
    EXPECT_THROW(kernel_eval(part, x, 64), InputError);
}

TEST(Partition, ReconstructionIdentity)
{
    auto const& part = disk_partition();
    Point const x{0.3, 0.0};
    auto const one = HarmonicFunction::constant_one();
    // sum h(y_i) mu_x(A_i) equals sum_i mu_x0(A_i) h(y_i) K_i(x) exactly.
    auto const h = HarmonicFunction::poisson(0.0);
    double direct = 0;
    for (auto i : part.kept)
        direct += part.mu_x0[i] * h(part.cells.representatives[i]) * kernel_eval(part, x, i);
    EXPECT_NEAR(reconstruct(part, h, x), direct, 1e-12);
    EXPECT_NEAR(reconstruct(part, one, x), 1.0, 0.01);
    EXPECT_NEAR(reconstruct(part, h, x), h(x), 0.05 * h(x));
}

TEST(Partition, WeightsAreAffine)
{
    auto const& part = disk_partition();
    auto const a = HarmonicFunction::poisson(0.0);
    auto const b = HarmonicFunction::poisson(pi / 2);
    auto const h = HarmonicFunction::affine({{0.3, a}, {0.7, b}});
    auto const wa = weight_vector(part, a);
    auto const wb = weight_vector(part, b);
    auto const wh = weight_vector(part, h);
    ASSERT_EQ(wh.cells, wa.cells);
    for (std::size_t k = 0; k < wh.w.size(); ++k)
        EXPECT_NEAR(wh.w[k], 0.3 * wa.w[k] + 0.7 * wb.w[k], 1e-12);
    EXPECT_GE(wa.total(), 0.95);
    EXPECT_LE(wa.total(), 1.05);
}

TEST(Partition, PushKeepsMass)
{
    auto const& part = disk_partition();
    auto const w = weight_vector(part, HarmonicFunction::poisson(1.0));
    auto const pushed = push_to_boundary(part, w, 16);
    double total = 0;
    for (double m : pushed)
    {
        EXPECT_GE(m, 0.0);
        total += m;
    }
    EXPECT_NEAR(total, w.total(), 1e-12);
    // The mass concentrates in the bin containing angle 1.
    auto const peak = std::max_element(pushed.begin(), pushed.end()) - pushed.begin();
    EXPECT_EQ(peak, static_cast<long>(std::floor(1.0 / (2 * pi) * 16)));
    EXPECT_THROW(push_to_boundary(part, w, 0), InputError);
}

TEST(Partition, CutDisk)
{
    auto const part = build_partition(Domain::cut_disk(), 8, 64, {-0.3, 0.0},
                                      fast_params(20000));
    double total = 0;
    for (auto i : part.kept)
        total += part.mu_x0[i];
    EXPECT_GE(total, 0.95);
    auto const w = weight_vector(part, HarmonicFunction::constant_one());
    auto const pushed = push_to_boundary(part, w, 8);
    EXPECT_NEAR(std::accumulate(pushed.begin(), pushed.end(), 0.0), total, 1e-12);
}

TEST(Partition, PushNeedsExplicitChart)
{
    auto const part = build_partition(Domain::comb(50), 2, 16, {0.75, 0.25},
                                      fast_params(2000));
    auto const w = weight_vector(part, HarmonicFunction::constant_one());
    EXPECT_THROW(push_to_boundary(part, w, 8), InputError);
    EXPECT_THROW(build_partition(Domain::unit_disk(), 2, 16, {0.9, 0.0}),
                 InputError);
}
